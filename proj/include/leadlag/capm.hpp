#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "leadlag/errors.hpp"

namespace leadlag {

struct CapmParams {
    double risk_free_rate = 0.02;  // annualized
    int beta_lookback = 252;       // trading days
    int periods_per_year = 252;
};

struct CapmEstimate {
    std::string ticker;
    double beta = 0.0;
    double expected_return = 0.0;  // annualized
};

// Sample covariance / sample variance over the trailing beta_lookback days.
// Both series must cover the lookback; the covariance and variance sums run
// through one loop so that beta(m, m) is exactly 1. Throws DataError when
// the market window has zero variance.
template <typename DerivedS, typename DerivedM>
double estimate_beta(const Eigen::DenseBase<DerivedS>& stock_returns,
                     const Eigen::DenseBase<DerivedM>& market_returns, const CapmParams& params) {
    if (params.beta_lookback < 2) {
        throw std::invalid_argument("estimate_beta: beta_lookback must be >= 2");
    }
    const Eigen::Index window = params.beta_lookback;
    if (stock_returns.size() < window || market_returns.size() < window) {
        throw DataError("estimate_beta: series shorter than the beta lookback of " +
                        std::to_string(window) + " days");
    }
    const Eigen::Index s0 = stock_returns.size() - window;
    const Eigen::Index m0 = market_returns.size() - window;

    double stock_mean = 0.0, market_mean = 0.0;
    for (Eigen::Index t = 0; t < window; ++t) {
        stock_mean += stock_returns(s0 + t);
        market_mean += market_returns(m0 + t);
    }
    stock_mean /= double(window);
    market_mean /= double(window);

    double covariance = 0.0, variance = 0.0;
    for (Eigen::Index t = 0; t < window; ++t) {
        const double dm = market_returns(m0 + t) - market_mean;
        covariance += (stock_returns(s0 + t) - stock_mean) * dm;
        variance += dm * dm;
    }
    if (variance == 0.0) throw DataError("estimate_beta: market window has zero variance");
    return covariance / variance;
}

// Compounds the window's daily returns and rescales geometrically to one
// year: (prod(1 + r))^(periods_per_year / n) - 1.
template <typename Derived>
double annualize_return(const Eigen::DenseBase<Derived>& daily_returns, int periods_per_year) {
    if (daily_returns.size() < 1) {
        throw std::invalid_argument("annualize_return: empty window");
    }
    if (periods_per_year < 1) {
        throw std::invalid_argument("annualize_return: periods_per_year must be >= 1");
    }
    double growth = 1.0;
    for (Eigen::Index t = 0; t < daily_returns.size(); ++t) growth *= 1.0 + daily_returns(t);
    if (growth <= 0.0) throw DataError("annualize_return: non-positive compounded growth");
    return std::pow(growth, double(periods_per_year) / double(daily_returns.size())) - 1.0;
}

// R_f + beta * (R_m - R_f), all annualized fractions.
inline double capm_expected_return(double beta, double market_return_annualized,
                                   const CapmParams& params) {
    return params.risk_free_rate + beta * (market_return_annualized - params.risk_free_rate);
}

}  // namespace leadlag
