#include "leadlag/detect.hpp"

#include <algorithm>

namespace leadlag {

LeadLagTensor build_tensor(const ReturnsPanel& returns, const DetectionParams& params,
                           int stride) {
    if (stride < 1) throw std::invalid_argument("build_tensor: stride must be >= 1");
    if (params.lag < 1 || params.window < 1 || params.epsilon < 0.0) {
        throw std::invalid_argument("build_tensor: lag/window must be >= 1 and epsilon >= 0");
    }
    const Eigen::Index n_days = returns.num_dates();
    const Eigen::Index n = returns.num_tickers();
    const Eigen::Index span = params.window + params.lag;
    if (n_days < span) {
        throw DataError("build_tensor: " + std::to_string(n_days) +
                        " return days cannot fit one window of " + std::to_string(span));
    }

    LeadLagTensor tensor;
    tensor.tickers = returns.tickers;
    for (Eigen::Index start = 0; start + span <= n_days; start += stride) {
        // Band holds for all t in the window: |R(t+lag, i) - R(t, j)| <= eps,
        // accumulated as an AND over per-day outer differences.
        BoolMatrix slice = BoolMatrix::Constant(n, n, true);
        for (Eigen::Index t = start; t < start + params.window; ++t) {
            auto lagged = returns.returns.row(t + params.lag).transpose().replicate(1, n).array();
            auto base = returns.returns.row(t).replicate(n, 1).array();
            slice = slice && ((lagged - base).abs() <= params.epsilon);
        }
        tensor.window_starts.push_back(start);
        tensor.slices.push_back(std::move(slice));
    }
    return tensor;
}

SummedLeadMatrix sum_and_mask(const LeadLagTensor& tensor, int lookback_slices,
                              Eigen::Index end_slice) {
    if (end_slice < 0) end_slice = tensor.num_slices();
    if (end_slice > tensor.num_slices()) {
        throw std::invalid_argument("sum_and_mask: end_slice out of range");
    }
    if (lookback_slices < 1) throw std::invalid_argument("sum_and_mask: lookback must be >= 1");
    if (lookback_slices > end_slice) {
        throw DataError("sum_and_mask: lookback of " + std::to_string(lookback_slices) +
                        " slices exceeds the " + std::to_string(end_slice) + " available");
    }

    SummedLeadMatrix summed;
    summed.tickers = tensor.tickers;
    const auto n = tensor.slices.front().rows();
    summed.counts = Eigen::MatrixXi::Zero(n, n);
    for (Eigen::Index w = end_slice - lookback_slices; w < end_slice; ++w) {
        summed.counts += tensor.slices[static_cast<std::size_t>(w)].cast<int>().matrix();
    }
    summed.diagonal_masked = true;
    return summed;
}

std::vector<LeaderLaggerPair> top_pairs(const SummedLeadMatrix& summed, int count) {
    if (!summed.diagonal_masked) {
        throw std::invalid_argument("top_pairs: summed matrix must be diagonal-masked");
    }
    if (count < 0) throw std::invalid_argument("top_pairs: count must be >= 0");

    std::vector<LeaderLaggerPair> pairs;
    for (Eigen::Index i = 0; i < summed.counts.rows(); ++i) {
        for (Eigen::Index j = 0; j < summed.counts.cols(); ++j) {
            if (i == j || summed.counts(i, j) < 1) continue;
            pairs.push_back({summed.tickers[static_cast<std::size_t>(j)],
                             summed.tickers[static_cast<std::size_t>(i)], summed.counts(i, j)});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const LeaderLaggerPair& a, const LeaderLaggerPair& b) {
        if (a.strength != b.strength) return a.strength > b.strength;
        if (a.lagger != b.lagger) return a.lagger < b.lagger;
        return a.leader < b.leader;
    });
    if (static_cast<int>(pairs.size()) > count) pairs.resize(static_cast<std::size_t>(count));
    return pairs;
}

int out_degree(const SummedLeadMatrix& summed, const std::string& ticker) {
    auto it = std::find(summed.tickers.begin(), summed.tickers.end(), ticker);
    if (it == summed.tickers.end()) throw DataError("out_degree: unknown ticker '" + ticker + "'");
    return out_degree(summed.counts, static_cast<Eigen::Index>(it - summed.tickers.begin()));
}

}  // namespace leadlag
