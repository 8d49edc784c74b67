#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "leadlag/errors.hpp"
#include "leadlag/panel.hpp"

namespace leadlag {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Lead detection band. Stock j leads stock i when, for `window` consecutive
// days, i's return lagged by `lag` days stays within `epsilon` of j's return.
struct DetectionParams {
    int lag = 1;
    double epsilon = 0.01;
    int window = 5;
};

// True iff |lagger[t + lag] - leader[t]| <= epsilon for every t in
// [window_start, window_start + window). Throws on out-of-bounds windows.
template <typename DerivedL, typename DerivedG>
bool detect_lead(const Eigen::DenseBase<DerivedL>& leader_returns,
                 const Eigen::DenseBase<DerivedG>& lagger_returns, Eigen::Index window_start,
                 const DetectionParams& params) {
    if (params.lag < 1 || params.window < 1 || params.epsilon < 0.0) {
        throw std::invalid_argument("detect_lead: lag/window must be >= 1 and epsilon >= 0");
    }
    const Eigen::Index end = window_start + params.window;
    if (window_start < 0 || end > leader_returns.size() ||
        end + params.lag > lagger_returns.size()) {
        throw std::invalid_argument("detect_lead: window out of bounds");
    }
    for (Eigen::Index t = window_start; t < end; ++t) {
        if (std::abs(lagger_returns(t + params.lag) - leader_returns(t)) > params.epsilon) {
            return false;
        }
    }
    return true;
}

// Stack of per-window lead matrices. slices[w](i, j) is true iff ticker j
// leads ticker i over the window starting at return row window_starts[w]
// (row = lagger, column = leader).
struct LeadLagTensor {
    std::vector<Eigen::Index> window_starts;
    std::vector<BoolMatrix> slices;
    std::vector<std::string> tickers;

    Eigen::Index num_slices() const { return static_cast<Eigen::Index>(slices.size()); }
};

// One slice per window placement, starts advancing by `stride`. Throws
// DataError when the series is too short for a single placement.
LeadLagTensor build_tensor(const ReturnsPanel& returns, const DetectionParams& params,
                           int stride = 1);

// Element-wise sum of lead matrices. Diagonal values are retained in
// `counts`; `diagonal_masked` marks that selections must skip them.
struct SummedLeadMatrix {
    Eigen::MatrixXi counts;
    bool diagonal_masked = false;
    std::vector<std::string> tickers;
};

// Sums the last `lookback_slices` slices of the first `end_slice` (default:
// all). Throws DataError when the lookback exceeds the available slices.
SummedLeadMatrix sum_and_mask(const LeadLagTensor& tensor, int lookback_slices,
                              Eigen::Index end_slice = -1);

// Directed edge: `leader` anticipates `lagger` with the given summed count.
struct LeaderLaggerPair {
    std::string leader;
    std::string lagger;
    int strength = 0;

    bool operator==(const LeaderLaggerPair&) const = default;
};

// Strongest off-diagonal cells, sorted by strength descending, ties broken
// by (lagger, leader) lexicographic ascending. Zero-strength cells are never
// edges; fewer than `count` pairs may come back.
std::vector<LeaderLaggerPair> top_pairs(const SummedLeadMatrix& summed, int count = 20);

// Number of distinct laggers with a positive entry in `ticker_col`'s column,
// diagonal excluded. Works on boolean slices and integer count matrices.
template <typename Derived>
int out_degree(const Eigen::DenseBase<Derived>& matrix, Eigen::Index ticker_col) {
    if (ticker_col < 0 || ticker_col >= matrix.cols()) {
        throw std::invalid_argument("out_degree: column out of range");
    }
    int degree = 0;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        if (i == ticker_col) continue;
        if (matrix(i, ticker_col) != typename Derived::Scalar(0)) ++degree;
    }
    return degree;
}

int out_degree(const SummedLeadMatrix& summed, const std::string& ticker);

}  // namespace leadlag
