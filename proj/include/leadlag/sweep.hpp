#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "leadlag/backtest.hpp"

namespace leadlag {

struct SweepSpec {
    std::vector<double> buy_thresholds;  // strictly increasing
    std::vector<double> trailing_stops;  // strictly increasing
    StrategyParams base;                 // every other knob held fixed
};

// Final returns and buy-trade counts over the [stop x threshold] grid:
// row i = trailing_stops[i], column j = buy_thresholds[j].
struct SweepGrid {
    std::vector<double> buy_thresholds;
    std::vector<double> trailing_stops;
    Eigen::MatrixXd returns;
    Eigen::MatrixXi trade_counts;
};

// One backtest per grid cell over the same selections (the network and the
// pair selection do not depend on either swept parameter, so they are
// computed once by the caller). Throws ConfigError on an empty or
// non-increasing axis.
SweepGrid run_sweep(const PricePanel& panel, const std::vector<QuarterSelection>& selections,
                    const SweepSpec& spec, Eigen::Index span_begin = 0,
                    Eigen::Index span_end = -1);

enum class SweepAxis { hold_threshold, hold_stop };

// One row or column of the grid: returns and trade counts as a function of
// the free parameter while the other is pinned.
struct CrossSection {
    SweepAxis axis = SweepAxis::hold_stop;
    double held_value = 0.0;
    std::vector<double> values;  // the free parameter
    Eigen::VectorXd returns;
    Eigen::VectorXi trade_counts;
};

// `held_index` addresses the pinned axis: a stop row for hold_stop, a
// threshold column for hold_threshold.
CrossSection cross_section(const SweepGrid& grid, SweepAxis axis, Eigen::Index held_index);

// Long form, one row per cell, sorted by trailing_stop then buy_threshold,
// with the grid shape in a leading comment:
//   # grid <n_stops>x<n_thresholds>
//   trailing_stop,buy_threshold,portfolio_return,trade_count
std::string render_contour_csv(const SweepGrid& grid);
void write_contour_csv(const SweepGrid& grid, const std::string& path);

}  // namespace leadlag
