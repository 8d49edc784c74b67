#include "leadlag/sweep.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "leadlag/errors.hpp"

namespace leadlag {

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw ConfigError(std::string(name) + " axis is empty");
    for (std::size_t k = 0; k + 1 < axis.size(); ++k)
        if (axis[k + 1] <= axis[k])
            throw ConfigError(std::string(name) + " axis must be strictly increasing");
}

}  // namespace

SweepGrid run_sweep(const PricePanel& panel, const std::vector<QuarterSelection>& selections,
                    const SweepSpec& spec, Eigen::Index span_begin, Eigen::Index span_end) {
    check_axis(spec.buy_thresholds, "buy threshold");
    check_axis(spec.trailing_stops, "trailing stop");

    const auto n_stops = static_cast<Eigen::Index>(spec.trailing_stops.size());
    const auto n_thresholds = static_cast<Eigen::Index>(spec.buy_thresholds.size());

    SweepGrid grid;
    grid.buy_thresholds = spec.buy_thresholds;
    grid.trailing_stops = spec.trailing_stops;
    grid.returns.resize(n_stops, n_thresholds);
    grid.trade_counts.resize(n_stops, n_thresholds);

    for (Eigen::Index i = 0; i < n_stops; ++i)
        for (Eigen::Index j = 0; j < n_thresholds; ++j) {
            StrategyParams params = spec.base;
            params.trailing_stop = spec.trailing_stops[static_cast<std::size_t>(i)];
            params.buy_threshold = spec.buy_thresholds[static_cast<std::size_t>(j)];
            const BacktestResult result =
                run_backtest(panel, selections, params, span_begin, span_end);
            grid.returns(i, j) = result.portfolio_return;
            int buys = 0;
            for (const auto& trade : result.trades)
                if (trade.action == TradeAction::buy) ++buys;
            grid.trade_counts(i, j) = buys;
        }
    return grid;
}

CrossSection cross_section(const SweepGrid& grid, SweepAxis axis, Eigen::Index held_index) {
    CrossSection section;
    section.axis = axis;
    if (axis == SweepAxis::hold_stop) {
        if (held_index < 0 || held_index >= grid.returns.rows())
            throw std::invalid_argument("stop index out of range");
        section.held_value = grid.trailing_stops[static_cast<std::size_t>(held_index)];
        section.values = grid.buy_thresholds;
        section.returns = grid.returns.row(held_index).transpose();
        section.trade_counts = grid.trade_counts.row(held_index).transpose();
    } else {
        if (held_index < 0 || held_index >= grid.returns.cols())
            throw std::invalid_argument("threshold index out of range");
        section.held_value = grid.buy_thresholds[static_cast<std::size_t>(held_index)];
        section.values = grid.trailing_stops;
        section.returns = grid.returns.col(held_index);
        section.trade_counts = grid.trade_counts.col(held_index);
    }
    return section;
}

std::string render_contour_csv(const SweepGrid& grid) {
    std::ostringstream out;
    out << "# grid " << grid.returns.rows() << 'x' << grid.returns.cols() << '\n';
    out << "trailing_stop,buy_threshold,portfolio_return,trade_count\n";
    for (Eigen::Index i = 0; i < grid.returns.rows(); ++i)
        for (Eigen::Index j = 0; j < grid.returns.cols(); ++j)
            out << format_double(grid.trailing_stops[static_cast<std::size_t>(i)]) << ','
                << format_double(grid.buy_thresholds[static_cast<std::size_t>(j)]) << ','
                << format_double(grid.returns(i, j)) << ',' << grid.trade_counts(i, j) << '\n';
    return out.str();
}

void write_contour_csv(const SweepGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << render_contour_csv(grid);
}

}  // namespace leadlag
