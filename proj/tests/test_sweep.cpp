#include <doctest.h>

#include "helpers.hpp"
#include "leadlag/errors.hpp"
#include "leadlag/sweep.hpp"

using namespace leadlag;

namespace {

const std::string kFixtures = LEADLAG_FIXTURE_DIR;

PricePanel load_handsim() {
    PricePanel panel = load_price_panel(kFixtures + "/handsim_prices.csv", GapPolicy{});
    return align_calendars(panel, load_benchmark_csv(kFixtures + "/handsim_benchmark.csv"));
}

std::vector<QuarterSelection> handsim_selections() {
    ScoredPair p1, p2;
    p1.pair = {"LED1", "LAG1", 1};
    p2.pair = {"LED2", "LAG2", 1};
    QuarterSelection q1{0, {p1, p2}};
    QuarterSelection q2{4, {p1}};
    return {q1, q2};
}

}  // namespace

TEST_CASE("each sweep cell is the backtest it claims to be") {
    PricePanel panel = load_handsim();
    auto selections = handsim_selections();

    SweepSpec spec;
    spec.buy_thresholds = {1.01, 1.02, 1.05};
    spec.trailing_stops = {0.05, 0.10};
    SweepGrid grid = run_sweep(panel, selections, spec);

    REQUIRE(grid.returns.rows() == 2);
    REQUIRE(grid.returns.cols() == 3);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) {
            StrategyParams params = spec.base;
            params.trailing_stop = spec.trailing_stops[static_cast<std::size_t>(i)];
            params.buy_threshold = spec.buy_thresholds[static_cast<std::size_t>(j)];
            BacktestResult one = run_backtest(panel, selections, params);
            CHECK(grid.returns(i, j) == one.portfolio_return);
            int buys = 0;
            for (const auto& trade : one.trades) buys += trade.action == TradeAction::buy;
            CHECK(grid.trade_counts(i, j) == buys);
        }

    SUBCASE("trade counts fall as the buy threshold rises on this data") {
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j + 1 < 3; ++j)
                CHECK(grid.trade_counts(i, j) >= grid.trade_counts(i, j + 1));
    }
}

TEST_CASE("sweep axes are validated") {
    PricePanel panel = load_handsim();
    auto selections = handsim_selections();
    SweepSpec spec;

    SUBCASE("empty axis") {
        spec.buy_thresholds = {};
        spec.trailing_stops = {0.1};
        CHECK_THROWS_AS(run_sweep(panel, selections, spec), ConfigError);
    }
    SUBCASE("non-increasing axis") {
        spec.buy_thresholds = {1.02, 1.02};
        spec.trailing_stops = {0.1};
        CHECK_THROWS_AS(run_sweep(panel, selections, spec), ConfigError);
        spec.buy_thresholds = {1.05, 1.02};
        CHECK_THROWS_AS(run_sweep(panel, selections, spec), ConfigError);
    }
}

TEST_CASE("cross sections cut single rows and columns out of the grid") {
    PricePanel panel = load_handsim();
    SweepSpec spec;
    spec.buy_thresholds = {1.01, 1.02, 1.05};
    spec.trailing_stops = {0.05, 0.10};
    SweepGrid grid = run_sweep(panel, handsim_selections(), spec);

    SUBCASE("hold a stop, vary the threshold") {
        CrossSection section = cross_section(grid, SweepAxis::hold_stop, 1);
        CHECK(section.held_value == 0.10);
        CHECK(section.values == spec.buy_thresholds);
        REQUIRE(section.returns.size() == 3);
        for (Eigen::Index j = 0; j < 3; ++j) {
            CHECK(section.returns(j) == grid.returns(1, j));
            CHECK(section.trade_counts(j) == grid.trade_counts(1, j));
        }
    }
    SUBCASE("hold a threshold, vary the stop") {
        CrossSection section = cross_section(grid, SweepAxis::hold_threshold, 0);
        CHECK(section.held_value == 1.01);
        CHECK(section.values == spec.trailing_stops);
        REQUIRE(section.returns.size() == 2);
        for (Eigen::Index i = 0; i < 2; ++i) CHECK(section.returns(i) == grid.returns(i, 0));
    }
    SUBCASE("out-of-range holds are refused") {
        CHECK_THROWS_AS(cross_section(grid, SweepAxis::hold_stop, 2), std::invalid_argument);
        CHECK_THROWS_AS(cross_section(grid, SweepAxis::hold_threshold, -1),
                        std::invalid_argument);
    }
}

TEST_CASE("the contour csv is long-form, stop-major, with the grid shape up top") {
    PricePanel panel = load_handsim();
    SweepSpec spec;
    spec.buy_thresholds = {1.01, 1.02};
    spec.trailing_stops = {0.05, 0.10, 0.20};
    SweepGrid grid = run_sweep(panel, handsim_selections(), spec);

    const std::string csv = render_contour_csv(grid);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# grid 3x2");
    std::getline(in, line);
    CHECK(line == "trailing_stop,buy_threshold,portfolio_return,trade_count");

    std::vector<std::pair<double, double>> cells;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        cells.emplace_back(std::strtod(line.substr(0, c1).c_str(), nullptr),
                           std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr));
    }
    REQUIRE(cells.size() == 6);
    CHECK(std::is_sorted(cells.begin(), cells.end()));  // stop first, then threshold
}
