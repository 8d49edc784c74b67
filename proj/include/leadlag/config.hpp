#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leadlag/backtest.hpp"
#include "leadlag/capm.hpp"
#include "leadlag/detect.hpp"
#include "leadlag/panel.hpp"
#include "leadlag/scoring.hpp"

namespace leadlag {

// Date window a run is restricted to; an open side means "as far as the
// data goes".
struct SpanSpec {
    std::optional<Date> start;
    std::optional<Date> end;
};

// Everything a run needs, filled from defaults, then a config file, then
// command-line overrides (later wins).
struct RunConfig {
    std::string prices_path;
    std::string benchmark_path;
    std::string out_dir = "out";
    SpanSpec span;
    GapPolicy gaps;

    DetectionParams detection;
    Eigen::Index stride = 1;  // tensor window placement step, in days

    CapmParams capm;
    SelectionParams selection;
    StrategyParams strategy;

    std::vector<double> sweep_buy_thresholds;  // default 1.00..1.15 step 0.01
    std::vector<double> sweep_trailing_stops;  // default 0.00..1.00 step 0.05

    SynthSpec synth;
};

RunConfig default_config();

// "START:END"; either side may be empty ("2022-01-03:", ":2023-01-02").
SpanSpec parse_span(const std::string& text);

// Either "first:last:step" (inclusive, step > 0) or a comma list
// ("0.05,0.1"); a bare number is a one-element list.
std::vector<double> parse_value_list(const std::string& text);

// `key = value` lines with `#` comments and dotted section prefixes, e.g.
//
//   prices = data/prices.csv
//   detection.epsilon = 0.008
//   strategy.stop_mode = prev-close
//   sweep.buy_thresholds = 1.00:1.10:0.01
//
// Unknown keys and malformed values throw ConfigError naming the key and
// line.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "config");

}  // namespace leadlag
