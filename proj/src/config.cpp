#include "leadlag/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "leadlag/errors.hpp"

namespace leadlag {

RunConfig default_config() {
    RunConfig config;
    config.sweep_buy_thresholds = parse_value_list("1.00:1.15:0.01");
    config.sweep_trailing_stops = parse_value_list("0.00:1.00:0.05");
    return config;
}

SpanSpec parse_span(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("span must be START:END, got '" + text + "'");
    SpanSpec span;
    const std::string start = text.substr(0, colon);
    const std::string end = text.substr(colon + 1);
    try {
        if (!start.empty()) span.start = parse_date(start);
        if (!end.empty()) span.end = parse_date(end);
    } catch (const DataError& err) {
        throw ConfigError(std::string("bad span: ") + err.what());
    }
    if (span.start && span.end && !(*span.start < *span.end || *span.start == *span.end))
        throw ConfigError("span start is after span end: '" + text + "'");
    return span;
}

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double parse_double_or_throw(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ConfigError("expected a number for " + what + ", got '" + text + "'");
    return value;
}

long parse_int_or_throw(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const long value = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        throw ConfigError("expected an integer for " + what + ", got '" + text + "'");
    return value;
}

bool parse_bool_or_throw(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("expected true/false for " + what + ", got '" + text + "'");
}

StopMode parse_stop_mode(const std::string& text, const std::string& what) {
    if (text == "trailing-max") return StopMode::trailing_max;
    if (text == "prev-close") return StopMode::prev_close;
    throw ConfigError("expected trailing-max or prev-close for " + what + ", got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        parts.push_back(text.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return parts;
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "prices") config.prices_path = value;
    else if (key == "benchmark") config.benchmark_path = value;
    else if (key == "out_dir") config.out_dir = value;
    else if (key == "span") config.span = parse_span(value);
    else if (key == "gaps.max_forward_fill") config.gaps.max_forward_fill = parse_int_or_throw(value, key);
    else if (key == "gaps.drop_ticker_above") config.gaps.drop_ticker_above = parse_double_or_throw(value, key);
    else if (key == "detection.lag") config.detection.lag = parse_int_or_throw(value, key);
    else if (key == "detection.epsilon") config.detection.epsilon = parse_double_or_throw(value, key);
    else if (key == "detection.window") config.detection.window = parse_int_or_throw(value, key);
    else if (key == "detection.stride") config.stride = parse_int_or_throw(value, key);
    else if (key == "capm.risk_free_rate") config.capm.risk_free_rate = parse_double_or_throw(value, key);
    else if (key == "capm.beta_lookback") config.capm.beta_lookback = parse_int_or_throw(value, key);
    else if (key == "capm.periods_per_year") config.capm.periods_per_year = parse_int_or_throw(value, key);
    else if (key == "selection.capm_weight") config.selection.capm_weight = parse_double_or_throw(value, key);
    else if (key == "selection.outdeg_weight") config.selection.outdeg_weight = parse_double_or_throw(value, key);
    else if (key == "selection.candidate_count") config.selection.candidate_count = parse_int_or_throw(value, key);
    else if (key == "selection.select_count") config.selection.select_count = parse_int_or_throw(value, key);
    else if (key == "selection.lookback_slices") config.selection.lookback_slices = parse_int_or_throw(value, key);
    else if (key == "selection.signed_blend") config.selection.signed_blend = parse_bool_or_throw(value, key);
    else if (key == "strategy.buy_threshold") config.strategy.buy_threshold = parse_double_or_throw(value, key);
    else if (key == "strategy.trailing_stop") config.strategy.trailing_stop = parse_double_or_throw(value, key);
    else if (key == "strategy.initial_capital") config.strategy.initial_capital = parse_double_or_throw(value, key);
    else if (key == "strategy.commission") config.strategy.commission_per_trade = parse_double_or_throw(value, key);
    else if (key == "strategy.stop_mode") config.strategy.stop_mode = parse_stop_mode(value, key);
    else if (key == "strategy.fractional_shares") config.strategy.fractional_shares = parse_bool_or_throw(value, key);
    else if (key == "sweep.buy_thresholds") config.sweep_buy_thresholds = parse_value_list(value);
    else if (key == "sweep.trailing_stops") config.sweep_trailing_stops = parse_value_list(value);
    else if (key == "synth.num_tickers") config.synth.num_tickers = parse_int_or_throw(value, key);
    else if (key == "synth.num_days") config.synth.num_days = parse_int_or_throw(value, key);
    else if (key == "synth.drift") config.synth.drift = parse_double_or_throw(value, key);
    else if (key == "synth.volatility") config.synth.volatility = parse_double_or_throw(value, key);
    else if (key == "synth.per_ticker_drift") config.synth.per_ticker_drift = parse_value_list(value);
    else if (key == "synth.per_ticker_volatility") config.synth.per_ticker_volatility = parse_value_list(value);
    else if (key == "synth.start_price") config.synth.start_price = parse_double_or_throw(value, key);
    else if (key == "synth.seed") config.synth.seed = static_cast<std::uint64_t>(parse_int_or_throw(value, key));
    else if (key == "synth.with_benchmark") config.synth.with_benchmark = parse_bool_or_throw(value, key);
    else if (key == "synth.benchmark_drift") config.synth.benchmark_drift = parse_double_or_throw(value, key);
    else if (key == "synth.benchmark_volatility") config.synth.benchmark_volatility = parse_double_or_throw(value, key);
    else if (key == "synth.start_date") {
        try {
            config.synth.start_date = parse_date(value);
        } catch (const DataError& err) {
            throw ConfigError(std::string("bad synth.start_date: ") + err.what());
        }
    }
    else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
    const std::string body = trim(text);
    if (body.empty()) throw ConfigError("empty value list");
    if (body.find(':') != std::string::npos) {
        const auto parts = split(body, ':');
        if (parts.size() != 3)
            throw ConfigError("range must be first:last:step, got '" + text + "'");
        const double first = parse_double_or_throw(trim(parts[0]), "range start");
        const double last = parse_double_or_throw(trim(parts[1]), "range end");
        const double step = parse_double_or_throw(trim(parts[2]), "range step");
        if (step <= 0.0) throw ConfigError("range step must be positive");
        if (last < first) throw ConfigError("range end is below range start");
        // k*step from the start, not an accumulating sum, so the grid is
        // reproducible; the slack absorbs representation error at the end.
        const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(count) + 1);
        for (long k = 0; k <= count; ++k)
            values.push_back(first + static_cast<double>(k) * step);
        return values;
    }
    std::vector<double> values;
    for (const auto& part : split(body, ','))
        values.push_back(parse_double_or_throw(trim(part), "list entry"));
    return values;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig config = default_config();
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": missing key");
        try {
            apply_key(config, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + err.what());
        }
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

}  // namespace leadlag
