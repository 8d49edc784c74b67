#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leadlag/panel.hpp"
#include "leadlag/scoring.hpp"

namespace leadlag {

enum class StopMode { trailing_max, prev_close };

struct StrategyParams {
    double buy_threshold = 1.02;        // leader day-over-day ratio that triggers a buy
    double trailing_stop = 0.10;        // leader drawdown fraction that triggers a sell
    double initial_capital = 500000.0;  // USD
    double commission_per_trade = 0.0;  // flat USD per executed trade
    StopMode stop_mode = StopMode::trailing_max;
    bool fractional_shares = true;
};

enum class TradeAction { buy, sell };
enum class TradeTrigger { threshold, stop, rebalance_liquidation, final_liquidation };

struct Trade {
    Date date;
    TradeAction action = TradeAction::buy;
    std::string lagger;
    std::string leader;  // triggering leader; empty for liquidations
    double shares = 0.0;
    double price = 0.0;
    double commission = 0.0;
    TradeTrigger trigger = TradeTrigger::threshold;
};

// A triggered buy that could not execute (cash below commission, or integer
// mode cannot afford one share). Kept apart from the trade ledger so ledger
// rows always carry positive share counts.
struct SkippedSignal {
    Date date;
    std::string lagger;
    std::string leader;
    std::string reason;
};

struct BacktestResult {
    std::vector<Date> dates;      // span dates
    Eigen::VectorXd daily_values; // portfolio value at each close
    std::vector<Trade> trades;
    std::vector<SkippedSignal> skipped;
    double portfolio_return = 0.0;  // (final - initial) / initial
    std::optional<double> benchmark_return;
};

// Per-lagger holdings. Multiple selected pairs sharing a lagger share one
// bucket whose buy/sell triggers are OR'd across its leaders; the trailing
// maximum is tracked per leader while the bucket holds shares.
struct Bucket {
    double cash = 0.0;
    double shares = 0.0;
    std::optional<double> entry_price;
    std::map<std::string, double> trailing_max;
    std::vector<std::string> leaders;  // sorted, unique
};

// True iff today / prev >= threshold ("increases by at least the buy
// threshold from the previous day").
bool buy_signal(double leader_close_today, double leader_close_prev, double buy_threshold);

// True iff today < max - stop * max, i.e. strictly below the stop level.
bool sell_signal_trailing(double leader_close_today, double trailing_max, double trailing_stop);

// True iff today < prev - stop * prev.
bool sell_signal_prev_close(double leader_close_today, double leader_close_prev,
                            double trailing_stop);

// All-in fill at the close: shares = (cash - commission) / price and cash
// goes to exactly zero (integer mode floors and keeps the residue as cash).
// Returns false when the signal must be skipped instead (cash does not cover
// the commission, or integer mode cannot afford one share).
bool execute_buy(Bucket& bucket, double lagger_close, double commission, bool fractional);

// Sells every share at the close. The commission is capped at the proceeds
// so cash can never go negative. Returns the shares sold.
double execute_sell(Bucket& bucket, double lagger_close, double commission);

// Event loop over the span [span_begin, span_end] (panel date indices;
// span_end < 0 means the last date). Each day applies, in order:
//   1. rebalance, when scheduled: liquidate buckets of dropped laggers at
//      the close, pool all bucket cash, and split it evenly across the new
//      distinct laggers (positions in retained laggers carry through);
//   2. sell checks (any leader past its stop sells the whole bucket);
//   3. buy checks (any leader past the buy threshold converts the bucket's
//      cash, unless it already holds shares).
// The value at each close is recorded, and the final day force-liquidates
// all positions. Buy signals compare against the previous panel date even
// when it falls before the span; the very first panel date has no previous
// close and so cannot trigger. `selections` must start at span_begin and be
// strictly increasing within the span.
BacktestResult run_backtest(const PricePanel& panel,
                            const std::vector<QuarterSelection>& selections,
                            const StrategyParams& params, Eigen::Index span_begin = 0,
                            Eigen::Index span_end = -1);

struct PerformanceReport {
    std::vector<Date> dates;
    Eigen::VectorXd portfolio_values;
    Eigen::VectorXd benchmark_values;
    Eigen::VectorXd portfolio_curve;   // normalized to 1.0 at the first date
    Eigen::VectorXd benchmark_curve;
    double portfolio_return = 0.0;
    double benchmark_return = 0.0;
    double excess_return = 0.0;  // portfolio - benchmark
};

// Benchmark-relative report; `benchmark_levels` must cover exactly the
// result's dates (throws DataError otherwise).
PerformanceReport evaluate_performance(const BacktestResult& result,
                                       const Eigen::Ref<const Eigen::VectorXd>& benchmark_levels);

// date,action,lagger,leader,shares,price,commission,trigger
std::string render_ledger_csv(const BacktestResult& result);
void write_ledger_csv(const BacktestResult& result, const std::string& path);

// date,portfolio_value,benchmark_value,portfolio_cum_return,benchmark_cum_return
std::string render_daily_values_csv(const PerformanceReport& report);
void write_daily_values_csv(const PerformanceReport& report, const std::string& path);

const char* to_string(TradeAction action);
const char* to_string(TradeTrigger trigger);
const char* to_string(StopMode mode);

}  // namespace leadlag
