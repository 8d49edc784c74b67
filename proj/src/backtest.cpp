#include "leadlag/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "leadlag/errors.hpp"

namespace leadlag {

bool buy_signal(double leader_close_today, double leader_close_prev, double buy_threshold) {
    return leader_close_today / leader_close_prev >= buy_threshold;
}

bool sell_signal_trailing(double leader_close_today, double trailing_max, double trailing_stop) {
    // Written as max - stop * max (not (1 - stop) * max) so that a close
    // sitting exactly on the stop level never triggers.
    return leader_close_today < trailing_max - trailing_stop * trailing_max;
}

bool sell_signal_prev_close(double leader_close_today, double leader_close_prev,
                            double trailing_stop) {
    return leader_close_today < leader_close_prev - trailing_stop * leader_close_prev;
}

bool execute_buy(Bucket& bucket, double lagger_close, double commission, bool fractional) {
    const double investable = bucket.cash - commission;
    if (investable <= 0.0) return false;
    if (fractional) {
        bucket.shares = investable / lagger_close;
        bucket.cash = 0.0;
        return true;
    }
    double quantity = std::floor(investable / lagger_close);
    while (quantity >= 1.0 && quantity * lagger_close > investable) quantity -= 1.0;
    if (quantity < 1.0) return false;
    bucket.shares = quantity;
    bucket.cash = investable - quantity * lagger_close;
    return true;
}

double execute_sell(Bucket& bucket, double lagger_close, double commission) {
    const double sold = bucket.shares;
    const double proceeds = sold * lagger_close;
    bucket.cash += proceeds - std::min(commission, proceeds);
    bucket.shares = 0.0;
    bucket.entry_price.reset();
    bucket.trailing_max.clear();
    return sold;
}

namespace {

// lagger -> sorted unique leaders, from one quarter's selected pairs
std::map<std::string, std::vector<std::string>> group_by_lagger(
    const std::vector<ScoredPair>& pairs) {
    std::map<std::string, std::set<std::string>> grouped;
    for (const auto& scored : pairs) grouped[scored.pair.lagger].insert(scored.pair.leader);
    std::map<std::string, std::vector<std::string>> result;
    for (const auto& [lagger, leaders] : grouped)
        result.emplace(lagger, std::vector<std::string>(leaders.begin(), leaders.end()));
    return result;
}

void check_invariants(const std::map<std::string, Bucket>& buckets, double unallocated,
                      StopMode mode) {
    if (unallocated < 0.0) throw std::logic_error("backtest invariant violated: negative cash");
    for (const auto& [lagger, bucket] : buckets) {
        if (bucket.cash < 0.0)
            throw std::logic_error("backtest invariant violated: negative cash in " + lagger);
        if (bucket.shares < 0.0)
            throw std::logic_error("backtest invariant violated: negative shares in " + lagger);
        if (bucket.shares > 0.0) {
            if (!bucket.entry_price)
                throw std::logic_error("backtest invariant violated: holding without entry price");
            if (mode == StopMode::trailing_max)
                for (const auto& leader : bucket.leaders)
                    if (!bucket.trailing_max.count(leader))
                        throw std::logic_error(
                            "backtest invariant violated: holding without trailing max");
        }
    }
}

}  // namespace

BacktestResult run_backtest(const PricePanel& panel,
                            const std::vector<QuarterSelection>& selections,
                            const StrategyParams& params, Eigen::Index span_begin,
                            Eigen::Index span_end) {
    const Eigen::Index n_days = panel.num_dates();
    if (span_end < 0) span_end = n_days - 1;
    if (span_begin < 0 || span_end >= n_days || span_begin > span_end)
        throw std::invalid_argument("backtest span out of range");
    if (selections.empty() || selections.front().date_index != span_begin)
        throw std::invalid_argument("selections must start at the first span date");
    for (std::size_t k = 0; k + 1 < selections.size(); ++k)
        if (selections[k + 1].date_index <= selections[k].date_index)
            throw std::invalid_argument("selection dates must be strictly increasing");
    if (selections.back().date_index > span_end)
        throw std::invalid_argument("selection beyond span end");

    // Resolve every referenced ticker up front; ticker_index throws DataError
    // on unknown names.
    std::map<std::string, Eigen::Index> column;
    for (const auto& selection : selections)
        for (const auto& scored : selection.pairs) {
            column[scored.pair.lagger] = panel.ticker_index(scored.pair.lagger);
            column[scored.pair.leader] = panel.ticker_index(scored.pair.leader);
        }

    std::map<Eigen::Index, const QuarterSelection*> rebalance_at;
    for (const auto& selection : selections) rebalance_at[selection.date_index] = &selection;

    BacktestResult result;
    const Eigen::Index span_len = span_end - span_begin + 1;
    result.daily_values.resize(span_len);
    result.dates.reserve(static_cast<std::size_t>(span_len));

    std::map<std::string, Bucket> buckets;
    double unallocated = params.initial_capital;

    for (Eigen::Index t = span_begin; t <= span_end; ++t) {
        const Date& today = panel.dates[static_cast<std::size_t>(t)];

        // --- phase 1: rebalance ---------------------------------------
        if (auto it = rebalance_at.find(t); it != rebalance_at.end()) {
            const auto groups = group_by_lagger(it->second->pairs);

            // Pool unallocated cash plus each bucket's cash; liquidate the
            // buckets of laggers that fell out of the selection.
            double pool = unallocated;
            unallocated = 0.0;
            for (auto bit = buckets.begin(); bit != buckets.end();) {
                Bucket& bucket = bit->second;
                if (!groups.count(bit->first)) {
                    if (bucket.shares > 0.0) {
                        const double price = panel.closes(t, column.at(bit->first));
                        const double sold = execute_sell(bucket, price, params.commission_per_trade);
                        result.trades.push_back({today, TradeAction::sell, bit->first, "", sold,
                                                 price, params.commission_per_trade,
                                                 TradeTrigger::rebalance_liquidation});
                    }
                    pool += bucket.cash;
                    bit = buckets.erase(bit);
                } else {
                    pool += bucket.cash;
                    bucket.cash = 0.0;
                    ++bit;
                }
            }

            // Rebuild the bucket set (retained positions carry through) and
            // refresh the leader lists and trailing state.
            for (const auto& [lagger, leaders] : groups) {
                Bucket& bucket = buckets[lagger];
                bucket.leaders = leaders;
                for (auto mit = bucket.trailing_max.begin(); mit != bucket.trailing_max.end();)
                    if (!std::binary_search(leaders.begin(), leaders.end(), mit->first))
                        mit = bucket.trailing_max.erase(mit);
                    else
                        ++mit;
                if (bucket.shares > 0.0)
                    for (const auto& leader : leaders)
                        bucket.trailing_max.emplace(leader, panel.closes(t, column.at(leader)));
            }

            // Even split. The last bucket takes pool minus the running sum
            // of the others, so re-summing the allocations in the same
            // (lexicographic) order reproduces the pool bit for bit.
            const std::size_t n_buckets = buckets.size();
            if (n_buckets == 0) {
                unallocated = pool;
            } else {
                const double share = pool / static_cast<double>(n_buckets);
                double allocated = 0.0;
                std::size_t k = 0;
                for (auto& [lagger, bucket] : buckets) {
                    if (++k < n_buckets) {
                        bucket.cash = share;
                        allocated += share;
                    } else {
                        bucket.cash = pool - allocated;
                    }
                }
            }
        }

        // --- phase 2: sells --------------------------------------------
        for (auto& [lagger, bucket] : buckets) {
            if (bucket.shares <= 0.0) continue;
            std::string triggered;
            for (const auto& leader : bucket.leaders) {
                const double close = panel.closes(t, column.at(leader));
                bool hit = false;
                if (params.stop_mode == StopMode::trailing_max) {
                    hit = sell_signal_trailing(close, bucket.trailing_max.at(leader),
                                               params.trailing_stop);
                } else if (t > 0) {
                    hit = sell_signal_prev_close(close, panel.closes(t - 1, column.at(leader)),
                                                 params.trailing_stop);
                }
                if (hit) {
                    triggered = leader;
                    break;
                }
            }
            if (!triggered.empty()) {
                const double price = panel.closes(t, column.at(lagger));
                const double sold = execute_sell(bucket, price, params.commission_per_trade);
                result.trades.push_back({today, TradeAction::sell, lagger, triggered, sold, price,
                                         params.commission_per_trade, TradeTrigger::stop});
            } else if (params.stop_mode == StopMode::trailing_max) {
                // Check against the old maximum first, then fold in today.
                for (const auto& leader : bucket.leaders) {
                    double& peak = bucket.trailing_max.at(leader);
                    peak = std::max(peak, panel.closes(t, column.at(leader)));
                }
            }
        }

        // --- phase 3: buys ----------------------------------------------
        if (t > 0) {
            for (auto& [lagger, bucket] : buckets) {
                if (bucket.shares > 0.0) continue;  // no pyramiding
                std::string triggered;
                for (const auto& leader : bucket.leaders) {
                    if (buy_signal(panel.closes(t, column.at(leader)),
                                   panel.closes(t - 1, column.at(leader)), params.buy_threshold)) {
                        triggered = leader;
                        break;
                    }
                }
                if (triggered.empty()) continue;
                const double price = panel.closes(t, column.at(lagger));
                if (execute_buy(bucket, price, params.commission_per_trade,
                                params.fractional_shares)) {
                    bucket.entry_price = price;
                    bucket.trailing_max.clear();
                    for (const auto& leader : bucket.leaders)
                        bucket.trailing_max.emplace(leader, panel.closes(t, column.at(leader)));
                    result.trades.push_back({today, TradeAction::buy, lagger, triggered,
                                             bucket.shares, price, params.commission_per_trade,
                                             TradeTrigger::threshold});
                } else {
                    result.skipped.push_back({today, lagger, triggered,
                                              params.fractional_shares
                                                  ? "cash does not cover commission"
                                                  : "cash short of one share plus commission"});
                }
            }
        }

        // --- final day: force-liquidate ----------------------------------
        if (t == span_end) {
            for (auto& [lagger, bucket] : buckets) {
                if (bucket.shares <= 0.0) continue;
                const double price = panel.closes(t, column.at(lagger));
                const double sold = execute_sell(bucket, price, params.commission_per_trade);
                result.trades.push_back({today, TradeAction::sell, lagger, "", sold, price,
                                         params.commission_per_trade,
                                         TradeTrigger::final_liquidation});
            }
        }

        check_invariants(buckets, unallocated, params.stop_mode);

        // --- record the close ------------------------------------------
        double total = 0.0;
        for (const auto& [lagger, bucket] : buckets)
            total += bucket.cash + bucket.shares * panel.closes(t, column.at(lagger));
        total += unallocated;
        result.daily_values(t - span_begin) = total;
        result.dates.push_back(today);
    }

    result.portfolio_return =
        (result.daily_values(span_len - 1) - params.initial_capital) / params.initial_capital;
    if (panel.benchmark) {
        const double first = (*panel.benchmark)(span_begin);
        const double last = (*panel.benchmark)(span_end);
        result.benchmark_return = (last - first) / first;
    }
    return result;
}

PerformanceReport evaluate_performance(const BacktestResult& result,
                                       const Eigen::Ref<const Eigen::VectorXd>& benchmark_levels) {
    if (benchmark_levels.size() != static_cast<Eigen::Index>(result.dates.size()))
        throw DataError("benchmark series does not cover the backtest dates");
    if (result.dates.empty()) throw DataError("empty backtest result");

    PerformanceReport report;
    report.dates = result.dates;
    report.portfolio_values = result.daily_values;
    report.benchmark_values = benchmark_levels;
    report.portfolio_curve = result.daily_values / result.daily_values(0);
    report.benchmark_curve = benchmark_levels / benchmark_levels(0);
    report.portfolio_return = result.portfolio_return;
    const Eigen::Index last = benchmark_levels.size() - 1;
    report.benchmark_return =
        (benchmark_levels(last) - benchmark_levels(0)) / benchmark_levels(0);
    report.excess_return = report.portfolio_return - report.benchmark_return;
    return report;
}

const char* to_string(TradeAction action) {
    return action == TradeAction::buy ? "buy" : "sell";
}

const char* to_string(TradeTrigger trigger) {
    switch (trigger) {
        case TradeTrigger::threshold: return "threshold";
        case TradeTrigger::stop: return "stop";
        case TradeTrigger::rebalance_liquidation: return "rebalance-liquidation";
        case TradeTrigger::final_liquidation: return "final-liquidation";
    }
    return "unknown";
}

const char* to_string(StopMode mode) {
    return mode == StopMode::trailing_max ? "trailing-max" : "prev-close";
}

std::string render_ledger_csv(const BacktestResult& result) {
    std::ostringstream out;
    out << "date,action,lagger,leader,shares,price,commission,trigger\n";
    for (const auto& trade : result.trades)
        out << format_date(trade.date) << ',' << to_string(trade.action) << ',' << trade.lagger
            << ',' << trade.leader << ',' << format_double(trade.shares) << ','
            << format_double(trade.price) << ',' << format_double(trade.commission) << ','
            << to_string(trade.trigger) << '\n';
    return out.str();
}

void write_ledger_csv(const BacktestResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << render_ledger_csv(result);
}

std::string render_daily_values_csv(const PerformanceReport& report) {
    std::ostringstream out;
    out << "date,portfolio_value,benchmark_value,portfolio_cum_return,benchmark_cum_return\n";
    for (std::size_t k = 0; k < report.dates.size(); ++k) {
        const auto idx = static_cast<Eigen::Index>(k);
        out << format_date(report.dates[k]) << ',' << format_double(report.portfolio_values(idx))
            << ',' << format_double(report.benchmark_values(idx)) << ','
            << format_double(report.portfolio_curve(idx) - 1.0) << ','
            << format_double(report.benchmark_curve(idx) - 1.0) << '\n';
    }
    return out.str();
}

void write_daily_values_csv(const PerformanceReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << render_daily_values_csv(report);
}

}  // namespace leadlag
