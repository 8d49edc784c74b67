#include "leadlag/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace leadlag {

std::vector<double> normalize_out_degree(const std::vector<int>& degrees) {
    if (degrees.empty()) throw std::invalid_argument("normalize_out_degree: empty candidate list");
    const auto [min_it, max_it] = std::minmax_element(degrees.begin(), degrees.end());
    const double lo = *min_it, hi = *max_it;

    std::vector<double> scores(degrees.size(), 1.0);
    if (lo == hi) return scores;
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        scores[k] = 1.0 - (double(degrees[k]) - lo) / (hi - lo);
    }
    return scores;
}

std::vector<ScoredPair> blend_and_select(const std::vector<LeaderLaggerPair>& candidates,
                                         const std::map<std::string, CapmEstimate>& capm_by_lagger,
                                         const std::vector<double>& outdeg_scores,
                                         const SelectionParams& params) {
    if (outdeg_scores.size() != candidates.size()) {
        throw std::invalid_argument("blend_and_select: out-degree scores must match candidates");
    }
    if (params.select_count < 0 || params.select_count > params.candidate_count) {
        throw ConfigError("select_count must be in [0, candidate_count]");
    }

    std::vector<ScoredPair> scored;
    scored.reserve(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        auto it = capm_by_lagger.find(candidates[k].lagger);
        if (it == capm_by_lagger.end()) {
            throw DataError("blend_and_select: no CAPM estimate for lagger '" +
                            candidates[k].lagger + "'");
        }
        ScoredPair sp;
        sp.pair = candidates[k];
        sp.beta = it->second.beta;
        sp.capm_component = it->second.expected_return;
        sp.outdeg_component = outdeg_scores[k];
        double sum =
            params.capm_weight * sp.capm_component + params.outdeg_weight * sp.outdeg_component;
        sp.blended = params.signed_blend ? sum : std::abs(sum);
        scored.push_back(std::move(sp));
    }

    std::sort(scored.begin(), scored.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.blended != b.blended) return a.blended > b.blended;
        if (a.pair.lagger != b.pair.lagger) return a.pair.lagger < b.pair.lagger;
        return a.pair.leader < b.pair.leader;
    });
    if (static_cast<int>(scored.size()) > params.select_count) {
        scored.resize(static_cast<std::size_t>(params.select_count));
    }
    return scored;
}

std::vector<Eigen::Index> quarterly_schedule(const std::vector<Date>& dates) {
    if (dates.empty()) throw std::invalid_argument("quarterly_schedule: empty calendar");

    std::vector<Eigen::Index> schedule{0};
    const Date first = dates.front();
    const Date last = dates.back();
    for (int year = first.year(); year <= last.year() + 1; ++year) {
        for (unsigned month : {1u, 4u, 7u, 10u}) {
            Date boundary(year, month, 1);
            if (boundary <= first || boundary > last) continue;
            auto idx = static_cast<Eigen::Index>(first_on_or_after(dates, boundary));
            if (idx < static_cast<Eigen::Index>(dates.size()) && idx != schedule.back()) {
                schedule.push_back(idx);
            }
        }
    }
    return schedule;
}

std::vector<QuarterSelection> quarterly_selections(
    const PricePanel& panel, const ReturnsPanel& returns, const LeadLagTensor& tensor,
    const DetectionParams& detection, const CapmParams& capm, const SelectionParams& selection,
    Eigen::Index span_begin, Eigen::Index span_end) {
    if (!panel.benchmark || !returns.benchmark_returns) {
        throw DataError("quarterly_selections: benchmark series required for CAPM");
    }
    if (span_begin < 0 || span_end >= panel.num_dates() || span_begin > span_end) {
        throw std::invalid_argument("quarterly_selections: bad span");
    }

    std::vector<Date> span_dates(panel.dates.begin() + span_begin,
                                 panel.dates.begin() + span_end + 1);
    std::vector<QuarterSelection> out;
    for (Eigen::Index offset : quarterly_schedule(span_dates)) {
        const Eigen::Index rebalance = span_begin + offset;
        QuarterSelection qs;
        qs.date_index = rebalance;

        // Slices observable by this close: return row k realizes at panel
        // date k+1, and a slice's last touched row is start + window + lag - 1.
        Eigen::Index admissible = 0;
        for (Eigen::Index w = 0; w < tensor.num_slices(); ++w) {
            if (tensor.window_starts[static_cast<std::size_t>(w)] + detection.window +
                    detection.lag <=
                rebalance) {
                admissible = w + 1;
            } else {
                break;
            }
        }
        const Eigen::Index capm_window = std::min<Eigen::Index>(capm.beta_lookback, rebalance);
        if (admissible == 0 || capm_window < 2) {
            out.push_back(std::move(qs));  // nothing observable yet: trade nothing
            continue;
        }

        const int lookback = static_cast<int>(
            std::min<Eigen::Index>(selection.lookback_slices, admissible));
        SummedLeadMatrix summed = sum_and_mask(tensor, lookback, admissible);
        std::vector<LeaderLaggerPair> candidates = top_pairs(summed, selection.candidate_count);
        if (candidates.empty()) {
            out.push_back(std::move(qs));
            continue;
        }

        // CAPM of each distinct lagger over the trailing return window
        // [rebalance - capm_window, rebalance - 1].
        CapmParams window_params = capm;
        window_params.beta_lookback = static_cast<int>(capm_window);
        auto market = returns.benchmark_returns->segment(rebalance - capm_window, capm_window);
        const double market_annualized = annualize_return(market, capm.periods_per_year);

        std::map<std::string, CapmEstimate> capm_by_lagger;
        std::vector<int> degrees;
        degrees.reserve(candidates.size());
        for (const auto& candidate : candidates) {
            degrees.push_back(out_degree(summed, candidate.lagger));
            if (capm_by_lagger.count(candidate.lagger)) continue;
            const Eigen::Index col = panel.ticker_index(candidate.lagger);
            CapmEstimate estimate;
            estimate.ticker = candidate.lagger;
            estimate.beta = estimate_beta(
                returns.returns.col(col).segment(rebalance - capm_window, capm_window), market,
                window_params);
            estimate.expected_return =
                capm_expected_return(estimate.beta, market_annualized, capm);
            capm_by_lagger.emplace(candidate.lagger, std::move(estimate));
        }

        qs.pairs = blend_and_select(candidates, capm_by_lagger, normalize_out_degree(degrees),
                                    selection);
        out.push_back(std::move(qs));
    }
    return out;
}

std::string render_selections_csv(const PricePanel& panel,
                                  const std::vector<QuarterSelection>& selections) {
    std::ostringstream out;
    out << "quarter_start,leader,lagger,strength,beta,capm,odeg_norm,blended\n";
    for (const auto& quarter : selections) {
        const std::string date = format_date(panel.dates[static_cast<std::size_t>(quarter.date_index)]);
        for (const auto& sp : quarter.pairs) {
            out << date << ',' << sp.pair.leader << ',' << sp.pair.lagger << ','
                << sp.pair.strength << ',' << format_double(sp.beta) << ','
                << format_double(sp.capm_component) << ',' << format_double(sp.outdeg_component)
                << ',' << format_double(sp.blended) << '\n';
        }
    }
    return out.str();
}

void write_selections_csv(const PricePanel& panel, const std::vector<QuarterSelection>& selections,
                          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << render_selections_csv(panel, selections);
    if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace leadlag
