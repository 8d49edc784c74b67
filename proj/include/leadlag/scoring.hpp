#pragma once

#include <map>
#include <string>
#include <vector>

#include "leadlag/capm.hpp"
#include "leadlag/detect.hpp"
#include "leadlag/panel.hpp"

namespace leadlag {

// Pair-selection weights and sizes. The blend weighs the lagger's CAPM
// expected return against its inverted out-degree score; the top
// select_count pairs by absolute blended score trade through the quarter.
struct SelectionParams {
    double capm_weight = 0.7;
    double outdeg_weight = 0.3;
    int candidate_count = 20;
    int select_count = 6;
    int lookback_slices = 63;   // tensor slices summed before each selection
    bool signed_blend = false;  // rank by signed score instead of |score|
};

struct ScoredPair {
    LeaderLaggerPair pair;
    double beta = 0.0;              // lagger's CAPM beta
    double capm_component = 0.0;    // lagger's annualized CAPM expected return
    double outdeg_component = 0.0;  // inverted min-max score in [0, 1]
    double blended = 0.0;
};

// Inverted min-max normalization: score = 1 - (d - min) / (max - min), so a
// lower out-degree scores higher. All-equal degrees all score 1.
std::vector<double> normalize_out_degree(const std::vector<int>& degrees);

// Blends per-candidate scores and keeps the top select_count pairs, sorted
// by blended score descending, ties by (lagger, leader) ascending. Duplicate
// laggers stay in the list; buckets merge them at allocation time. Throws
// DataError when a candidate lagger has no CAPM estimate.
std::vector<ScoredPair> blend_and_select(const std::vector<LeaderLaggerPair>& candidates,
                                         const std::map<std::string, CapmEstimate>& capm_by_lagger,
                                         const std::vector<double>& outdeg_scores,
                                         const SelectionParams& params);

// First trading day on/after each Jan 1 / Apr 1 / Jul 1 / Oct 1 in the span,
// plus the very first date. Indices into `dates`, strictly increasing.
std::vector<Eigen::Index> quarterly_schedule(const std::vector<Date>& dates);

// Pairs to trade from one rebalance date (panel date index) onward.
struct QuarterSelection {
    Eigen::Index date_index = 0;
    std::vector<ScoredPair> pairs;
};

// Runs the full selection pipeline at every rebalance date in the span:
// trailing tensor slices -> summed counts -> top candidate pairs -> CAPM +
// out-degree blend -> top pairs. Uses only data observable by each rebalance
// date's close; when history is too short for the configured lookbacks it
// shrinks them, and a date with no observable window selects nothing.
// Requires a benchmark (the CAPM market series); throws DataError otherwise.
std::vector<QuarterSelection> quarterly_selections(const PricePanel& panel,
                                                   const ReturnsPanel& returns,
                                                   const LeadLagTensor& tensor,
                                                   const DetectionParams& detection,
                                                   const CapmParams& capm,
                                                   const SelectionParams& selection,
                                                   Eigen::Index span_begin, Eigen::Index span_end);

// CSV dump: quarter_start,leader,lagger,strength,beta,capm,odeg_norm,blended
std::string render_selections_csv(const PricePanel& panel,
                                  const std::vector<QuarterSelection>& selections);

void write_selections_csv(const PricePanel& panel, const std::vector<QuarterSelection>& selections,
                          const std::string& path);

}  // namespace leadlag
