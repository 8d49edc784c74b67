#pragma once

#include <string>
#include <vector>

#include "leadlag/detect.hpp"

namespace leadlag {

// DOT digraph for the pair list: edges run leader -> lagger, pure leaders are
// red, laggers (including dual-role nodes) are blue. Node order is
// lexicographic, edge order follows the input, so output is deterministic.
std::string render_graph_dot(const std::vector<LeaderLaggerPair>& pairs);

// Renders and writes; throws DataError on an empty pair list or I/O failure.
void export_graph(const std::vector<LeaderLaggerPair>& pairs, const std::string& path);

// Count matrix as CSV with a ticker header row and column (rows = laggers,
// columns = leaders).
std::string render_adjacency_csv(const SummedLeadMatrix& summed);

void write_adjacency_csv(const SummedLeadMatrix& summed, const std::string& path);

}  // namespace leadlag
