#include "leadlag/graph.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace leadlag {

std::string render_graph_dot(const std::vector<LeaderLaggerPair>& pairs) {
    if (pairs.empty()) throw DataError("no lead-lag pairs");

    std::set<std::string> laggers;
    std::set<std::string> nodes;
    for (const auto& pair : pairs) {
        nodes.insert(pair.leader);
        nodes.insert(pair.lagger);
        laggers.insert(pair.lagger);
    }

    std::ostringstream out;
    out << "digraph leadlag {\n";
    for (const auto& node : nodes) {
        const char* color = laggers.count(node) ? "blue" : "red";
        out << "  \"" << node << "\" [color=" << color << "];\n";
    }
    for (const auto& pair : pairs) {
        out << "  \"" << pair.leader << "\" -> \"" << pair.lagger << "\";\n";
    }
    out << "}\n";
    return out.str();
}

void export_graph(const std::vector<LeaderLaggerPair>& pairs, const std::string& path) {
    std::string dot = render_graph_dot(pairs);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << dot;
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::string render_adjacency_csv(const SummedLeadMatrix& summed) {
    std::ostringstream out;
    out << "ticker";
    for (const auto& ticker : summed.tickers) out << ',' << ticker;
    out << '\n';
    for (Eigen::Index i = 0; i < summed.counts.rows(); ++i) {
        out << summed.tickers[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < summed.counts.cols(); ++j) out << ',' << summed.counts(i, j);
        out << '\n';
    }
    return out.str();
}

void write_adjacency_csv(const SummedLeadMatrix& summed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << render_adjacency_csv(summed);
    if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace leadlag
