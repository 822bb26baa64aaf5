#include "cole/preference_graph.hpp"

#include <cmath>
#include <limits>

#include "cole/errors.hpp"
#include "cole/numeric_io.hpp"

namespace cole {

std::vector<int> PreferenceGraph::in_degrees() const {
  std::vector<int> indeg(out_edge.size(), 0);
  for (int target : out_edge) ++indeg[target];
  return indeg;
}

PreferenceGraph build_preference_graph(const PayoffMatrix& m, TieRule ties) {
  const int n = m.size();
  if (n < 2) throw SingletonGraphError("preference graph needs n >= 2");
  PreferenceGraph pg;
  pg.out_edge.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = i == 0 ? 1 : 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = m.at(i, j);
      const double cur = m.at(i, best);
      if (w > cur || (w == cur && ties == TieRule::kHighestIndex && j > best)) {
        best = j;
      }
    }
    pg.out_edge[i] = best;
  }
  return pg;
}

PreferenceGraph sub_preference_graph(const PayoffMatrix& m, int prefix_len,
                                     TieRule ties) {
  if (prefix_len < 2) throw SingletonGraphError("prefix needs >= 2 nodes");
  if (prefix_len > m.size()) throw OutOfRangeError("prefix longer than population");
  return build_preference_graph(m.prefix(prefix_len), ties);
}

std::vector<double> preference_centrality(const PreferenceGraph& pg) {
  const int n = pg.size();
  if (n < 2) throw SingletonGraphError("centrality needs n >= 2");
  const std::vector<int> indeg = pg.in_degrees();
  std::vector<double> eta(n);
  for (int i = 0; i < n; ++i) {
    eta[i] = 1.0 - static_cast<double>(indeg[i]) / (n - 1);
  }
  return eta;
}

CentralityHistory centrality_history(const PayoffMatrix& m, TieRule ties) {
  const int n = m.size();
  if (n < 2) throw SingletonGraphError("history needs n >= 2");
  CentralityHistory h;
  h.n = n;
  h.rows.reserve(n - 1);
  for (int t = 2; t <= n; ++t) {
    std::vector<double> row = preference_centrality(sub_preference_graph(m, t, ties));
    row.resize(n, std::numeric_limits<double>::quiet_NaN());
    h.rows.push_back(std::move(row));
  }
  return h;
}

std::string CentralityHistory::to_csv() const {
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += std::to_string(r + 2);
    for (double v : rows[r]) {
      out += ',';
      if (!std::isnan(v)) out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace cole
