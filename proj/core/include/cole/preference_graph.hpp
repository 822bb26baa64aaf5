#ifndef COLE_PREFERENCE_GRAPH_HPP_
#define COLE_PREFERENCE_GRAPH_HPP_

#include <string>
#include <vector>

#include "cole/payoff_matrix.hpp"

namespace cole {

enum class TieRule { kLowestIndex, kHighestIndex };

/// One out-edge per node: the partner this strategy scores highest with.
/// Self-loops are never candidates.
struct PreferenceGraph {
  std::vector<int> out_edge;

  int size() const { return static_cast<int>(out_edge.size()); }
  std::vector<int> in_degrees() const;
};

/// Argmax out-edges of the payoff matrix, ties resolved by `ties`.
PreferenceGraph build_preference_graph(const PayoffMatrix& m,
                                       TieRule ties = TieRule::kLowestIndex);

/// Preference graph of the leading prefix_len-by-prefix_len submatrix; the
/// population is generation-ordered, so prefixes replay earlier states.
PreferenceGraph sub_preference_graph(const PayoffMatrix& m, int prefix_len,
                                     TieRule ties = TieRule::kLowestIndex);

/// eta(i) = 1 - indeg(i) / (n - 1). Zero means every other strategy's best
/// partner is i; one means nobody prefers i.
std::vector<double> preference_centrality(const PreferenceGraph& pg);

/// Row t (prefix sizes 2..n) holds the centrality of the t-prefix graph,
/// NaN-padded on the right. rows() is indexed 0 -> prefix size 2.
struct CentralityHistory {
  int n = 0;
  std::vector<std::vector<double>> rows;

  /// CSV: one line per prefix, prefix size in column 0, empty fields where
  /// the row is shorter than n.
  std::string to_csv() const;
};

CentralityHistory centrality_history(const PayoffMatrix& m,
                                     TieRule ties = TieRule::kLowestIndex);

}  // namespace cole

#endif  // COLE_PREFERENCE_GRAPH_HPP_
