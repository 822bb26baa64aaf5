#ifndef COLE_PAGERANK_HPP_
#define COLE_PAGERANK_HPP_

#include <vector>

#include "cole/payoff_matrix.hpp"
#include "cole/preference_graph.hpp"

namespace cole {

struct PageRankVector {
  std::vector<double> pr;
  double damping = 0.85;
  double residual = 0.0;  // max-norm at return, always <= tol
  int iterations = 0;
};

inline constexpr double kDefaultDamping = 0.85;
inline constexpr double kDefaultPagerankTol = 1e-12;
inline constexpr int kDefaultPagerankMaxIter = 100000;

/// Weighted PageRank fixed point on a one-out-edge-per-node graph:
///
///   pr(u) = (1 - d) + d * sum over fans v of pr(v) * win(v,u) * wout(v,u)
///
/// where the in/out popularity weights win and wout are each the target's
/// degree over the degree sum of v's reference list. Every reference list
/// here is a single node, so the weights reduce to 1, but they are computed
/// as written (with zero out-degrees replaced by 1) so the function stays
/// correct if the graph type ever grows multiple out-edges. Nodes with no
/// fans sit at the base value 1 - d.
///
/// Throws NoConvergenceError with the final residual after max_iter sweeps.
PageRankVector weighted_pagerank(const PreferenceGraph& pg,
                                 double damping = kDefaultDamping,
                                 double tol = kDefaultPagerankTol,
                                 int max_iter = kDefaultPagerankMaxIter);

/// Convenience: builds the preference graph of `m` first.
PageRankVector weighted_pagerank(const PayoffMatrix& m,
                                 double damping = kDefaultDamping,
                                 double tol = kDefaultPagerankTol,
                                 int max_iter = kDefaultPagerankMaxIter,
                                 TieRule ties = TieRule::kLowestIndex);

}  // namespace cole

#endif  // COLE_PAGERANK_HPP_
