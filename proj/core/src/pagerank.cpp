#include "cole/pagerank.hpp"

#include <cmath>

#include "cole/errors.hpp"

namespace cole {

PageRankVector weighted_pagerank(const PreferenceGraph& pg, double damping,
                                 double tol, int max_iter) {
  const int n = pg.size();
  if (n < 2) throw SingletonGraphError("pagerank needs n >= 2");
  if (damping <= 0.0 || damping >= 1.0) {
    throw InvalidParameterError("damping must lie in (0, 1)");
  }
  if (tol <= 0.0) throw InvalidParameterError("tol must be positive");

  const std::vector<int> indeg = pg.in_degrees();
  std::vector<std::vector<int>> fans(n);
  for (int v = 0; v < n; ++v) fans[pg.out_edge[v]].push_back(v);

  // Per-edge weight of fan v pointing at u. R(v) is the singleton {u}.
  auto edge_weight = [&](int u) {
    const double in_u = static_cast<double>(indeg[u]);
    const double out_u = 1.0;  // out-degree in this graph; 0 would become 1
    return (in_u / in_u) * (out_u / out_u);
  };

  std::vector<double> pr(n, 1.0), next(n);
  double residual = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    residual = 0.0;
    for (int u = 0; u < n; ++u) {
      double acc = 0.0;
      for (int v : fans[u]) acc += pr[v] * edge_weight(u);
      next[u] = (1.0 - damping) + damping * acc;
      residual = std::max(residual, std::fabs(next[u] - pr[u]));
    }
    pr.swap(next);
    if (residual <= tol) {
      return PageRankVector{std::move(pr), damping, residual, it};
    }
  }
  throw NoConvergenceError("pagerank did not converge", residual, max_iter);
}

PageRankVector weighted_pagerank(const PayoffMatrix& m, double damping,
                                 double tol, int max_iter, TieRule ties) {
  return weighted_pagerank(build_preference_graph(m, ties), damping, tol, max_iter);
}

}  // namespace cole
