#include "privact/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "privact/kernels.hpp"

namespace privact {

namespace {

double cross_sum(const DissimilarityMatrix& s, const std::vector<std::int32_t>& xs,
                 const std::vector<std::int32_t>& ys) {
  const auto& outer = xs.size() <= ys.size() ? xs : ys;
  const auto& inner = xs.size() <= ys.size() ? ys : xs;
  double total = 0.0;
  for (std::int32_t x : outer) {
    total += kernels::sum_at(s.row(x), inner.data(), inner.size());
  }
  return total;
}

}  // namespace

double dasgupta_cost(const ClusterTree& t, const DissimilarityMatrix& s) {
  if (static_cast<std::size_t>(t.n) != s.n()) {
    throw std::runtime_error("tree and matrix dimensions disagree");
  }
  // Post-order merge of leaf lists; each internal node contributes the
  // cross-subtree dissimilarity sum times its leaf count.
  std::vector<std::vector<std::int32_t>> leaves(
      static_cast<std::size_t>(t.node_count()));
  double cost = 0.0;
  std::vector<std::pair<std::int32_t, bool>> stack{{t.root, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    std::size_t i = static_cast<std::size_t>(node);
    if (t.is_leaf(node)) {
      leaves[i] = {node};
      continue;
    }
    if (!expanded) {
      stack.push_back({node, true});
      stack.push_back({t.left[i], false});
      stack.push_back({t.right[i], false});
      continue;
    }
    auto& l = leaves[static_cast<std::size_t>(t.left[i])];
    auto& r = leaves[static_cast<std::size_t>(t.right[i])];
    cost += cross_sum(s, l, r) * t.leaf_count[i];
    if (l.size() < r.size()) l.swap(r);
    l.insert(l.end(), r.begin(), r.end());
    leaves[i] = std::move(l);
    r.clear();
    r.shrink_to_fit();
  }
  return cost;
}

double clique_cost(std::int64_t n) {
  if (n < 2) throw std::runtime_error("clique cost needs n >= 2");
  return static_cast<double>((n * n * n - n) / 3);
}

double s_sum(const DissimilarityMatrix& s, const std::vector<std::int32_t>& xs,
             const std::vector<std::int32_t>& ys) {
  return cross_sum(s, xs, ys);
}

double node_theta(const ClusterTree& t, const DissimilarityMatrix& s,
                  std::int32_t node) {
  if (t.is_leaf(node)) throw std::runtime_error("theta is defined on internal nodes");
  std::size_t i = static_cast<std::size_t>(node);
  auto l = leaves_under(t, t.left[i]);
  auto r = leaves_under(t, t.right[i]);
  return cross_sum(s, l, r) /
         (static_cast<double>(l.size()) * static_cast<double>(r.size()));
}

double cmn_log_cost(const ClusterTree& t, const Graph& g) {
  if (static_cast<std::size_t>(t.n) != g.n()) {
    throw std::runtime_error("tree and graph dimensions disagree");
  }
  std::size_t total = static_cast<std::size_t>(t.node_count());

  std::vector<std::int32_t> depth(total, 0);
  std::vector<std::int32_t> stack{t.root};
  while (!stack.empty()) {
    std::int32_t node = stack.back();
    stack.pop_back();
    if (t.is_leaf(node)) continue;
    std::size_t i = static_cast<std::size_t>(node);
    depth[static_cast<std::size_t>(t.left[i])] = depth[i] + 1;
    depth[static_cast<std::size_t>(t.right[i])] = depth[i] + 1;
    stack.push_back(t.left[i]);
    stack.push_back(t.right[i]);
  }

  // One pass per edge: lift to equal depth, then climb together.
  std::vector<std::int64_t> cross_edges(total, 0);
  for (std::int32_t u = 0; u < static_cast<std::int32_t>(g.n()); ++u) {
    for (std::int32_t v : g.neighbors(u)) {
      if (v <= u) continue;
      std::int32_t a = u, b = v;
      while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) {
        a = t.parent[static_cast<std::size_t>(a)];
      }
      while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) {
        b = t.parent[static_cast<std::size_t>(b)];
      }
      while (a != b) {
        a = t.parent[static_cast<std::size_t>(a)];
        b = t.parent[static_cast<std::size_t>(b)];
      }
      ++cross_edges[static_cast<std::size_t>(a)];
    }
  }

  double log_cost = 0.0;
  for (std::int32_t node = t.n; node < t.node_count(); ++node) {
    std::size_t i = static_cast<std::size_t>(node);
    std::int64_t lr =
        static_cast<std::int64_t>(t.leaf_count[static_cast<std::size_t>(t.left[i])]) *
        t.leaf_count[static_cast<std::size_t>(t.right[i])];
    std::int64_t e = cross_edges[i];
    double pi = static_cast<double>(e) / static_cast<double>(lr);
    if (e > 0) log_cost += static_cast<double>(e) * std::log(pi);
    if (lr - e > 0) log_cost += static_cast<double>(lr - e) * std::log1p(-pi);
  }
  return log_cost;
}

}  // namespace privact
