#include "privact/tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "privact/rng.hpp"

namespace privact {

namespace {

ClusterTree empty_tree(std::int32_t n) {
  ClusterTree t;
  t.n = n;
  std::size_t total = static_cast<std::size_t>(2 * n - 1);
  t.parent.assign(total, -1);
  t.left.assign(total, -1);
  t.right.assign(total, -1);
  t.leaf_count.assign(total, 0);
  for (std::int32_t leaf = 0; leaf < n; ++leaf) {
    t.leaf_count[static_cast<std::size_t>(leaf)] = 1;
  }
  return t;
}

[[noreturn]] void invalid(const std::string& what) {
  throw std::runtime_error("invalid cluster tree: " + what);
}

}  // namespace

ClusterTree random_tree(std::int32_t n, std::uint64_t seed) {
  if (n < 2) throw std::runtime_error("random_tree needs n >= 2");
  Rng rng(seed);
  std::vector<std::int32_t> order(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);

  ClusterTree t = empty_tree(n);
  t.root = order[0];
  std::vector<std::int32_t> nodes;  // nodes currently in the tree
  nodes.push_back(order[0]);

  for (std::int32_t i = 1; i < n; ++i) {
    std::int32_t leaf = order[static_cast<std::size_t>(i)];
    std::int32_t join = n + i - 1;
    std::int32_t at = nodes[rng.uniform_index(nodes.size())];

    t.left[static_cast<std::size_t>(join)] = at;
    t.right[static_cast<std::size_t>(join)] = leaf;
    t.leaf_count[static_cast<std::size_t>(join)] =
        t.leaf_count[static_cast<std::size_t>(at)] + 1;
    std::int32_t p = t.parent[static_cast<std::size_t>(at)];
    t.parent[static_cast<std::size_t>(join)] = p;
    if (p == -1) {
      t.root = join;
    } else if (t.left[static_cast<std::size_t>(p)] == at) {
      t.left[static_cast<std::size_t>(p)] = join;
    } else {
      t.right[static_cast<std::size_t>(p)] = join;
    }
    t.parent[static_cast<std::size_t>(at)] = join;
    t.parent[static_cast<std::size_t>(leaf)] = join;
    for (std::int32_t a = p; a != -1; a = t.parent[static_cast<std::size_t>(a)]) {
      ++t.leaf_count[static_cast<std::size_t>(a)];
    }
    nodes.push_back(leaf);
    nodes.push_back(join);
  }
  return t;
}

void validate(const ClusterTree& t) {
  if (t.n < 2) invalid("n < 2");
  std::size_t total = static_cast<std::size_t>(t.node_count());
  if (t.parent.size() != total || t.left.size() != total ||
      t.right.size() != total || t.leaf_count.size() != total) {
    invalid("array sizes disagree with n");
  }
  if (t.root < t.n || t.root >= t.node_count()) invalid("root is not internal");
  if (t.parent[static_cast<std::size_t>(t.root)] != -1) invalid("root has a parent");

  std::size_t roots = 0;
  for (std::int32_t node = 0; node < t.node_count(); ++node) {
    std::size_t i = static_cast<std::size_t>(node);
    if (t.parent[i] == -1) {
      ++roots;
      if (node != t.root) invalid("parentless node other than the root");
    }
    if (t.is_leaf(node)) {
      if (t.left[i] != -1 || t.right[i] != -1) invalid("leaf with children");
      if (t.leaf_count[i] != 1) invalid("leaf count != 1 at a leaf");
    } else {
      if (t.left[i] == -1 || t.right[i] == -1) invalid("internal node missing a child");
      for (std::int32_t c : {t.left[i], t.right[i]}) {
        if (c < 0 || c >= t.node_count()) invalid("child id out of range");
        if (t.parent[static_cast<std::size_t>(c)] != node) {
          invalid("child's parent link disagrees");
        }
      }
      if (t.leaf_count[i] !=
          t.leaf_count[static_cast<std::size_t>(t.left[i])] +
              t.leaf_count[static_cast<std::size_t>(t.right[i])]) {
        invalid("cached leaf count disagrees with children");
      }
    }
  }
  if (roots != 1) invalid("root count != 1");
  if (t.leaf_count[static_cast<std::size_t>(t.root)] != t.n) {
    invalid("root leaf count != n");
  }

  // Reachability: every node must sit under the root exactly once.
  std::vector<char> seen(total, 0);
  std::vector<std::int32_t> stack{t.root};
  std::size_t visited = 0;
  while (!stack.empty()) {
    std::int32_t node = stack.back();
    stack.pop_back();
    std::size_t i = static_cast<std::size_t>(node);
    if (seen[i]) invalid("node reachable twice");
    seen[i] = 1;
    ++visited;
    if (!t.is_leaf(node)) {
      stack.push_back(t.left[i]);
      stack.push_back(t.right[i]);
    }
  }
  if (visited != total) invalid("unreachable nodes");
}

std::vector<std::int32_t> leaves_under(const ClusterTree& t, std::int32_t node) {
  std::vector<std::int32_t> leaves;
  leaves.reserve(static_cast<std::size_t>(t.leaf_count[static_cast<std::size_t>(node)]));
  std::vector<std::int32_t> stack{node};
  while (!stack.empty()) {
    std::int32_t cur = stack.back();
    stack.pop_back();
    if (t.is_leaf(cur)) {
      leaves.push_back(cur);
    } else {
      stack.push_back(t.left[static_cast<std::size_t>(cur)]);
      stack.push_back(t.right[static_cast<std::size_t>(cur)]);
    }
  }
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

std::vector<std::int32_t> nearest_neighbors(const ClusterTree& t, std::int32_t u,
                                            std::int32_t m) {
  if (u < 0 || u >= t.n) throw std::runtime_error("vertex out of range");
  if (m < 1 || m > t.n - 1) throw std::runtime_error("m must be in [1, n-1]");
  std::vector<std::int32_t> result;
  result.reserve(static_cast<std::size_t>(m));
  std::int32_t node = u;
  while (result.size() < static_cast<std::size_t>(m)) {
    std::vector<std::int32_t> joined = leaves_under(t, t.sibling(node));
    for (std::int32_t leaf : joined) {
      if (result.size() == static_cast<std::size_t>(m)) break;
      result.push_back(leaf);
    }
    node = t.parent[static_cast<std::size_t>(node)];
  }
  return result;
}

std::string to_newick(const ClusterTree& t) {
  std::string out;
  // Iterative post-order with an explicit emit state to avoid deep recursion
  // on caterpillar trees.
  struct Frame {
    std::int32_t node;
    int stage;
  };
  std::vector<Frame> stack{{t.root, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    std::size_t i = static_cast<std::size_t>(f.node);
    if (t.is_leaf(f.node)) {
      out += std::to_string(f.node);
      stack.pop_back();
      continue;
    }
    if (f.stage == 0) {
      out += '(';
      f.stage = 1;
      stack.push_back({t.left[i], 0});
    } else if (f.stage == 1) {
      out += ',';
      f.stage = 2;
      stack.push_back({t.right[i], 0});
    } else {
      out += ')';
      stack.pop_back();
    }
  }
  out += ';';
  return out;
}

namespace {

struct NewickParser {
  const std::string& text;
  std::size_t pos = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> children;  // per internal
  std::vector<std::int32_t> leaves_seen;

  explicit NewickParser(const std::string& s) : text(s) {}

  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("newick parse error at offset " +
                             std::to_string(pos) + ": " + what);
  }

  char peek() {
    if (pos >= text.size()) fail("unexpected end");
    return text[pos];
  }

  // Returns (is_leaf, id); internal ids are indices into `children` until the
  // final renumbering pass.
  std::pair<bool, std::int32_t> node() {
    if (peek() == '(') {
      ++pos;
      auto l = node();
      if (peek() != ',') fail("expected ','");
      ++pos;
      auto r = node();
      if (peek() != ')') fail("expected ')'");
      ++pos;
      children.push_back({encode(l), encode(r)});
      return {false, static_cast<std::int32_t>(children.size() - 1)};
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected leaf id");
    std::int32_t id = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      id = id * 10 + (text[pos] - '0');
      ++pos;
    }
    leaves_seen.push_back(id);
    return {true, id};
  }

  // Leaves keep their id; internals are offset past the leaf range later, so
  // encode them negatively for now.
  static std::int32_t encode(std::pair<bool, std::int32_t> n) {
    return n.first ? n.second : -(n.second + 1);
  }
};

}  // namespace

ClusterTree from_newick(const std::string& text) {
  NewickParser p(text);
  auto root = p.node();
  if (p.pos >= text.size() || text[p.pos] != ';') p.fail("expected ';'");

  std::int32_t n = static_cast<std::int32_t>(p.leaves_seen.size());
  if (n < 2) throw std::runtime_error("newick tree needs at least 2 leaves");
  if (root.first) throw std::runtime_error("newick root must be internal");

  ClusterTree t = empty_tree(n);
  auto decode = [&](std::int32_t enc) {
    return enc >= 0 ? enc : n + (-enc - 1);
  };
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    std::int32_t node = n + static_cast<std::int32_t>(i);
    std::int32_t l = decode(p.children[i].first);
    std::int32_t r = decode(p.children[i].second);
    t.left[static_cast<std::size_t>(node)] = l;
    t.right[static_cast<std::size_t>(node)] = r;
    t.parent[static_cast<std::size_t>(l)] = node;
    t.parent[static_cast<std::size_t>(r)] = node;
  }
  t.root = n + static_cast<std::int32_t>(p.children.size()) - 1;

  // Leaf counts bottom-up; children always precede parents in `children`.
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    std::int32_t node = n + static_cast<std::int32_t>(i);
    t.leaf_count[static_cast<std::size_t>(node)] =
        t.leaf_count[static_cast<std::size_t>(t.left[static_cast<std::size_t>(node)])] +
        t.leaf_count[static_cast<std::size_t>(t.right[static_cast<std::size_t>(node)])];
  }
  validate(t);
  return t;
}

std::string canonical_signature(const ClusterTree& t) {
  std::vector<std::string> sig(static_cast<std::size_t>(t.node_count()));
  // Post-order so children are ready before their parent.
  std::vector<std::pair<std::int32_t, bool>> stack{{t.root, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    std::size_t i = static_cast<std::size_t>(node);
    if (t.is_leaf(node)) {
      sig[i] = std::to_string(node);
      continue;
    }
    if (!expanded) {
      stack.push_back({node, true});
      stack.push_back({t.left[i], false});
      stack.push_back({t.right[i], false});
      continue;
    }
    const std::string& a = sig[static_cast<std::size_t>(t.left[i])];
    const std::string& b = sig[static_cast<std::size_t>(t.right[i])];
    sig[i] = a <= b ? "(" + a + "," + b + ")" : "(" + b + "," + a + ")";
  }
  return sig[static_cast<std::size_t>(t.root)];
}

}  // namespace privact
