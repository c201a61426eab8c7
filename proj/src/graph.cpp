#include "privact/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace privact {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Dense ids follow sorted original tokens (numerically when every token is an
// integer), so writing dense ids and reloading is the identity remap.
std::vector<std::string> sorted_tokens(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  bool numeric = true;
  for (const auto& t : tokens) {
    if (!all_digits(t)) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    std::sort(tokens.begin(), tokens.end(),
              [](const std::string& a, const std::string& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
              });
  }
  return tokens;
}

}  // namespace

Graph Graph::from_edges(
    std::size_t n,
    const std::vector<std::pair<std::int32_t, std::int32_t>>& edges) {
  Graph g;
  g.adj_.assign(n, {});
  for (auto [u, v] : edges) {
    if (u == v) continue;
    g.adj_[static_cast<std::size_t>(u)].push_back(v);
    g.adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& list : g.adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.m_ += list.size();
  }
  g.m_ /= 2;
  return g;
}

bool Graph::has_edge(std::int32_t u, std::int32_t v) const {
  const auto& list = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(list.begin(), list.end(), v);
}

GraphLoadResult load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");

  GraphLoadResult result;
  std::vector<std::pair<std::string, std::string>> raw_edges;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = strip_comment(line);
    if (blank(body)) continue;
    std::istringstream ss(body);
    std::string a, b, extra;
    if (!(ss >> a >> b)) parse_fail(path, line_no, "expected \"u v\"");
    if (ss >> extra) parse_fail(path, line_no, "trailing token \"" + extra + "\"");
    if (a == b) {
      ++result.dropped_self_loops;
      std::fprintf(stderr, "warning: %s:%zu: self loop %s dropped\n",
                   path.c_str(), line_no, a.c_str());
      continue;
    }
    raw_edges.emplace_back(std::move(a), std::move(b));
  }

  std::vector<std::string> tokens;
  tokens.reserve(raw_edges.size() * 2);
  for (const auto& [a, b] : raw_edges) {
    tokens.push_back(a);
    tokens.push_back(b);
  }
  result.original_ids = sorted_tokens(std::move(tokens));
  std::unordered_map<std::string, std::int32_t> id_of;
  for (std::size_t dense = 0; dense < result.original_ids.size(); ++dense) {
    id_of.emplace(result.original_ids[dense], static_cast<std::int32_t>(dense));
  }
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [a, b] : raw_edges) {
    edges.emplace_back(id_of.at(a), id_of.at(b));
  }

  // Duplicates (including reversed) are merged silently; count them for the
  // load report.
  std::vector<std::pair<std::int32_t, std::int32_t>> canon;
  canon.reserve(edges.size());
  for (auto [u, v] : edges) canon.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(canon.begin(), canon.end());
  std::size_t unique_edges =
      static_cast<std::size_t>(std::unique(canon.begin(), canon.end()) - canon.begin());
  result.merged_duplicates = edges.size() - unique_edges;

  result.graph = Graph::from_edges(result.original_ids.size(), edges);
  return result;
}

void write_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (std::int32_t u = 0; u < static_cast<std::int32_t>(g.n()); ++u) {
    for (std::int32_t v : g.neighbors(u)) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_id_map(const std::vector<std::string>& original_ids,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (std::size_t dense = 0; dense < original_ids.size(); ++dense) {
    out << original_ids[dense] << '\t' << dense << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::size_t RatingsMatrix::entry_count() const {
  std::size_t total = 0;
  for (const auto& row : by_user) total += row.size();
  return total;
}

double RatingsMatrix::rating(std::int32_t user, std::int32_t item) const {
  const auto& row = by_user[static_cast<std::size_t>(user)];
  auto it = std::lower_bound(row.begin(), row.end(), item,
                             [](const auto& e, std::int32_t i) { return e.first < i; });
  return (it != row.end() && it->first == item) ? it->second : 0.0;
}

RatingsLoadResult load_ratings(const std::string& path,
                               const std::vector<std::string>& user_ids,
                               const RatingsLoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");

  std::unordered_map<std::string, std::int32_t> user_of;
  for (std::size_t dense = 0; dense < user_ids.size(); ++dense) {
    user_of.emplace(user_ids[dense], static_cast<std::int32_t>(dense));
  }

  RatingsLoadResult result;
  RatingsMatrix& r = result.ratings;
  r.n_users = user_ids.size();
  r.by_user.assign(r.n_users, {});

  struct RawEntry {
    std::int32_t user;
    std::string item;
    double weight;
  };
  std::vector<RawEntry> raw;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = strip_comment(line);
    if (blank(body)) continue;
    std::istringstream ss(body);
    std::string u_tok, i_tok;
    double weight;
    if (!(ss >> u_tok >> i_tok >> weight)) {
      parse_fail(path, line_no, "expected \"user item weight\"");
    }
    if (!(weight > 0.0)) {
      ++result.rejected_nonpositive;
      std::fprintf(stderr, "warning: %s:%zu: non-positive weight rejected\n",
                   path.c_str(), line_no);
      continue;
    }
    auto user_it = user_of.find(u_tok);
    if (user_it == user_of.end()) {
      if (opts.strict_users) {
        parse_fail(path, line_no, "unknown user id \"" + u_tok + "\"");
      }
      ++result.dropped_unknown_users;
      continue;
    }
    raw.push_back({user_it->second, std::move(i_tok), weight});
  }

  std::vector<std::string> tokens;
  tokens.reserve(raw.size());
  for (const auto& e : raw) tokens.push_back(e.item);
  r.item_ids = sorted_tokens(std::move(tokens));
  std::unordered_map<std::string, std::int32_t> item_of;
  for (std::size_t dense = 0; dense < r.item_ids.size(); ++dense) {
    item_of.emplace(r.item_ids[dense], static_cast<std::int32_t>(dense));
  }

  for (const auto& e : raw) {
    std::int32_t item = item_of.at(e.item);
    auto& row = r.by_user[static_cast<std::size_t>(e.user)];
    auto it = std::lower_bound(row.begin(), row.end(), item,
                               [](const auto& a, std::int32_t i) { return a.first < i; });
    if (it != row.end() && it->first == item) {
      // Duplicate (user, item): keep the larger raw weight.
      it->second = std::max(it->second, e.weight);
      ++result.merged_duplicates;
    } else {
      row.insert(it, {item, e.weight});
    }
  }
  r.n_items = r.item_ids.size();

  result.clamped = normalize_rows(r.by_user, opts.normalization, opts.global_max);
  return result;
}

std::size_t normalize_rows(
    std::vector<std::vector<std::pair<std::int32_t, double>>>& rows,
    Normalization normalization, double global_max) {
  std::size_t clamped = 0;
  if (normalization == Normalization::kMaxPerUser) {
    for (auto& row : rows) {
      double mx = 0.0;
      for (const auto& e : row) mx = std::max(mx, e.second);
      if (mx > 0.0) {
        for (auto& e : row) e.second /= mx;
      }
    }
  } else {
    if (!(global_max > 0.0)) {
      throw std::runtime_error("max-global normalization needs a positive constant");
    }
    for (auto& row : rows) {
      for (auto& e : row) {
        e.second /= global_max;
        if (e.second > 1.0) {
          e.second = 1.0;
          ++clamped;
        }
      }
    }
  }
  return clamped;
}

std::vector<std::int32_t> shortest_paths_from(const Graph& g, std::int32_t source) {
  if (source < 0 || static_cast<std::size_t>(source) >= g.n()) {
    throw std::runtime_error("BFS source out of range");
  }
  std::vector<std::int32_t> dist(g.n(), kUnreachable);
  std::vector<std::int32_t> queue;
  queue.reserve(g.n());
  dist[static_cast<std::size_t>(source)] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::int32_t u = queue[head];
    std::int32_t du = dist[static_cast<std::size_t>(u)];
    for (std::int32_t v : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] == kUnreachable) {
        dist[static_cast<std::size_t>(v)] = du + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace privact
