// privact: learn privacy-preserving hierarchical cluster trees over a social
// graph and run recommendation / correlation experiments on them.
//
// Subcommands: tree, eval, recommend, analyze. Exit codes: 0 ok, 1 runtime
// failure, 2 usage or config error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "privact/analysis.hpp"
#include "privact/cost.hpp"
#include "privact/graph.hpp"
#include "privact/pipeline.hpp"
#include "privact/recommend.hpp"
#include "privact/tree.hpp"

namespace fs = std::filesystem;
using privact::Graph;
using privact::RatingsMatrix;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError(path + ": file not found");
}

std::string version_string() { return PRIVACT_VERSION; }

// First line of every output file: version plus the resolved configuration.
std::string preamble(const std::string& resolved) {
  std::string one_line = resolved;
  std::replace(one_line.begin(), one_line.end(), '\n', ';');
  while (!one_line.empty() && one_line.back() == ';') one_line.pop_back();
  return "# privact " + version_string() + " | " + one_line;
}

// Only the parsed subcommand's keys; the result reruns via --config.
std::string resolved_config(const CLI::App& app) {
  std::string full = app.config_to_str(true, false);
  std::string prefix;
  for (const CLI::App* sub : app.get_subcommands()) {
    if (sub->parsed()) prefix = sub->get_name() + ".";
  }
  std::istringstream in(full);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) kept += line + "\n";
  }
  return kept;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string default_out_dir() {
  const char* env = std::getenv("PRIVACT_OUT_DIR");
  return env && *env ? env : "out";
}

privact::Normalization parse_normalization(const std::string& name) {
  if (name == "per-user") return privact::Normalization::kMaxPerUser;
  if (name == "global") return privact::Normalization::kMaxGlobal;
  throw UsageError("unknown normalization \"" + name + "\"");
}

struct LoadedData {
  privact::GraphLoadResult graph;
  privact::RatingsLoadResult ratings;
};

privact::GraphLoadResult load_graph_checked(const std::string& path) {
  require_file(path);
  return privact::load_graph(path);
}

privact::RatingsLoadResult load_ratings_checked(
    const std::string& path, const std::vector<std::string>& user_ids,
    const std::string& normalization, double global_max) {
  require_file(path);
  privact::RatingsLoadOptions opts;
  opts.normalization = parse_normalization(normalization);
  opts.global_max = global_max;
  opts.strict_users = false;  // ratings and graph id sets are intersected
  auto result = privact::load_ratings(path, user_ids, opts);
  if (result.dropped_unknown_users > 0) {
    std::fprintf(stderr, "note: dropped %zu rating lines from users outside the graph\n",
                 result.dropped_unknown_users);
  }
  return result;
}

// ---------------------------------------------------------------------------
// tree

struct TreeArgs {
  std::string graph_path;
  std::vector<double> epsilons{1.0};
  std::vector<std::uint64_t> seeds{1};
  std::int32_t k = 0;
  bool no_noise = false;
  std::int64_t max_steps = 0;
  std::int64_t window = 0;
  double rel_improvement = 1e-4;
  double temperature = 1.0;
  std::int64_t trace_every = 0;  // 0 = 1 below 500 vertices, n otherwise
  bool cm_trace = false;
  bool dump_vectors = false;
  std::string out_dir;
};

std::string cell_name(bool dp, double epsilon, std::uint64_t seed) {
  return dp ? "eps" + fmt_g(epsilon) + "_seed" + std::to_string(seed)
            : "nondp_seed" + std::to_string(seed);
}

json meta_to_json(const privact::RunMetadata& meta) {
  json j;
  j["n"] = meta.n;
  j["edges"] = meta.edges;
  j["k"] = meta.k;
  j["dp"] = meta.dp;
  j["epsilon"] = meta.epsilon;
  j["effective_edge_epsilon"] = meta.effective_edge_epsilon;
  j["seed"] = meta.seed;
  j["steps"] = meta.steps;
  j["converged"] = meta.converged;
  j["initial_cost"] = meta.initial_cost;
  j["cost_opt"] = meta.cost_opt;
  j["cost_true"] = meta.cost_true;
  j["rho"] = meta.rho;
  j["pair_convention"] = meta.pair_convention;
  return j;
}

void run_tree_cell(const Graph& g, const TreeArgs& args, bool dp, double epsilon,
                   std::uint64_t seed, const std::string& resolved) {
  privact::PipelineConfig cfg;
  cfg.dp = dp;
  cfg.epsilon = epsilon;
  cfg.k = args.k;
  cfg.seed = seed;
  cfg.mcmc.max_steps = args.max_steps;
  cfg.mcmc.window = args.window;
  cfg.mcmc.rel_improvement = args.rel_improvement;
  cfg.mcmc.temperature = args.temperature;

  std::int64_t every = args.trace_every;
  if (every <= 0) every = g.n() < 500 ? 1 : static_cast<std::int64_t>(g.n());

  fs::path dir = fs::path(args.out_dir) / cell_name(dp, epsilon, seed);
  fs::create_directories(dir);

  std::string header = args.cm_trace ? "step,cost,accepted,log_cm" : "step,cost,accepted";
  std::ostringstream trace;
  trace << preamble(resolved) << '\n' << header << '\n';
  const Graph* graph_for_cm = &g;
  privact::StepObserver observer = [&](std::int64_t step, double cost, bool accepted,
                                       const privact::ClusterTree& tree) {
    if (step % every != 0) return;
    trace << step << ',' << fmt_double(cost) << ',' << (accepted ? 1 : 0);
    if (args.cm_trace) {
      trace << ',' << fmt_double(privact::cmn_log_cost(tree, *graph_for_cm));
    }
    trace << '\n';
  };

  privact::PipelineResult result = privact::run_pipeline(g, cfg, observer);

  write_text((dir / "tree.nwk").string(), privact::to_newick(result.tree) + "\n");
  write_text((dir / "trace.csv").string(), trace.str());
  write_text((dir / "resolved.cfg").string(), resolved);

  json j;
  j["version"] = version_string();
  j["tool"] = "privact tree";
  j["dataset"] = args.graph_path;
  j.update(meta_to_json(result.meta));
  j["resolved_config"] = resolved;
  write_text((dir / "run.json").string(), j.dump(2) + "\n");

  if (args.dump_vectors) {
    std::ostringstream csv;
    csv << preamble(resolved) << '\n' << "vertex,bin,value\n";
    for (std::size_t v = 0; v < result.vectors.size(); ++v) {
      for (std::size_t b = 0; b < result.vectors[v].size(); ++b) {
        csv << v << ',' << b << ',' << fmt_double(result.vectors[v][b]) << '\n';
      }
    }
    write_text((dir / "vectors.csv").string(), csv.str());
  }
  std::printf("%s: steps=%lld converged=%d cost_opt=%.6g cost_true=%.6g\n",
              cell_name(dp, epsilon, seed).c_str(),
              static_cast<long long>(result.meta.steps),
              result.meta.converged ? 1 : 0, result.meta.cost_opt,
              result.meta.cost_true);
}

int cmd_tree(const TreeArgs& args, const std::string& resolved) {
  auto loaded = load_graph_checked(args.graph_path);
  fs::create_directories(args.out_dir);
  privact::write_id_map(loaded.original_ids,
                        (fs::path(args.out_dir) / "id_map.tsv").string());
  if (args.no_noise) {
    for (std::uint64_t seed : args.seeds) {
      run_tree_cell(loaded.graph, args, false, 0.0, seed, resolved);
    }
  } else {
    for (double eps : args.epsilons) {
      if (!(eps > 0.0)) throw UsageError("epsilon must be positive");
      for (std::uint64_t seed : args.seeds) {
        run_tree_cell(loaded.graph, args, true, eps, seed, resolved);
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string graph_path;
  std::vector<std::string> run_dirs;
  std::string out_dir;
};

struct LoadedRun {
  std::string dir;
  json meta;
  privact::ClusterTree tree;
};

LoadedRun load_run(const std::string& dir) {
  require_file(dir + "/run.json");
  require_file(dir + "/tree.nwk");
  LoadedRun run;
  run.dir = dir;
  std::ifstream meta_in(dir + "/run.json");
  meta_in >> run.meta;
  std::ifstream tree_in(dir + "/tree.nwk");
  std::string text((std::istreambuf_iterator<char>(tree_in)),
                   std::istreambuf_iterator<char>());
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  run.tree = privact::from_newick(text);
  return run;
}

int cmd_eval(const EvalArgs& args, const std::string& resolved) {
  auto loaded = load_graph_checked(args.graph_path);
  const Graph& g = loaded.graph;

  std::vector<LoadedRun> runs;
  for (const auto& dir : args.run_dirs) runs.push_back(load_run(dir));
  if (runs.empty()) throw UsageError("no run directories given");

  // Rebuild each run's true dissimilarity matrix from its recorded seed/K and
  // rescore the stored tree on it.
  struct Row {
    const LoadedRun* run;
    double cost_true;
    double log_cm;
  };
  std::vector<Row> rows;
  for (const auto& run : runs) {
    if (run.meta.at("n").get<std::size_t>() != g.n()) {
      throw std::runtime_error(run.dir + ": tree and graph dimensions disagree");
    }
    privact::DissimilarityMatrix s_true = privact::true_dissimilarity(
        g, run.meta.at("k").get<std::int32_t>(),
        run.meta.at("seed").get<std::uint64_t>());
    rows.push_back({&run, privact::dasgupta_cost(run.tree, s_true),
                    privact::cmn_log_cost(run.tree, g)});
  }

  // Per-seed non-DP reference costs plus the best observed (OPT estimate).
  std::map<std::uint64_t, double> nondp_by_seed;
  double opt_est = 0.0;
  bool have_nondp = false;
  for (const auto& row : rows) {
    if (row.run->meta.at("dp").get<bool>()) continue;
    std::uint64_t seed = row.run->meta.at("seed").get<std::uint64_t>();
    nondp_by_seed[seed] = std::max(nondp_by_seed.count(seed) ? nondp_by_seed[seed] : 0.0,
                                   row.cost_true);
    opt_est = have_nondp ? std::max(opt_est, row.cost_true) : row.cost_true;
    have_nondp = true;
  }

  fs::create_directories(args.out_dir);
  std::ostringstream utility;
  utility << preamble(resolved) << '\n'
          << "cell,dp,epsilon,seed,k,cost_true,cost_nondp,empirical_loss,"
             "relative_utility,rho,bound,opt_est_minus_cost,bound_ok\n";
  std::ostringstream cm;
  cm << preamble(resolved) << '\n' << "cell,dp,epsilon,seed,log_cm\n";

  for (const auto& row : rows) {
    const json& meta = row.run->meta;
    bool dp = meta.at("dp").get<bool>();
    double eps = meta.at("epsilon").get<double>();
    std::uint64_t seed = meta.at("seed").get<std::uint64_t>();
    std::int32_t k = meta.at("k").get<std::int32_t>();
    std::string cell = fs::path(row.run->dir).filename().string();

    cm << cell << ',' << (dp ? 1 : 0) << ',' << fmt_g(eps) << ',' << seed << ','
       << fmt_double(row.log_cm) << '\n';

    if (!dp) continue;
    if (!nondp_by_seed.count(seed)) {
      throw std::runtime_error("no non-DP run with seed " + std::to_string(seed) +
                               " to compare against");
    }
    privact::UtilityReport rep = privact::utility_report(
        row.cost_true, nondp_by_seed[seed], g.n(), k, eps);
    double gap = opt_est - row.cost_true;
    utility << cell << ",1," << fmt_g(eps) << ',' << seed << ',' << k << ','
            << fmt_double(row.cost_true) << ',' << fmt_double(rep.cost_nondp) << ','
            << fmt_double(rep.empirical_loss) << ','
            << fmt_double(rep.relative_utility) << ',' << fmt_double(rep.rho) << ','
            << fmt_double(rep.bound) << ',' << fmt_double(gap) << ','
            << (gap <= rep.bound ? 1 : 0) << '\n';
  }
  write_text((fs::path(args.out_dir) / "utility.csv").string(), utility.str());
  write_text((fs::path(args.out_dir) / "cm.csv").string(), cm.str());
  std::printf("wrote %s and %s\n",
              (fs::path(args.out_dir) / "utility.csv").string().c_str(),
              (fs::path(args.out_dir) / "cm.csv").string().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// recommend

struct RecommendArgs {
  std::string graph_path;
  std::string ratings_path;
  std::string normalization = "per-user";
  double global_max = 5.0;
  std::string run_dir;  // cell with tree.nwk + vectors.csv
  std::vector<std::string> methods{"itemavg", "friendscf", "privactcf"};
  std::int32_t folds = 5;
  std::int32_t top_k = 100;
  std::uint64_t cv_seed = 1;
  bool capture_items = false;
  std::string out_dir;
};

std::vector<privact::DegreeVector> load_vectors_csv(const std::string& path,
                                                    std::size_t n) {
  require_file(path);
  std::ifstream in(path);
  std::vector<privact::DegreeVector> vectors(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("vertex,", 0) == 0) continue;
    std::istringstream ss(line);
    std::string v_str, b_str, val_str;
    if (!std::getline(ss, v_str, ',') || !std::getline(ss, b_str, ',') ||
        !std::getline(ss, val_str)) {
      throw std::runtime_error(path + ": bad vectors row \"" + line + "\"");
    }
    std::size_t v = std::stoull(v_str);
    std::size_t b = std::stoull(b_str);
    if (v >= n) throw std::runtime_error(path + ": vertex out of range");
    if (vectors[v].size() <= b) vectors[v].resize(b + 1, 0.0);
    vectors[v][b] = std::stod(val_str);
  }
  return vectors;
}

int method_index(std::string token) {
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  token.erase(std::remove(token.begin(), token.end(), '-'), token.end());
  if (token == "itemavg") return privact::kItemAvg;
  if (token == "friendscf") return privact::kFriendsCf;
  if (token == "privactcf") return privact::kPrivactCf;
  throw UsageError("unknown method \"" + token + "\"");
}

int cmd_recommend(const RecommendArgs& args, const std::string& resolved) {
  std::vector<int> methods;
  for (const auto& token : args.methods) methods.push_back(method_index(token));
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  auto loaded = load_graph_checked(args.graph_path);
  const Graph& g = loaded.graph;
  auto ratings = load_ratings_checked(args.ratings_path, loaded.original_ids,
                                      args.normalization, args.global_max);

  LoadedRun run = load_run(args.run_dir);
  auto vectors = load_vectors_csv(args.run_dir + "/vectors.csv", g.n());

  privact::CvConfig cfg;
  cfg.folds = args.folds;
  cfg.top_k = args.top_k;
  cfg.seed = args.cv_seed;
  cfg.capture_items = args.capture_items;
  privact::CvResult cv =
      privact::cross_validate(g, ratings.ratings, run.tree, vectors, cfg);

  fs::create_directories(args.out_dir);
  std::ostringstream per_user;
  per_user << preamble(resolved) << '\n' << "user,fold,method,ndcg,map,ap\n";
  for (const auto& e : cv.users) {
    for (int m : methods) {
      per_user << e.user << ',' << e.fold << ',' << privact::method_name(m) << ','
               << fmt_double(e.ndcg[m]) << ',' << fmt_double(e.map[m]) << ','
               << fmt_double(e.ap[m]) << '\n';
    }
  }
  write_text((fs::path(args.out_dir) / "per_user.csv").string(), per_user.str());

  if (args.capture_items) {
    std::ostringstream items;
    items << preamble(resolved) << '\n' << "user,method,rank,item\n";
    for (const auto& e : cv.users) {
      for (int m : methods) {
        for (std::size_t rank = 0; rank < e.top_items[m].size(); ++rank) {
          items << e.user << ',' << privact::method_name(m) << ',' << rank + 1 << ','
                << e.top_items[m][rank] << '\n';
        }
      }
    }
    write_text((fs::path(args.out_dir) / "top_items.csv").string(), items.str());
  }

  json summary;
  summary["version"] = version_string();
  summary["tool"] = "privact recommend";
  summary["dataset"] = args.ratings_path;
  summary["folds"] = args.folds;
  summary["top_k"] = args.top_k;
  summary["cv_seed"] = args.cv_seed;
  summary["evaluated_users"] = cv.users.size();
  summary["skipped_users_without_ratings"] = cv.skipped_no_ratings;
  summary["map_normalization"] = "N = min(|relevant|, k) clamped to >= 1";
  summary["aggregation"] = "mean over evaluated users";
  for (int m : methods) {
    json entry;
    entry["ndcg"] = cv.mean_ndcg[m];
    entry["map"] = cv.mean_map[m];
    entry["ap"] = cv.mean_ap[m];
    entry["empty_neighbor_fallbacks"] = cv.empty_neighbor_fallbacks[m];
    summary["methods"][privact::method_name(m)] = entry;
  }
  summary["resolved_config"] = resolved;
  write_text((fs::path(args.out_dir) / "summary.json").string(),
             summary.dump(2) + "\n");

  for (int m : methods) {
    std::printf("%-10s ndcg=%.6g map=%.6g ap=%.6g\n", privact::method_name(m),
                cv.mean_ndcg[m], cv.mean_map[m], cv.mean_ap[m]);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string graph_path;
  std::string ratings_path;
  std::string normalization = "per-user";
  double global_max = 5.0;
  std::string similarity_mode;  // "partial" | "full" | "" (skip)
  std::string per_user_csv;     // from recommend, for the ranking-quality study
  std::string top_items_csv;
  std::string method = "privactcf";
  std::string out_dir;
};

int cmd_analyze(const AnalyzeArgs& args, const std::string& resolved) {
  auto loaded = load_graph_checked(args.graph_path);
  const Graph& g = loaded.graph;
  auto ratings = load_ratings_checked(args.ratings_path, loaded.original_ids,
                                      args.normalization, args.global_max);
  fs::create_directories(args.out_dir);

  if (!args.similarity_mode.empty()) {
    privact::ProfileMode mode;
    if (args.similarity_mode == "partial") {
      mode = privact::ProfileMode::kPartial;
    } else if (args.similarity_mode == "full") {
      mode = privact::ProfileMode::kFull;
    } else {
      throw UsageError("similarity mode must be partial or full");
    }
    privact::CorrelationSummary summary =
        privact::distance_similarity_correlation(g, ratings.ratings, mode);
    std::ostringstream csv;
    csv << preamble(resolved) << '\n'
        << "# similarity=cosine distance=hops scale=unordered\n"
        << "user,pearson_r\n";
    for (const auto& [user, r] : summary.per_user) {
      csv << user << ',' << fmt_double(r) << '\n';
    }
    std::string name = "similarity_" + args.similarity_mode + ".csv";
    write_text((fs::path(args.out_dir) / name).string(), csv.str());

    json j;
    j["version"] = version_string();
    j["tool"] = "privact analyze";
    j["mode"] = args.similarity_mode;
    j["similarity"] = "cosine";
    j["users_evaluated"] = summary.per_user.size();
    j["users_skipped"] = summary.skipped;
    j["negative_fraction"] = summary.negative_fraction;
    j["min_r"] = summary.min_r;
    j["max_r"] = summary.max_r;
    j["resolved_config"] = resolved;
    write_text((fs::path(args.out_dir) / ("similarity_" + args.similarity_mode + ".json"))
                   .string(),
               j.dump(2) + "\n");
    std::printf("similarity %s: %.1f%% negative over %zu users, range [%.4g, %.4g]\n",
                args.similarity_mode.c_str(), 100.0 * summary.negative_fraction,
                summary.per_user.size(), summary.min_r, summary.max_r);
  }

  if (!args.per_user_csv.empty()) {
    if (args.top_items_csv.empty()) {
      throw UsageError("--top-items is required with --per-user");
    }
    require_file(args.per_user_csv);
    require_file(args.top_items_csv);
    std::string wanted = privact::method_name(method_index(args.method));

    std::map<std::int32_t, double> ndcg_by_user;
    {
      std::ifstream in(args.per_user_csv);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("user,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string user, fold, method, ndcg;
        std::getline(ss, user, ',');
        std::getline(ss, fold, ',');
        std::getline(ss, method, ',');
        std::getline(ss, ndcg, ',');
        if (method != wanted) continue;
        ndcg_by_user[std::stoi(user)] = std::stod(ndcg);
      }
    }
    std::map<std::int32_t, std::vector<std::int32_t>> items_by_user;
    {
      std::ifstream in(args.top_items_csv);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("user,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string user, method, rank, item;
        std::getline(ss, user, ',');
        std::getline(ss, method, ',');
        std::getline(ss, rank, ',');
        std::getline(ss, item, ',');
        if (method != wanted) continue;
        items_by_user[std::stoi(user)].push_back(std::stoi(item));
      }
    }
    std::vector<std::int32_t> users;
    std::vector<double> ndcg;
    std::vector<std::vector<std::int32_t>> top_items;
    for (const auto& [user, value] : ndcg_by_user) {
      auto it = items_by_user.find(user);
      if (it == items_by_user.end()) continue;
      users.push_back(user);
      ndcg.push_back(value);
      top_items.push_back(it->second);
    }
    privact::NdcgPathResult result =
        privact::ndcg_path_correlation(g, ratings.ratings, users, ndcg, top_items);

    json j;
    j["version"] = version_string();
    j["tool"] = "privact analyze";
    j["method"] = wanted;
    j["users_used"] = result.users_used;
    j["users_skipped"] = result.users_skipped;
    if (result.r) {
      j["pearson_r"] = *result.r;
    } else {
      j["pearson_r"] = nullptr;
      j["note"] = "undefined (zero variance or too few users)";
    }
    j["resolved_config"] = resolved;
    write_text((fs::path(args.out_dir) / "ndcg_path.json").string(), j.dump(2) + "\n");
    if (result.r) {
      std::printf("ndcg/path correlation (%s): r=%.4g over %zu users\n", wanted.c_str(),
                  *result.r, result.users_used);
    } else {
      std::printf("ndcg/path correlation (%s): undefined\n", wanted.c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private hierarchical cluster trees for social "
               "recommendation"};
  app.set_version_flag("--version", version_string());
  app.set_config("--config", "", "key = value config file; flags win");
  app.require_subcommand(1);

  TreeArgs tree_args;
  tree_args.out_dir = default_out_dir();
  CLI::App* tree = app.add_subcommand(
      "tree", "learn cluster trees from local degree vectors");
  tree->add_option("--graph", tree_args.graph_path, "edge list file")->required();
  tree->add_option("--epsilon", tree_args.epsilons, "privacy budgets (one run each)");
  tree->add_option("--seed", tree_args.seeds, "run seeds (one run each)");
  tree->add_option("--k", tree_args.k, "bin count; 0 = floor(log2 n)");
  tree->add_flag("--no-noise", tree_args.no_noise, "skip the noise step");
  tree->add_option("--max-steps", tree_args.max_steps, "proposal cap; 0 = 500n");
  tree->add_option("--window", tree_args.window, "convergence window; 0 = 50n");
  tree->add_option("--rel-improvement", tree_args.rel_improvement,
                   "window-mean relative improvement threshold");
  tree->add_option("--temperature", tree_args.temperature,
                   "experimental acceptance divisor (1 = plain rule)");
  tree->add_option("--trace-every", tree_args.trace_every,
                   "trace row stride; 0 = auto");
  tree->add_flag("--cm-trace", tree_args.cm_trace,
                 "add a graph log-likelihood column to the trace");
  tree->add_flag("--dump-vectors", tree_args.dump_vectors,
                 "write the degree vectors used by the run");
  tree->add_option("--out", tree_args.out_dir, "output directory");

  EvalArgs eval_args;
  eval_args.out_dir = default_out_dir();
  CLI::App* eval = app.add_subcommand("eval", "score stored trees on the true matrix");
  eval->add_option("--graph", eval_args.graph_path, "edge list file")->required();
  eval->add_option("--runs", eval_args.run_dirs, "run cell directories")->required();
  eval->add_option("--out", eval_args.out_dir, "output directory");

  RecommendArgs rec_args;
  rec_args.out_dir = default_out_dir();
  CLI::App* rec = app.add_subcommand("recommend", "cold-start recommendation study");
  rec->add_option("--graph", rec_args.graph_path, "edge list file")->required();
  rec->add_option("--ratings", rec_args.ratings_path, "user item weight file")->required();
  rec->add_option("--normalization", rec_args.normalization, "per-user | global");
  rec->add_option("--global-max", rec_args.global_max, "divisor for global normalization");
  rec->add_option("--run", rec_args.run_dir,
                  "tree run directory (needs tree.nwk, vectors.csv, run.json)")
      ->required();
  rec->add_option("--methods", rec_args.methods, "itemavg friendscf privactcf");
  rec->add_option("--folds", rec_args.folds, "cross-validation folds");
  rec->add_option("--top-k", rec_args.top_k, "ranking cutoff");
  rec->add_option("--cv-seed", rec_args.cv_seed, "fold shuffle seed");
  rec->add_flag("--capture-items", rec_args.capture_items, "write top_items.csv");
  rec->add_option("--out", rec_args.out_dir, "output directory");

  AnalyzeArgs an_args;
  an_args.out_dir = default_out_dir();
  CLI::App* an = app.add_subcommand("analyze", "correlation studies");
  an->add_option("--graph", an_args.graph_path, "edge list file")->required();
  an->add_option("--ratings", an_args.ratings_path, "user item weight file")->required();
  an->add_option("--normalization", an_args.normalization, "per-user | global");
  an->add_option("--global-max", an_args.global_max, "divisor for global normalization");
  an->add_option("--similarity", an_args.similarity_mode,
                 "distance vs profile-similarity mode: partial | full");
  an->add_option("--per-user", an_args.per_user_csv, "per_user.csv from recommend");
  an->add_option("--top-items", an_args.top_items_csv, "top_items.csv from recommend");
  an->add_option("--method", an_args.method, "method column to correlate");
  an->add_option("--out", an_args.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string resolved = resolved_config(app);
    if (tree->parsed()) return cmd_tree(tree_args, resolved);
    if (eval->parsed()) return cmd_eval(eval_args, resolved);
    if (rec->parsed()) return cmd_recommend(rec_args, resolved);
    if (an->parsed()) return cmd_analyze(an_args, resolved);
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
