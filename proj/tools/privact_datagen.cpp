// Generates the benchmark-scale synthetic datasets used by the tests and the
// experiment scripts. Profiles mirror the three public datasets' user count,
// edge count, and rating style.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "privact/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synthetic social-recommendation dataset generator"};
  std::string profile_name = "lastfm";
  std::uint64_t seed = 1;
  std::string out_dir;
  app.add_option("--profile", profile_name, "lastfm | delicious | douban")
      ->check(CLI::IsMember({"lastfm", "delicious", "douban"}));
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    privact::SynthProfile profile;
    if (profile_name == "lastfm") {
      profile = privact::lastfm_like();
    } else if (profile_name == "delicious") {
      profile = privact::delicious_like();
    } else {
      profile = privact::douban_like();
    }
    privact::SynthData data = privact::generate(profile, seed);
    std::filesystem::create_directories(out_dir);
    privact::write_dataset(data, out_dir);

    std::size_t ratings = 0;
    for (const auto& row : data.raw_rows) ratings += row.size();
    std::printf("%s: %zu users, %zu edges, %zu ratings -> %s\n",
                profile_name.c_str(), data.graph.n(), data.graph.m(), ratings,
                out_dir.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
