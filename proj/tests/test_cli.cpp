#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = pdelearn::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pdelearn_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_json(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump();
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

fs::path only_run_dir(const fs::path& root) {
  fs::path found;
  int count = 0;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) {
      found = e.path();
      ++count;
    }
  }
  EXPECT_EQ(count, 1);
  return found;
}

}  // namespace

TEST(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"scale"}).code, 2);  // --config missing
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
  EXPECT_EQ(run({"scale", "--config", "/nonexistent/cfg.json"}).code, 2);
}

TEST(Cli, UnknownConfigKeyExitsTwo) {
  const fs::path dir = scratch("badkey");
  const Outcome o = run({"scale", "--config", write_json(dir, {{"colour", 1}}).string(), "--out", dir.string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("colour"), std::string::npos);
}

TEST(Cli, VerifyIdentities) {
  const Outcome o = run({"verify", "--suite", "identities"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("all checks passed"), std::string::npos);
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}

TEST(Cli, FitPinnExactRecoversTruth) {
  const fs::path dir = scratch("fit");
  const Outcome o = run({"fit", "--config", PDELEARN_CONFIG_DIR "/pinn_exact.json", "--out", dir.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const fs::path rd = only_run_dir(dir);
  const json errors = json::parse(slurp(rd / "errors.json"));
  EXPECT_LE(errors["H2"].get<double>(), 1e-8);
  EXPECT_TRUE(fs::exists(rd / "estimate.txt"));
  EXPECT_TRUE(fs::exists(rd / "manifest.json"));
}

TEST(Cli, ScaleWritesSchemaAndIsReproducible) {
  const json cfg = {{"d", 2}, {"s", 4}, {"z_truth", 4}, {"n_grid", {100, 400, 1600}}, {"replicates", 2}};
  const fs::path a = scratch("scale_a");
  const fs::path b = scratch("scale_b");
  ASSERT_EQ(run({"scale", "--config", write_json(a, cfg).string(), "--out", a.string(), "--plot"}).code, 0);
  ASSERT_EQ(run({"scale", "--config", write_json(b, cfg).string(), "--out", b.string(), "--plot",
                 "--threads", "2"}).code, 0);
  const fs::path ra = only_run_dir(a);
  const fs::path rb = only_run_dir(b);
  EXPECT_EQ(ra.filename(), rb.filename());

  const std::string csv = slurp(ra / "results.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,replicate,error,seed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 2);
  const json summary = json::parse(slurp(ra / "summary.json"));
  for (const char* key : {"slope", "intercept", "r2", "rows", "config"}) EXPECT_TRUE(summary.contains(key)) << key;
  const json manifest = json::parse(slurp(ra / "manifest.json"));
  for (const char* key : {"command", "config", "config_hash", "versions"}) EXPECT_TRUE(manifest.contains(key)) << key;
  EXPECT_TRUE(fs::exists(ra / "plot.svg"));

  for (const char* f : {"results.csv", "summary.json", "manifest.json", "plot.svg"}) {
    EXPECT_EQ(slurp(ra / f), slurp(rb / f)) << f;
  }
}

TEST(Cli, LowerboundPassesOnSmallGrid) {
  const fs::path dir = scratch("lower");
  const json cfg = {{"s_values", {3}}, {"d_values", {1}}, {"m_grid", {4, 8, 16}}};
  const Outcome o = run({"lowerbound", "--config", write_json(dir, cfg).string(), "--out", dir.string()});
  EXPECT_EQ(o.code, 0) << o.err;
  const fs::path rd = only_run_dir(dir);
  const std::string csv = slurp(rd / "separation_s3_d1.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m,norm,separation");
}
