// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "carnot");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = carnot::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  return rows;
}

std::filesystem::path temp_dir() {
  auto d = std::filesystem::temp_directory_path() / "carnot_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("slice-profile emits the default grid") {
  const Result r = invoke({"slice-profile", "--gauge", "koranyi", "--group", "heisenberg:1", "--nu", "1,0",
                           "--samples", "2e4"});
  CHECK(r.code == 0);
  CHECK(data_rows(r.out) == 41);
  CHECK(r.out.find("# seed: 7") != std::string::npos);
  CHECK(r.out.find("# grid: 41") != std::string::npos);
  CHECK(r.out.find("t,psi,psi_stderr") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({"beta", "--samples", "many"}).code == 2);
  CHECK(invoke({"beta", "--samples", "1.5"}).code == 2);
  CHECK(invoke({"beta", "--nu", "1,0,0"}).code == 2);
  CHECK(invoke({"beta", "--format", "xml"}).code == 2);
  CHECK(invoke({"beta", "--gauge", "sphere"}).code == 2);
  CHECK(invoke({"beta", "--unknown-flag"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("d_infty needs a calibration") {
  const Result refused = invoke({"beta", "--gauge", "dinf:eps2=2", "--samples", "1e4"});
  CHECK(refused.code == 1);
  CHECK(refused.err.find("calibrate-dinf") != std::string::npos);

  const auto cal = (temp_dir() / "cal.json").string();
  CHECK(invoke({"calibrate-dinf", "--format", "json", "--out", cal, "--samples", "2e4"}).code == 0);
  const Result ok = invoke({"beta", "--gauge", "dinf", "--calibration", cal, "--samples", "1e4"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("# gauge_resolved: dinf:eps2=2") != std::string::npos);
  CHECK(invoke({"beta", "--gauge", "dinf:eps2=4", "--calibration", cal, "--samples", "1e4"}).code == 1);
  CHECK(invoke({"beta", "--gauge", "dinf:eps2=0.5", "--calibration", cal, "--samples", "1e4"}).code == 0);
}

TEST_CASE("failed validation refuses unless overridden") {
  CHECK(invoke({"beta", "--gauge", "twoball:r=0.5,c=0.3", "--samples", "1e4"}).code == 1);
  CHECK(invoke({"beta", "--gauge", "twoball:r=0.5,c=0.3", "--samples", "1e4", "--override-validation"}).code == 0);
  CHECK(invoke({"validate-gauge", "--gauge", "twoball:r=0.5,c=0.3", "--samples", "2e4"}).code == 1);
  CHECK(invoke({"validate-gauge", "--gauge", "koranyi", "--samples", "2e4"}).code == 0);
}

TEST_CASE("identical arguments give identical bytes") {
  const auto dir = temp_dir();
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const std::string fmt : {"csv", "json"}) {
    const auto a = (dir / ("a." + fmt)).string(), b = (dir / ("b." + fmt)).string();
    const std::vector<std::string> args{"beta-constancy", "--samples", "1e4", "--directions", "3", "--format", fmt};
    auto with = [&](const std::string& out) {
      auto v = args;
      v.push_back("--out");
      v.push_back(out);
      return v;
    };
    CHECK(invoke(with(a)).code == 0);
    CHECK(invoke(with(b)).code == 0);
    CHECK(read(a) == read(b));
    CHECK_FALSE(read(a).empty());
  }
  const Result w1 = invoke({"slice-profile", "--samples", "2e4", "--workers", "1"});
  const Result w4 = invoke({"slice-profile", "--samples", "2e4", "--workers", "4"});
  CHECK(w1.out == w4.out);
}

TEST_CASE("config file and environment") {
  const auto cfg = temp_dir() / "run.toml";
  {
    std::ofstream f(cfg);
    f << "[slice-profile]\nseed = 11\ngrid = 5\nsamples = \"2e4\"\n";
  }
  const Result r = invoke({"--config", cfg.string(), "slice-profile"});
  CHECK(r.code == 0);
  CHECK(data_rows(r.out) == 5);
  CHECK(r.out.find("# seed: 11") != std::string::npos);
  {
    std::ofstream f(cfg);
    f << "[slice-profile]\ncolour = \"red\"\n";
  }
  CHECK(invoke({"--config", cfg.string(), "slice-profile"}).code == 2);

  setenv("CARNOT_SEED", "13", 1);
  const Result e = invoke({"slice-profile", "--grid", "5", "--samples", "2e4"});
  unsetenv("CARNOT_SEED");
  CHECK(e.out.find("# seed: 13") != std::string::npos);
}

TEST_CASE("verify reports failures through the exit code") {
  const Result ok = invoke({"verify", "--suite", "convexity,symmetry", "--gauge", "koranyi"});
  CHECK(ok.code == 0);
  const Result bad = invoke({"verify", "--suite", "symmetry", "--gauge", "aniso", "--format", "json"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("\"rotation_invariance\"") != std::string::npos);
  CHECK(invoke({"verify", "--suite", "everything"}).code == 2);
}
