/*
 * Copyright 2026 The ACDS Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "acds/cli.hpp"
#include "acds/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "acds");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = acds::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("acds_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("bound prints C, theta and N") {
  const Outcome o = invoke({"bound", "--n", "10", "--p", "2", "--eps", "1e-2"});
  CHECK(o.code == 0);
  CHECK(o.out.find("C=100\n") != std::string::npos);
  CHECK(o.out.find("theta=1\n") != std::string::npos);
  CHECK(o.out.find("N=200\n") != std::string::npos);
}

TEST_CASE("run with zero iterations writes a one-row trace") {
  const fs::path dir = scratch("run0");
  const Outcome o = invoke({"run", "--problem", "quadratic", "--n", "10", "--p", "1",
                            "--iters", "0", "--seed", "3", "--out", dir.string()});
  CHECK(o.code == 0);
  const auto rows = acds::read_trace_csv(dir / "trace.csv");
  CHECK(rows.size() == 1);
  const auto meta = read_json(dir / "run.json");
  CHECK(meta["config"]["seed"] == 3);
  CHECK(meta["invocation"]["flags"]["iters"] == "0");
  CHECK(meta["sampler"].get<std::string>().find("xoshiro256") != std::string::npos);
}

TEST_CASE("verify reports the projection identity") {
  const Outcome o = invoke({"verify", "--n", "100", "--q", "2", "--samples", "200000",
                            "--seed", "7"});
  CHECK(o.code == 0);
  CHECK(o.out.find("PASS projection_second_moment n=100") != std::string::npos);
  CHECK(o.out.find("FAIL") == std::string::npos);
}

TEST_CASE("verify JSON report fields") {
  const fs::path dir = scratch("verify");
  const Outcome o = invoke({"verify", "--n", "8", "--q", "inf", "--samples", "5000",
                            "--json", (dir / "r.json").string()});
  CHECK(o.code == 0);
  const auto j = read_json(dir / "r.json");
  REQUIRE(j.is_array());
  CHECK(j.size() == 7);
  for (const auto& c : j) {
    for (const char* key : {"check", "n", "q", "samples", "mean", "stderr",
                            "bound_or_target", "pass"}) {
      CHECK(c.contains(key));
    }
  }
  CHECK(j[2]["q"] == "inf");
}

TEST_CASE("verify below n = 8 skips the moment bounds") {
  const Outcome o = invoke({"verify", "--n", "1", "--samples", "100"});
  CHECK(o.code == 0);
  CHECK(o.out.find("lemma1") == std::string::npos);
}

TEST_CASE("counterexample") {
  const Outcome o = invoke({"counterexample", "--samples", "20000", "--seed", "1"});
  CHECK(o.code == 0);
  CHECK(o.out.find("one_step_inequality_violated=true") != std::string::npos);
  CHECK(o.out.find("residual_negative=true") != std::string::npos);
}

TEST_CASE("invalid flags exit 2 with a JSON error line") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"run", "--n", "10", "--p", "3", "--iters", "1"},
           {"run", "--n", "10", "--bogus"},
           {"run", "--n", "10"},
           {"run", "--n", "ten", "--iters", "1"},
           {"verify", "--q", "1.5"},
           {"frobnicate"},
           {}}) {
    const Outcome o = invoke(args);
    CHECK(o.code == 2);
    const auto j = nlohmann::json::parse(o.err);
    CHECK(j["error"] == "invalid_arguments");
    CHECK(j.contains("message"));
  }
}

TEST_CASE("runtime errors exit 1") {
  const Outcome o = invoke({"sweep", "--iters", "1", "--num-seeds", "1", "--out",
                            "/proc/acds_cli_nowhere"});
  CHECK(o.code == 1);
  CHECK(nlohmann::json::parse(o.err)["error"] == "io");
}

TEST_CASE("config file fills unset flags; flags win") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  const fs::path cfg = dir / "c.json";
  std::ofstream(cfg) << R"({"n": 12, "p": 1.8, "iters": 40, "seed": 9, "stride": 5})";
  const Outcome o = invoke({"run", "--config", cfg.string(), "--n", "10", "--out",
                            (dir / "out").string()});
  REQUIRE(o.code == 0);
  const auto meta = read_json(dir / "out" / "run.json");
  CHECK(meta["config"]["n"] == 10);
  CHECK(meta["config"]["p"] == 1.8);
  CHECK(meta["config"]["max_iterations"] == 40);
  CHECK(meta["config"]["seed"] == 9);
  CHECK(meta["config"]["checkpoint_stride"] == 5);

  // The recorded effective flags replay the same run.
  const fs::path replay = dir / "replay.json";
  auto flags = meta["invocation"]["flags"];
  flags["out"] = (dir / "out2").string();
  std::ofstream(replay) << flags.dump();
  REQUIRE(invoke({"run", "--config", replay.string()}).code == 0);
  auto strip = [](const fs::path& p) {
    auto rows = acds::read_trace_csv(p);
    for (auto& r : rows) r.elapsed_ms = 0.0;
    std::ostringstream s;
    for (const auto& r : rows) s << r.k << ' ' << acds::format_real(r.f_y) << '\n';
    return s.str();
  };
  CHECK(strip(dir / "out" / "trace.csv") == strip(dir / "out2" / "trace.csv"));

  std::ofstream(dir / "bad.json") << R"({"samples": 5})";
  CHECK(invoke({"run", "--config", (dir / "bad.json").string(), "--iters", "1"}).code == 2);
  std::ofstream(dir / "broken.json") << "{";
  CHECK(invoke({"run", "--config", (dir / "broken.json").string(), "--iters", "1"}).code == 2);
}

TEST_CASE("same argv, same stdout") {
  const std::vector<std::string> args{"run", "--n", "10", "--p", "1", "--eps", "1e-3",
                                      "--seed", "4"};
  const Outcome a = invoke(args), b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("sweep with the default seed count") {
  const fs::path dir = scratch("sweep");
  const Outcome o = invoke({"sweep", "--n", "10", "--p", "1", "2", "--eps", "1e-3",
                            "--out", dir.string()});
  CHECK(o.code == 0);
  CHECK(fs::exists(dir / "trace_p1_seed19.csv"));
  CHECK(fs::exists(dir / "invocation.json"));
  const auto j = read_json(dir / "summary.json");
  CHECK(j["aggregates"][0]["median_iterations_to_eps"].is_number());
  CHECK(j["aggregates"][1]["median_iterations_to_eps"].is_number());
}

TEST_CASE("installed binary exit codes") {
  const std::string bin = ACDS_CLI_PATH;
  CHECK(std::system((bin + " bound --n 10 --p 1 > /dev/null").c_str()) == 0);
  const int bad = std::system((bin + " run --p 7 --iters 1 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == 2);
}
