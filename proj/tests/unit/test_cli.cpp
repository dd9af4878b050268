/* Copyright 2026 The partratio Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "partratio/cli.hpp"
#include "partratio/io.hpp"
#include "support/fixtures.hpp"

using namespace partratio;
using partratio::testing::fixture_path;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with_fixture(std::vector<std::string> args,
                                      const std::string& name) {
  args.push_back("--model");
  args.push_back(fixture_path(name + ".model.json"));
  args.push_back("--spec");
  args.push_back(fixture_path(name + ".spec.json"));
  return args;
}

std::string temp_file(const std::string& name, const std::string& content = "") {
  const auto dir = std::filesystem::temp_directory_path() / "partratio_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / name).string();
  if (!content.empty()) std::ofstream(path) << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"estimate", "--bogus"}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
}

TEST_CASE("model summary") {
  const auto path = temp_file("zero.json", R"({"atoms":[{"x":0,"c":1}],"n":2})");
  const Outcome o = run_cli({"model", "--model", path, "--beta-min", "0",
                             "--beta-max", "1", "--q", "2"});
  CHECK(o.code == cli::kExitOk);
  const auto doc = io::Json::parse(o.out);
  CHECK(doc["log_q"].get<double>() == 0.0);
  CHECK(doc["atoms"].get<int>() == 1);
  CHECK(doc["log_q_within_q"].get<bool>());

  const Outcome bin = run_cli(with_fixture({"model"}, "binomial"));
  CHECK(bin.code == cli::kExitOk);
  CHECK(io::Json::parse(bin.out)["log_q"].get<double>() ==
        doctest::Approx(8 * std::log((1 + std::exp(1.0)) / 2)));

  const Outcome over = run_cli({"model", "--model", fixture_path("binomial.model.json"),
                                "--beta-min", "0", "--beta-max", "1", "--q", "2"});
  CHECK(over.code == cli::kExitFailure);
}

TEST_CASE("model rejections") {
  const auto gap = temp_file("gap.json", R"({"atoms":[{"x":0.5,"c":1}],"n":2})");
  const Outcome o = run_cli({"model", "--model", gap});
  CHECK(o.code == cli::kExitUsage);
  CHECK(o.err.find("x=0.5") != std::string::npos);
  CHECK(o.err.find("forbidden gap (0,1)") != std::string::npos);

  const auto broken = temp_file("broken.json", "{\n  \"atoms\": [\n    {\"x\": 1,, }\n");
  const Outcome p = run_cli({"model", "--model", broken});
  CHECK(p.code == cli::kExitUsage);
  CHECK(p.err.find(":3:") != std::string::npos);
}

TEST_CASE("missing spec fields are config errors") {
  const Outcome o = run_cli({"estimate", "--model", fixture_path("binomial.model.json"),
                             "--beta-min", "0", "--q", "6"});
  CHECK(o.code == cli::kExitUsage);
  CHECK(o.err.find("beta_max") != std::string::npos);
  CHECK(run_cli(with_fixture({"estimate", "--epsilon", "0.6"}, "binomial")).code ==
        cli::kExitUsage);
  CHECK(run_cli(with_fixture({"estimate", "--beta-min", "x"}, "binomial")).code ==
        cli::kExitUsage);
  const Outcome budget =
      run_cli(with_fixture({"estimate", "--kappa-cap", "30"}, "binomial"));
  CHECK(budget.code == cli::kExitUsage);
  CHECK(budget.err.find("max-samples") != std::string::npos);
}

TEST_CASE("schedule hand trace") {
  const Outcome o = run_cli({"schedule", "--spec", fixture_path("hand_trace.spec.json"),
                             "--theta", "1", "--no-timestamp"});
  CHECK(o.code == cli::kExitOk);
  const auto expected =
      io::schedule_from_json(io::read_json_file(fixture_path("hand_trace.schedule.json")));
  CHECK(io::schedule_from_json(io::Json::parse(o.out)["schedule"]) == expected);
}

TEST_CASE("schedule attaches stats") {
  const Outcome o = run_cli(with_fixture(
      {"schedule", "--pipeline", "three-round", "--seed", "4", "--no-timestamp"},
      "three_atom"));
  CHECK(o.code == cli::kExitOk);
  const auto doc = io::Json::parse(o.out);
  CHECK(doc.contains("stats"));
  CHECK(doc["oracle_stats"]["rounds"].get<int>() == 2);
}

TEST_CASE("pseudo tpa schedule output is reproducible") {
  const auto a = temp_file("pseudo_a.json");
  const auto b = temp_file("pseudo_b.json");
  for (const auto& path : {a, b}) {
    CHECK(run_cli(with_fixture({"schedule", "--pipeline", "three-round", "--seed", "9",
                                "--no-timestamp", "--out", path},
                               "binomial"))
              .code == cli::kExitOk);
  }
  CHECK(!slurp(a).empty());
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("tpa baseline schedule on the zero model") {
  const auto path = temp_file("zero4.json", R"({"atoms":[{"x":0,"c":1}],"n":4})");
  const Outcome o = run_cli({"schedule", "--model", path, "--beta-min", "0", "--beta-max",
                             "1", "--q", "2", "--pipeline", "tpa-baseline"});
  CHECK(o.code == cli::kExitOk);
  CHECK(io::Json::parse(o.out)["schedule"] == io::Json::parse("[0.0, 1.0]"));
}

TEST_CASE("estimate csv on a zero-variance model") {
  for (const auto& [pipeline, rounds] :
       std::vector<std::pair<std::string, std::string>>{{"nonadaptive", "1"},
                                                        {"three-round", "3"}}) {
    const Outcome o = run_cli(with_fixture({"estimate", "--pipeline", pipeline, "--trials",
                                            "4", "--format", "csv", "--k", "50"},
                                           "single_atom"));
    CHECK(o.code == cli::kExitOk);
    const auto rows = csv_rows(o.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"trial", "log_q_hat", "exact_log_q",
                                              "abs_err", "samples", "rounds",
                                              "schedule_len", "seed", "error"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].size() == 9);
      CHECK(std::stod(rows[i][3]) <= 1e-9);
      CHECK(rows[i][5] == rounds);
    }
    CHECK(o.err.find("success_rate=1") != std::string::npos);
  }
}

TEST_CASE("estimate rounds column for three-round on a real model") {
  const Outcome o = run_cli(with_fixture({"estimate", "--pipeline", "three-round",
                                          "--trials", "3", "--format", "csv",
                                          "--kappa-cap", "exact"},
                                         "three_atom"));
  CHECK(o.code == cli::kExitOk);
  const auto rows = csv_rows(o.out);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][5] == "3");
}

TEST_CASE("estimate json is identical across worker counts") {
  const auto base = std::vector<std::string>{"estimate", "--trials", "6", "--seed", "5",
                                             "--kappa-cap", "exact", "--no-timestamp"};
  auto one = with_fixture(base, "binomial");
  one.insert(one.end(), {"--workers", "1"});
  auto many = with_fixture(base, "binomial");
  many.insert(many.end(), {"--workers", "4"});
  const Outcome a = run_cli(one);
  const Outcome b = run_cli(many);
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("timestamp") == std::string::npos);
  const Outcome stamped = run_cli(with_fixture({"estimate", "--k", "5"}, "single_atom"));
  CHECK(stamped.out.find("timestamp") != std::string::npos);
}

TEST_CASE("estimate records per-trial errors") {
  // A tiny c_0 and k = 1 make the infinite-gap pair degenerate in some trials.
  const auto path =
      temp_file("tiny.json", R"({"atoms":[{"x":0,"c":1e-6},{"x":4,"c":1}],"n":4})");
  const Outcome o = run_cli({"estimate", "--model", path, "--beta-min", "-inf",
                             "--beta-max", "1", "--q", "20", "--pipeline", "tpa-baseline",
                             "--theta", "1", "--k", "1", "--trials", "20", "--format",
                             "csv"});
  CHECK(o.code == cli::kExitFailure);
  const auto rows = csv_rows(o.out);
  REQUIRE(rows.size() == 21);
  bool saw_error = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].back().empty()) continue;
    saw_error = true;
    CHECK(rows[i][1].empty());
    CHECK(std::stod(rows[i][2]) == doctest::Approx(std::log1p(std::exp(4.0) / 1e-6)));
    CHECK(rows[i].back().find("V_0 = 0") != std::string::npos);
  }
  CHECK(saw_error);
}

TEST_CASE("estimate with median boost") {
  const Outcome o = run_cli(with_fixture(
      {"estimate", "--boost-delta", "0.5", "--kappa-cap", "exact", "--no-timestamp"},
      "binomial"));
  CHECK(o.code == cli::kExitOk);
  const auto doc = io::Json::parse(o.out);
  CHECK(doc["reports"][0]["report"]["boost"]["replicas"].get<int>() == 13);
}

TEST_CASE("verify negative control") {
  const Outcome o = run_cli(with_fixture(
      {"verify", "--schedule", fixture_path("bad_schedule.json")}, "three_atom"));
  CHECK(o.code == cli::kExitFailure);
  CHECK(o.err.find("static.max_width") != std::string::npos);
  const Outcome good = run_cli(with_fixture(
      {"verify", "--schedule", fixture_path("hand_trace.schedule.json")}, "single_atom"));
  CHECK(good.code == cli::kExitOk);
}

TEST_CASE("verify suites") {
  const Outcome s = run_cli(with_fixture({"verify", "--suite", "static"}, "three_atom"));
  CHECK(s.code == cli::kExitOk);
  CHECK(io::Json::parse(s.out).size() == 12);

  const Outcome t = run_cli(with_fixture({"verify", "--suite", "tpa", "--trials", "200"},
                                         "binomial"));
  CHECK(t.code == cli::kExitOk);
  bool found = false;
  for (const auto& c : io::Json::parse(t.out)) {
    if (c["name"] == "tpa.gap_exponential_ks") {
      found = true;
      CHECK(c["bound"].get<double>() ==
            doctest::Approx(1.628 / std::sqrt(c["trials"].get<double>())));
      CHECK(c["observed"].get<double>() < c["bound"].get<double>());
    }
  }
  CHECK(found);
  CHECK(run_cli(with_fixture({"verify", "--suite", "nope"}, "binomial")).code ==
        cli::kExitUsage);
}
