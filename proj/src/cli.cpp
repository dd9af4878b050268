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

#include "partratio/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "partratio/analytics.hpp"
#include "partratio/error.hpp"
#include "partratio/estimators.hpp"
#include "partratio/io.hpp"
#include "partratio/parallel.hpp"
#include "partratio/random.hpp"
#include "partratio/schedules.hpp"
#include "partratio/verify.hpp"

namespace partratio::cli {
namespace {

using io::Json;

/// Configuration problems detected before any sampling.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model_path;
  std::string spec_path;
  std::string schedule_path;
  std::string beta_min;
  std::optional<double> beta_max;
  std::optional<double> q;
  std::optional<double> n;
  std::optional<double> theta;
  double epsilon = 0.2;
  std::optional<std::uint64_t> k;
  std::string kappa_cap;
  std::string pipeline = "nonadaptive";
  std::uint64_t trials = 1;
  bool trials_given = false;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string suite = "all";
  unsigned workers = default_workers();
  bool no_timestamp = false;
  double tv_delta = 0.0;
  std::optional<double> boost_delta;
  double max_samples = 1e10;
};

struct Problem {
  std::optional<GrossModel> model;
  ProblemSpec spec;
};

std::optional<GrossModel> load_model(const RunConfig& cfg) {
  if (cfg.model_path.empty()) return std::nullopt;
  return io::model_from_json(io::read_json_file(cfg.model_path));
}

Problem load_problem(const RunConfig& cfg) {
  std::optional<GrossModel> model = load_model(cfg);
  Json doc = Json::object();
  if (!cfg.spec_path.empty()) doc = io::read_json_file(cfg.spec_path);
  if (!doc.is_object()) throw UsageError("spec file must hold a JSON object");
  if (!cfg.beta_min.empty()) {
    if (cfg.beta_min == "-inf") {
      doc["beta_min"] = "-inf";
    } else {
      try {
        std::size_t used = 0;
        doc["beta_min"] = std::stod(cfg.beta_min, &used);
        if (used != cfg.beta_min.size()) throw std::invalid_argument("tail");
      } catch (const std::logic_error&) {
        throw UsageError("--beta-min must be a number or -inf");
      }
    }
  }
  if (cfg.beta_max) doc["beta_max"] = *cfg.beta_max;
  if (cfg.q) doc["q"] = *cfg.q;
  if (cfg.n) doc["n"] = *cfg.n;
  for (const char* field : {"beta_min", "beta_max", "q"}) {
    if (!doc.contains(field)) {
      throw UsageError(std::string("missing ") + field +
                       " (give --spec or --" +
                       (std::string(field) == "beta_min"   ? "beta-min"
                        : std::string(field) == "beta_max" ? "beta-max"
                                                           : "q") +
                       ")");
    }
  }
  std::optional<double> default_n;
  if (model) default_n = model->n();
  if (!doc.contains("n") && !default_n) {
    throw UsageError("missing n (give --model, --n or n in the spec file)");
  }
  ProblemSpec spec = io::spec_from_json(doc, default_n);
  if (model) check_compatible(*model, spec);
  return Problem{std::move(model), spec};
}

const GrossModel& require_model(const Problem& problem, const std::string& why) {
  if (!problem.model) throw UsageError(why + " needs --model");
  return *problem.model;
}

double theta_for(const RunConfig& cfg, const ProblemSpec& spec) {
  const double theta = cfg.theta.value_or(1.0 / (4.0 * std::log(spec.n())));
  if (!(theta > 0.0 && theta <= 1.0)) throw UsageError("--theta must be in (0, 1]");
  return theta;
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Writes to --out when given, else to `out`.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write " + cfg.out);
  file << text;
}

void stamp(const RunConfig& cfg, Json& doc) {
  if (!cfg.no_timestamp) doc["timestamp"] = timestamp_now();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

OraclePtr make_oracle(const RunConfig& cfg, const GrossModel& model) {
  OraclePtr oracle = exact_sampler(model);
  if (cfg.tv_delta > 0.0) oracle = tv_perturbed_sampler(oracle, cfg.tv_delta);
  return oracle;
}

// ---------------------------------------------------------------------------

int cmd_model(const RunConfig& cfg, std::ostream& out) {
  const GrossModel model = [&] {
    auto m = load_model(cfg);
    if (!m) throw UsageError("model needs --model");
    return *m;
  }();
  Json doc = {{"atoms", model.atoms().size()},
              {"n", model.n()},
              {"c0", model.zero_weight()}};
  bool consistent = true;
  const bool has_spec = !cfg.spec_path.empty() || !cfg.beta_min.empty() ||
                        cfg.beta_max || cfg.q;
  if (has_spec) {
    const Problem problem = load_problem(cfg);
    const ProblemSpec& spec = problem.spec;
    doc["spec"] = io::spec_to_json(spec);
    doc["z_beta_min"] = io::beta_to_json(log_partition(model, spec.beta_min()));
    doc["z_beta_max"] = log_partition(model, spec.beta_max());
    const double log_q = log_ratio(model, spec.beta_min(), spec.beta_max());
    doc["log_q"] = log_q;
    consistent = log_q <= spec.q();
    doc["log_q_within_q"] = consistent;
  }
  emit(cfg, out, doc.dump(2) + "\n");
  return consistent ? kExitOk : kExitFailure;
}

int cmd_schedule(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = load_problem(cfg);
  const ProblemSpec& spec = problem.spec;
  const double theta = theta_for(cfg, spec);
  Json doc = {{"pipeline", cfg.pipeline}, {"theta", theta}, {"seed", cfg.seed}};
  std::optional<Schedule> schedule;
  std::optional<OracleStats> oracle_stats;
  if (cfg.pipeline == "nonadaptive" || cfg.pipeline == "ppe-only") {
    schedule = static_schedule(spec, theta);
  } else {
    const GrossModel& model = require_model(problem, cfg.pipeline + " schedule");
    SamplingSession session(make_oracle(cfg, model), spec, 1);
    if (cfg.pipeline == "three-round") {
      const PseudoTpaResult r = pseudo_tpa_detailed(session, theta, cfg.seed);
      schedule = r.schedule;
      doc["subsampled"] = io::schedule_to_json(r.subsampled);
      doc["refine_draws"] = r.refine_draws;
    } else {
      const auto runs = cfg.k ? static_cast<unsigned>(*cfg.k)
                              : static_cast<unsigned>(std::ceil(2.0 / theta));
      doc["tpa_runs"] = runs;
      schedule = tpa_union(session, runs, cfg.seed);
    }
    oracle_stats = session.stats();
  }
  doc["schedule"] = io::schedule_to_json(*schedule);
  if (problem.model) {
    doc["stats"] = io::stats_to_json(schedule_stats(*problem.model, *schedule));
  }
  if (oracle_stats) doc["oracle_stats"] = io::stats_to_json(*oracle_stats);
  stamp(cfg, doc);
  emit(cfg, out, doc.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrialRow {
  std::optional<EstimateReport> report;
  std::string error;
  std::uint64_t seed = 0;
};

std::string csv_real(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Problem problem = load_problem(cfg);
  const ProblemSpec& spec = problem.spec;
  const GrossModel& model = require_model(problem, "estimate");
  const double exact = exact_log_q(model, spec);
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
    throw UsageError("--epsilon must be in (0, 1/2)");
  }
  if (cfg.format != "json" && cfg.format != "csv") {
    throw UsageError("--format must be json or csv");
  }
  const double theta = theta_for(cfg, spec);
  const OraclePtr oracle = make_oracle(cfg, model);

  PipelineOptions options;
  options.theta = theta;
  options.k = cfg.k;
  std::string cap_text = cfg.kappa_cap;
  if (cap_text.empty()) {
    cap_text = cfg.pipeline == "nonadaptive" ? "3"
               : cfg.pipeline == "ppe-only"  ? "exact"
                                             : "30";
  }
  double kappa_cap = 0.0;
  if (cap_text == "exact") {
    options.kappa_for_schedule = [&model](const Schedule& s) {
      return exact_schedule_curvature(model, s);
    };
    kappa_cap = 30.0;
  } else {
    try {
      kappa_cap = std::stod(cap_text);
    } catch (const std::logic_error&) {
      throw UsageError("--kappa-cap must be a number or \"exact\"");
    }
    if (!(kappa_cap > 0.0)) throw UsageError("--kappa-cap must be > 0");
  }

  // Budget check before any sampling.
  std::uint64_t planned_k = 0;
  if (options.k) {
    planned_k = *options.k;
  } else if (!options.kappa_for_schedule) {
    planned_k = ppe_sample_size(kappa_cap, cfg.epsilon);
  }
  double planned = 2.0 * static_cast<double>(planned_k);
  if (cfg.pipeline == "nonadaptive" || cfg.pipeline == "ppe-only") {
    const Schedule s = static_schedule(spec, theta);
    if (options.kappa_for_schedule && !options.k) {
      planned_k = ppe_sample_size(options.kappa_for_schedule(s), cfg.epsilon);
    }
    planned = 2.0 * static_cast<double>(planned_k) * static_cast<double>(s.pairs());
  } else if (cfg.pipeline != "three-round" && cfg.pipeline != "tpa-baseline") {
    throw UsageError("unknown --pipeline " + cfg.pipeline);
  }
  if (planned > cfg.max_samples) {
    std::ostringstream msg;
    msg << "planned PPE draws per trial (" << planned << ", k=" << planned_k
        << ") exceed --max-samples " << cfg.max_samples
        << "; lower --kappa-cap, use --kappa-cap exact or set --k";
    throw UsageError(msg.str());
  }
  if (cfg.boost_delta) median_boost_replicas(*cfg.boost_delta);

  const Pipeline pipeline = [&](std::uint64_t seed) {
    EstimateReport r;
    if (cfg.pipeline == "nonadaptive" || cfg.pipeline == "ppe-only") {
      r = estimate_nonadaptive(oracle, spec, cfg.epsilon, seed, options,
                               kappa_cap);
      r.params.pipeline = cfg.pipeline;
    } else if (cfg.pipeline == "three-round") {
      r = estimate_three_round(oracle, spec, cfg.epsilon, kappa_cap, seed,
                               options);
    } else {
      r = estimate_tpa_baseline(oracle, spec, cfg.epsilon, kappa_cap, seed,
                                options);
    }
    r.attach_exact(exact);
    return r;
  };

  std::vector<TrialRow> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    TrialRow& row = rows[t];
    row.seed = derive_seed(cfg.seed, t);
    try {
      row.report = cfg.boost_delta
                       ? median_boost(pipeline, *cfg.boost_delta, row.seed)
                       : pipeline(row.seed);
      if (row.report && !row.report->abs_error) row.report->attach_exact(exact);
    } catch (const Error& e) {
      row.error = e.what();
    }
  });

  std::uint64_t successes = 0;
  std::uint64_t failures = 0;
  for (const auto& row : rows) {
    if (!row.report) {
      ++failures;
    } else if (*row.report->abs_error <= cfg.epsilon) {
      ++successes;
    }
  }
  const double rate =
      static_cast<double>(successes) / static_cast<double>(cfg.trials);

  std::ostringstream text;
  if (cfg.format == "csv") {
    text << "trial,log_q_hat,exact_log_q,abs_err,samples,rounds,schedule_len,"
            "seed,error\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const TrialRow& row = rows[t];
      text << t << ",";
      if (row.report) {
        const EstimateReport& r = *row.report;
        text << csv_real(r.log_q_hat) << "," << csv_real(exact) << ","
             << csv_real(*r.abs_error) << "," << r.stats.total_samples << ","
             << r.stats.rounds << "," << r.schedule.len() << "," << row.seed
             << ",";
      } else {
        std::string message = row.error;
        std::replace(message.begin(), message.end(), '"', '\'');
        text << "," << csv_real(exact) << ",,,,," << row.seed << ",\""
             << message << "\"";
      }
      text << "\n";
    }
  } else {
    Json reports = Json::array();
    for (std::size_t t = 0; t < rows.size(); ++t) {
      Json entry = {{"trial", t}, {"seed", rows[t].seed}};
      if (rows[t].report) {
        entry["report"] = io::report_to_json(*rows[t].report);
      } else {
        entry["error"] = rows[t].error;
      }
      reports.push_back(entry);
    }
    Json doc = {{"reports", reports},
                {"summary",
                 {{"trials", cfg.trials},
                  {"successes", successes},
                  {"errors", failures},
                  {"success_rate", rate},
                  {"epsilon", cfg.epsilon},
                  {"exact_log_q", exact}}}};
    stamp(cfg, doc);
    text << doc.dump(2) << "\n";
  }
  emit(cfg, out, text.str());

  const double se = std::sqrt(0.7 * 0.3 / static_cast<double>(cfg.trials));
  err << "success_rate=" << rate << " (" << successes << "/" << cfg.trials
      << " within epsilon=" << cfg.epsilon << "); errors=" << failures
      << "; 0.7 - 3*SE=" << 0.7 - 3.0 * se << "\n";
  return failures > 0 ? kExitFailure : kExitOk;
}

// ---------------------------------------------------------------------------

void rename_all(std::vector<CheckResult>& checks, const std::string& suffix) {
  for (auto& c : checks) c.name += suffix;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Problem problem = load_problem(cfg);
  const ProblemSpec& spec = problem.spec;
  static const std::vector<std::string> kSuites{
      "analytics", "static", "tpa", "pseudo-tpa", "ppe", "end-to-end", "all"};
  if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) == kSuites.end()) {
    throw UsageError("unknown --suite " + cfg.suite);
  }
  const GrossModel& model = require_model(problem, "verify");
  std::vector<CheckResult> checks;
  const auto wants = [&](const std::string& suite) {
    return cfg.schedule_path.empty() && (cfg.suite == suite || cfg.suite == "all");
  };
  const auto suite_seed = [&](const std::string& suite) {
    return derive_seed(cfg.seed, fnv1a(suite));
  };
  const auto append = [&](std::vector<CheckResult> more) {
    checks.insert(checks.end(), more.begin(), more.end());
  };

  if (!cfg.schedule_path.empty()) {
    const Schedule schedule =
        io::schedule_from_json(io::read_json_file(cfg.schedule_path));
    if (schedule.front() != spec.beta_min().value() ||
        schedule.back() != spec.beta_max()) {
      throw UsageError("schedule endpoints must match beta_min and beta_max");
    }
    const double theta = cfg.theta.value_or(1.0);
    checks.push_back(check_max_width(model, schedule, theta));
    checks.push_back(check_curvature_bound(model, schedule, spec.n()));
    rename_all(checks, "[schedule]");
  }
  if (wants("analytics")) append(check_analytics_suite(model, spec));
  if (wants("static")) {
    const std::vector<double> thetas =
        cfg.theta ? std::vector<double>{*cfg.theta}
                  : std::vector<double>{1.0, 0.5, 0.1};
    for (double theta : thetas) {
      auto part = check_static_suite(model, spec, theta);
      std::ostringstream suffix;
      suffix << "[theta=" << theta << "]";
      rename_all(part, suffix.str());
      append(std::move(part));
    }
  }
  if (wants("tpa")) {
    TpaSuiteOptions options;
    options.workers = cfg.workers;
    if (cfg.trials_given) options.union_trials = cfg.trials;
    append(mc_tpa_suite(model, spec, suite_seed("tpa"), options));
  }
  if (wants("pseudo-tpa")) {
    PseudoTpaSuiteOptions options;
    options.workers = cfg.workers;
    if (cfg.trials_given) options.trials = cfg.trials;
    append(mc_pseudo_tpa_suite(model, spec, cfg.theta.value_or(0.25),
                               suite_seed("pseudo-tpa"), options));
  }
  if (wants("ppe")) {
    PpeSuiteOptions options;
    options.workers = cfg.workers;
    options.epsilon = cfg.epsilon;
    if (cfg.theta) options.theta = *cfg.theta;
    if (cfg.trials_given) {
      options.success_trials = cfg.trials;
      options.variance_trials = cfg.trials;
    }
    append(mc_ppe_suite(model, spec, suite_seed("ppe"), options));
  }
  if (wants("end-to-end")) {
    EndToEndOptions options;
    options.workers = cfg.workers;
    if (cfg.trials_given) {
      options.nonadaptive_trials = cfg.trials;
      options.three_round_trials = cfg.trials;
      options.markov_trials = cfg.trials;
    }
    append(end_to_end_suite(model, spec, suite_seed("end-to-end"), options));
  }

  emit(cfg, out, io::checks_to_json(checks).dump(2) + "\n");
  bool ok = true;
  for (const auto& c : checks) {
    if (!c.passed) {
      ok = false;
      err << "FAILED " << c.name << ": observed " << c.observed << ", bound "
          << c.bound << "\n";
    }
  }
  return ok ? kExitOk : kExitFailure;
}

void add_problem_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--model", cfg.model_path, "Model JSON file");
  cmd->add_option("--spec", cfg.spec_path,
                  "Spec JSON file {beta_min, beta_max, q[, n]}");
  cmd->add_option("--beta-min", cfg.beta_min, "beta_min (number or -inf)");
  cmd->add_option("--beta-max", cfg.beta_max, "beta_max");
  cmd->add_option("--q", cfg.q, "Promised bound on log Q");
  cmd->add_option("--n", cfg.n, "Energy bound n (defaults to the model's n)");
  cmd->add_option("--out", cfg.out, "Output file (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Partition ratio estimation for Gibbs distributions",
               "partratio"};
  app.require_subcommand(1);

  auto* model_cmd = app.add_subcommand("model", "Summarize a model file");
  add_problem_flags(model_cmd, cfg);

  const std::vector<std::string> pipelines{"nonadaptive", "three-round",
                                           "tpa-baseline", "ppe-only"};
  auto* schedule_cmd = app.add_subcommand("schedule", "Generate a schedule");
  add_problem_flags(schedule_cmd, cfg);
  schedule_cmd->add_option("--pipeline", cfg.pipeline)
      ->check(CLI::IsMember(pipelines));
  schedule_cmd->add_option("--theta", cfg.theta);
  schedule_cmd->add_option("--k", cfg.k, "TPA runs for tpa-baseline");
  schedule_cmd->add_option("--seed", cfg.seed);
  schedule_cmd->add_option("--tv-delta", cfg.tv_delta);
  schedule_cmd->add_flag("--no-timestamp", cfg.no_timestamp);

  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate log Q");
  add_problem_flags(estimate_cmd, cfg);
  estimate_cmd->add_option("--pipeline", cfg.pipeline)
      ->check(CLI::IsMember(pipelines));
  estimate_cmd->add_option("--theta", cfg.theta);
  estimate_cmd->add_option("--epsilon", cfg.epsilon);
  estimate_cmd->add_option("--k", cfg.k, "Fixed PPE samples per side per pair");
  estimate_cmd->add_option("--kappa-cap", cfg.kappa_cap,
                           "Curvature cap for k (number or \"exact\")");
  estimate_cmd->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--seed", cfg.seed);
  estimate_cmd->add_option("--format", cfg.format)
      ->check(CLI::IsMember({"json", "csv"}));
  estimate_cmd->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--tv-delta", cfg.tv_delta,
                           "Total-variation perturbation of the oracle");
  estimate_cmd->add_option("--boost-delta", cfg.boost_delta,
                           "Median-boost each trial to failure probability delta");
  estimate_cmd->add_option("--max-samples", cfg.max_samples,
                           "Refuse runs planning more PPE draws per trial");
  estimate_cmd->add_flag("--no-timestamp", cfg.no_timestamp);

  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites");
  add_problem_flags(verify_cmd, cfg);
  verify_cmd->add_option("--suite", cfg.suite);
  verify_cmd->add_option("--schedule", cfg.schedule_path,
                         "Check a given schedule instead of running suites");
  verify_cmd->add_option("--theta", cfg.theta);
  verify_cmd->add_option("--epsilon", cfg.epsilon);
  auto* trials_opt = verify_cmd->add_option("--trials", cfg.trials)
                         ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", cfg.seed);
  verify_cmd->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.trials_given = trials_opt->count() > 0;

  try {
    if (model_cmd->parsed()) return cmd_model(cfg, out);
    if (schedule_cmd->parsed()) return cmd_schedule(cfg, out);
    if (estimate_cmd->parsed()) return cmd_estimate(cfg, out, err);
    return cmd_verify(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    // Library errors raised while loading or validating inputs.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace partratio::cli
