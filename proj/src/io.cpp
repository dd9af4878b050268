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

#include "partratio/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "partratio/error.hpp"

namespace partratio::io {
namespace {

double number_field(const Json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ParseError("missing field \"" + field + "\"");
  const Json& v = doc.at(field);
  if (!v.is_number()) throw ParseError("field \"" + field + "\" must be a number");
  return v.get<double>();
}

// JSON has no infinities; non-finite numbers are written as strings.
Json real_to_json(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

}  // namespace

Json beta_to_json(double beta) { return real_to_json(beta); }

BetaValue beta_from_json(const Json& value, const std::string& field) {
  if (value.is_string()) {
    if (value.get<std::string>() == "-inf") return BetaValue::neg_inf();
    throw ParseError("field \"" + field +
                     "\" must be a number or the string \"-inf\"");
  }
  if (!value.is_number()) {
    throw ParseError("field \"" + field + "\" must be a number or \"-inf\"");
  }
  return BetaValue(value.get<double>());
}

GrossModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("model must be a JSON object");
  if (!doc.contains("atoms") || !doc.at("atoms").is_array()) {
    throw ParseError("model needs an \"atoms\" array");
  }
  std::vector<Atom> atoms;
  for (const Json& a : doc.at("atoms")) {
    if (!a.is_object()) throw ParseError("each atom must be {\"x\": .., \"c\": ..}");
    atoms.push_back({number_field(a, "x"), number_field(a, "c")});
  }
  return GrossModel(std::move(atoms), number_field(doc, "n"));
}

Json model_to_json(const GrossModel& model) {
  Json atoms = Json::array();
  for (const Atom& a : model.atoms()) atoms.push_back({{"x", a.x}, {"c", a.c}});
  return {{"atoms", atoms}, {"n", model.n()}};
}

ProblemSpec spec_from_json(const Json& doc, std::optional<double> default_n) {
  if (!doc.is_object()) throw ParseError("spec must be a JSON object");
  if (!doc.contains("beta_min")) throw ParseError("missing field \"beta_min\"");
  const BetaValue beta_min = beta_from_json(doc.at("beta_min"), "beta_min");
  double n = 0.0;
  if (doc.contains("n")) {
    n = number_field(doc, "n");
  } else if (default_n) {
    n = *default_n;
  } else {
    throw ParseError("missing field \"n\"");
  }
  return ProblemSpec(beta_min, number_field(doc, "beta_max"), n,
                     number_field(doc, "q"));
}

Json spec_to_json(const ProblemSpec& spec) {
  return {{"beta_min", beta_to_json(spec.beta_min().value())},
          {"beta_max", spec.beta_max()},
          {"n", spec.n()},
          {"q", spec.q()}};
}

Json schedule_to_json(const Schedule& schedule) {
  Json out = Json::array();
  for (double b : schedule) out.push_back(beta_to_json(b));
  return out;
}

Schedule schedule_from_json(const Json& doc) {
  const Json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("schedule")) throw ParseError("missing field \"schedule\"");
    arr = &doc.at("schedule");
  }
  if (!arr->is_array()) throw ParseError("schedule must be an array of betas");
  std::vector<double> betas;
  for (const Json& b : *arr) betas.push_back(beta_from_json(b, "schedule").value());
  return Schedule(std::move(betas));
}

Json stats_to_json(const ScheduleStats& stats) {
  Json pairs = Json::array();
  for (const auto& p : stats.per_pair) {
    pairs.push_back({{"gap", real_to_json(p.gap)},
                     {"curvature", real_to_json(p.curvature)}});
  }
  return {{"len", stats.len},
          {"max_width", real_to_json(stats.max_width)},
          {"curvature", real_to_json(stats.curvature)},
          {"per_pair", pairs}};
}

Json stats_to_json(const OracleStats& stats) {
  Json per_beta = Json::array();
  for (const auto& [beta, count] : stats.per_beta) {
    per_beta.push_back({beta_to_json(beta), count});
  }
  return {{"total_samples", stats.total_samples},
          {"rounds", stats.rounds},
          {"per_beta", per_beta}};
}

Json report_to_json(const EstimateReport& report) {
  Json params = {{"pipeline", report.params.pipeline},
                 {"theta", report.params.theta},
                 {"epsilon", report.params.epsilon},
                 {"k", report.params.k},
                 {"kappa_cap", report.params.kappa_cap
                                   ? real_to_json(*report.params.kappa_cap)
                                   : Json(nullptr)},
                 {"seed", report.params.seed}};
  Json out = {{"log_q_hat", real_to_json(report.log_q_hat)},
              {"schedule", schedule_to_json(report.schedule)},
              {"stats", stats_to_json(report.stats)},
              {"params", params}};
  if (report.exact_log_q) out["exact_log_q"] = *report.exact_log_q;
  if (report.abs_error) out["abs_error"] = *report.abs_error;
  if (report.boost) {
    out["boost"] = {{"replicas", report.boost->replicas},
                    {"failed", report.boost->failed},
                    {"errors", report.boost->errors}};
  }
  return out;
}

Json check_to_json(const CheckResult& check) {
  Json out = {{"name", check.name},
              {"kind", check.kind == CheckKind::kExact ? "exact" : "statistical"},
              {"passed", check.passed},
              {"observed", real_to_json(check.observed)},
              {"bound", real_to_json(check.bound)}};
  out["std_err"] = check.std_err ? real_to_json(*check.std_err) : Json(nullptr);
  out["trials"] = check.trials ? Json(*check.trials) : Json(nullptr);
  return out;
}

Json checks_to_json(const std::vector<CheckResult>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(check_to_json(c));
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is an offset into the file; translate it into line/column.
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)),
                     std::istreambuf_iterator<char>());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << path.string() << ":" << line << ":" << column << ": " << e.what();
    throw ParseError(msg.str());
  }
}

}  // namespace partratio::io
