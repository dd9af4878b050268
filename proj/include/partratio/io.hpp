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

#ifndef PARTRATIO_IO_HPP_
#define PARTRATIO_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "partratio/analytics.hpp"
#include "partratio/estimators.hpp"
#include "partratio/model.hpp"
#include "partratio/verify.hpp"

// JSON documents exchanged with the CLI and external tooling. Betas are
// numbers, except -inf which is written as the string "-inf".

namespace partratio::io {

using Json = nlohmann::ordered_json;

Json beta_to_json(double beta);
/// Accepts a number or the string "-inf". Throws ParseError otherwise.
BetaValue beta_from_json(const Json& value, const std::string& field);

/// {"atoms": [{"x": ..., "c": ...}, ...], "n": ...}
GrossModel model_from_json(const Json& doc);
Json model_to_json(const GrossModel& model);

/// {"beta_min": number | "-inf", "beta_max": ..., "n": ..., "q": ...}.
/// n may be omitted when `default_n` is given (normally the model's n).
ProblemSpec spec_from_json(const Json& doc,
                           std::optional<double> default_n = std::nullopt);
Json spec_to_json(const ProblemSpec& spec);

Json schedule_to_json(const Schedule& schedule);
/// A bare array of betas, or an object with a "schedule" array.
Schedule schedule_from_json(const Json& doc);

Json stats_to_json(const ScheduleStats& stats);
Json stats_to_json(const OracleStats& stats);
Json report_to_json(const EstimateReport& report);
Json check_to_json(const CheckResult& check);
Json checks_to_json(const std::vector<CheckResult>& checks);

/// Reads and parses a JSON file; parse failures name the file, line and
/// column.
Json read_json_file(const std::filesystem::path& path);

}  // namespace partratio::io

#endif  // PARTRATIO_IO_HPP_
