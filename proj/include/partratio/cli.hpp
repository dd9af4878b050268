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

#ifndef PARTRATIO_CLI_HPP_
#define PARTRATIO_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace partratio::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // failed check or estimate
inline constexpr int kExitUsage = 2;    // usage or configuration error

/// Entry point of the `partratio` tool. `args` excludes the program name.
/// Structured output goes to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace partratio::cli

#endif  // PARTRATIO_CLI_HPP_
