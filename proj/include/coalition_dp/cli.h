//
// Copyright 2026 The coalition-dp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end: instance documents, subcommand dispatch and
// table/CSV output. Players are reported by their 1-based position in the
// instance document's cost list.

#ifndef COALITION_DP_CLI_H_
#define COALITION_DP_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "coalition_dp/core_model.h"

namespace coalition_dp {

// Payload key carrying one of: malformed, missing_key, non_positive_cost,
// alpha_out_of_range, sigma_sq_non_positive.
inline constexpr char kErrorCodeUrl[] = "coalition_dp/error_code";

// Error code attached by ParseInstance, or "" if there is none.
std::string InstanceErrorCode(const absl::Status& status);

// Accepts either a path or the document itself (text starting with '{'):
//   {"alpha": 1, "sigma_sq": 0.25, "costs": [0.0018, 0.00215, ...]}
absl::StatusOr<ProblemInstance> ParseInstance(absl::string_view path_or_text);

// Writes costs in their original order so that ParseInstance restores an
// identical instance.
std::string EmitInstance(const ProblemInstance& instance);

// Runs one subcommand. Returns 0 on success, 1 on a domain error and 2 on a
// usage error.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace coalition_dp

#endif  // COALITION_DP_CLI_H_
