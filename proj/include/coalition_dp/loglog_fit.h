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

// Ordinary least squares on (log x, log y), used to read off power-law
// exponents.

#ifndef COALITION_DP_LOGLOG_FIT_H_
#define COALITION_DP_LOGLOG_FIT_H_

#include <span>

#include "absl/status/statusor.h"

namespace coalition_dp {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  // 1 when the values are constant up to rounding, since a flat series is
  // fitted perfectly by slope 0.
  double r_squared = 0.0;
};

// Needs at least two distinct positive x values and positive y values.
absl::StatusOr<LogLogFit> FitLogLog(std::span<const double> x,
                                    std::span<const double> y);

}  // namespace coalition_dp

#endif  // COALITION_DP_LOGLOG_FIT_H_
