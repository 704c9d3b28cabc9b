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

#include "coalition_dp/loglog_fit.h"

#include <cmath>
#include <vector>

namespace coalition_dp {

absl::StatusOr<LogLogFit> FitLogLog(std::span<const double> x,
                                    std::span<const double> y) {
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError("x and y must have the same length");
  }
  if (x.size() < 2) {
    return absl::InvalidArgumentError("A fit needs at least two points");
  }
  const size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) {
      return absl::InvalidArgumentError("Log-log fit needs positive values");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) {
    return absl::InvalidArgumentError("Degenerate grid: all x are equal");
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy < 1e-20) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0;
    for (size_t i = 0; i < m; ++i) {
      const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

}  // namespace coalition_dp
