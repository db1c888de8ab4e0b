// Copyright 2026 The roomrelight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "roomrelight/analysis/drr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace roomrelight::analysis {

std::size_t direct_half_window(int sample_rate) {
  return static_cast<std::size_t>(std::lround(kDirectHalfWindowSeconds * sample_rate));
}

DrrResult compute_drr(const ImpulseResponse& ir) {
  const auto x = ir.samples();
  const std::size_t half = direct_half_window(ir.sample_rate());
  const std::size_t d = ir.direct_index();
  const std::size_t lo = d > half ? d - half : 0;
  const std::size_t hi = std::min(x.size(), d + half + 1);
  double direct = 0.0, reverb = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = x[i] * x[i];
    (i >= lo && i < hi ? direct : reverb) += e;
  }
  if (reverb == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {10.0 * std::log10(direct / reverb), false};
}

}  // namespace roomrelight::analysis
