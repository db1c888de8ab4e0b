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


#include <cstdio>
#include <cstdlib>
#include <string>

#include <fmt/core.h>

#include "roomrelight/bench/acceptance.hpp"

// Optional first argument restricts the run, same syntax as `roomrelight bench --filter`.
int main(int argc, char** argv) {
  roomrelight::bench::AcceptanceOptions options;
  if (argc > 1) options.filter = argv[1];
  options.extended_sweep = false;

  const auto results = roomrelight::bench::run_acceptance(options, [](const auto& r) {
    fmt::print("{} criterion {} ({}): {} [{:.1f} s]\n", r.passed ? "PASS" : "FAIL", r.id, r.key, r.summary,
               r.seconds);
    std::fflush(stdout);
  });

  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  fmt::print("{} of {} criteria passed\n", results.size() - failed, results.size());
  return failed == 0 && !results.empty() ? EXIT_SUCCESS : EXIT_FAILURE;
}
