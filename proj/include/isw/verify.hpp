/* Copyright 2026 The ISW Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Self-check families run by `isw verify`. Each family returns one result; a
// family that throws is reported as failed with the exception text.

#include <optional>
#include <string>
#include <vector>

#include "isw/core.hpp"

namespace isw {

struct CheckResult {
  std::string family;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  /// Run a single family.
  std::optional<std::string> only;
  /// Eviction rule under test; select_naive unless a test injects a mutant.
  Selector selector = select_naive;
  /// Monte Carlo trials for the bias family.
  std::uint64_t trials = 100'000;
};

const std::vector<std::string>& verify_families();

/// Throws std::invalid_argument for an unknown family name.
std::vector<CheckResult> run_checks(const VerifyOptions& options);

}  // namespace isw
