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

// Batch front end: simulation tables, self-checks and file compression. The
// run_* functions return a process exit status and never call exit().

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isw/coder.hpp"
#include "isw/core.hpp"

namespace isw {

struct RunSpec {
  enum class Command { simulate, verify, compress, decompress };
  Command command = Command::simulate;

  std::optional<std::size_t> m;
  std::uint32_t w = 8;
  std::size_t mu = 0;
  std::optional<std::uint64_t> t_max;  // default 20 w
  std::uint64_t trials = 0;
  std::vector<double> p;                  // empty: uniform
  std::vector<double> regime_change;      // burn-in law, empty: none
  std::vector<std::uint64_t> checkpoints;  // empty: geometric up to t_max
  std::uint64_t seed = 1;
  std::string in;
  std::string out;  // empty: stdout for simulate
  RngMode rng_mode = RngMode::seeded_prng;
  std::optional<std::string> only;
};

inline constexpr std::uint64_t kMaxSimulationSteps = 10'000'000;

/// One checkpoint of the law of the counts.
struct SimulationRow {
  std::uint64_t t = 0;
  bool exact = true;
  double tv_to_limit = 0;    // total variation to the multinomial limit
  double r_bits = 0;         // divergence of the limit from the law at t; NaN in Monte Carlo mode
  double kl_bound_bits = 0;  // NaN where undefined
  double lambda_nats = 0;
  std::vector<double> mean_counts;
  std::vector<double> mean_stderr;
};

/// Columns of the simulate CSV, in order.
inline constexpr const char* kSimulationCsvHeader =
    "t,mode,tv_to_limit,r_bits,kl_bound_bits,lambda_nats,mean_counts,mean_stderr";

/// Throws std::invalid_argument on a bad parameter combination.
std::vector<SimulationRow> simulate(const RunSpec& spec);
void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows);
/// Geometric schedule: 0, then ceil(1.25^k) deduplicated, then t_max.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t t_max);

int run_simulate(const RunSpec& spec, std::ostream& out, std::ostream& err);
int run_verify(const RunSpec& spec, std::ostream& out, const Selector& selector = select_naive);
int run_compress(const RunSpec& spec, std::ostream& out, std::ostream& err);
int run_decompress(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// "0.3,0.7" -> {0.3, 0.7}.
std::vector<double> parse_probabilities(const std::string& text);

}  // namespace isw
