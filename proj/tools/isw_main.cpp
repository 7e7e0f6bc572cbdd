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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "isw/cli.hpp"

namespace {

std::vector<double> parse_list(const std::string& text, const char* flag) {
  try {
    return isw::parse_probabilities(text);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError(flag, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imaginary sliding window: simulation, self-checks and compression"};
  app.require_subcommand(1);

  isw::RunSpec spec;
  std::string p_text, regime_text;
  std::vector<std::uint64_t> checkpoints;
  std::size_t m = 0;
  std::uint64_t t_max = 0;
  std::string only;
  std::string rng_mode = "seeded";
  const std::map<std::string, isw::RngMode> rng_modes{{"seeded", isw::RngMode::seeded_prng},
                                                     {"self-feed", isw::RngMode::self_feed}};

  auto* sim = app.add_subcommand("simulate", "law of the counts over time, as CSV");
  sim->add_option("--m", m, "alphabet size (default: length of --p, else 2)")->check(CLI::Range(2, 65535));
  sim->add_option("--w", spec.w, "window length")->check(CLI::PositiveNumber);
  sim->add_option("--mu", spec.mu, "context order, must be 0");
  sim->add_option("--p", p_text, "source probabilities, comma separated");
  sim->add_option("--t-max", t_max, "last step (default 20 w)");
  sim->add_option("--trials", spec.trials, "Monte Carlo trials when the chain is too large");
  sim->add_option("--seed", spec.seed, "Monte Carlo seed");
  sim->add_option("--regime-change", regime_text, "law the window was filled from before t = 0");
  sim->add_option("--checkpoints", checkpoints, "explicit steps to report")->delimiter(',');
  sim->add_option("--out", spec.out, "CSV path (default stdout)");

  auto* ver = app.add_subcommand("verify", "run the self-check suite");
  ver->add_option("--only", only, "run one family");

  auto* comp = app.add_subcommand("compress", "encode a file");
  auto* decomp = app.add_subcommand("decompress", "decode a file");
  for (auto* sub : {comp, decomp}) {
    sub->add_option("--in", spec.in, "input file")->required();
    sub->add_option("--out", spec.out, "output file")->required();
  }
  comp->add_option("--m", m, "256 for bytes, 2 for bits");
  comp->add_option("--mu", spec.mu, "context order");
  comp->add_option("--w", spec.w, "window length");
  comp->add_option("--rng-mode", rng_mode, "seeded or self-feed")->check(CLI::IsMember({"seeded", "self-feed"}));
  comp->add_option("--seed", spec.seed, "seed for eviction bits");
  // Parameters travel in the stream header.
  decomp->add_option("--m", m, "ignored, read from the stream");
  decomp->add_option("--mu", spec.mu, "ignored, read from the stream");
  decomp->add_option("--w", spec.w, "ignored, read from the stream");
  decomp->add_option("--rng-mode", rng_mode, "ignored, read from the stream");
  decomp->add_option("--seed", spec.seed, "ignored, read from the stream");

  try {
    app.parse(argc, argv);
    if (m != 0) spec.m = m;
    if (sim->count_all() > 0 && sim->get_option("--t-max")->count() > 0) spec.t_max = t_max;
    if (!p_text.empty()) spec.p = parse_list(p_text, "--p");
    if (!regime_text.empty()) spec.regime_change = parse_list(regime_text, "--regime-change");
    spec.checkpoints = checkpoints;
    spec.rng_mode = rng_modes.at(rng_mode);
    if (ver->get_option("--only")->count() > 0) spec.only = only;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*sim) return isw::run_simulate(spec, std::cout, std::cerr);
    if (*ver) return isw::run_verify(spec, std::cout);
    if (*comp) return isw::run_compress(spec, std::cout, std::cerr);
    return isw::run_decompress(spec, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "isw: " << e.what() << '\n';
    return 1;
  }
}
