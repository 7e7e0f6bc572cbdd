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

#include "isw/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "isw/analysis.hpp"
#include "isw/coder.hpp"
#include "isw/sumtree.hpp"
#include "isw/window_models.hpp"

namespace isw {

namespace {

using Family = std::function<std::string(const VerifyOptions&)>;

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

std::string theorem1(const VerifyOptions&) {
  double worst = 0;
  int cases = 0;
  const std::vector<std::vector<double>> laws = {{0.5, 0.5}, {0.7, 0.3}, {0.2, 0.3, 0.5}};
  for (const auto& law : laws) {
    const std::size_t m = law.size();
    const Vector<double> p = Eigen::Map<const Vector<double>>(law.data(), static_cast<Eigen::Index>(m));
    for (std::uint32_t w = 2; w <= 6; ++w) {
      const CompositionIndex index(m, w);
      const Vector<double> pi = stationary_distribution(build_transition_matrix(index, p));
      worst = std::max(worst, (pi - multinomial_distribution(index, p)).cwiseAbs().maxCoeff());
      ++cases;
    }
  }
  if (!(worst < 1e-10)) fail("stationary law differs from multinomial by " + std::to_string(worst));
  std::ostringstream os;
  os << cases << " chains, max |pi - multinomial| = " << worst;
  return os.str();
}

std::string theorem2(const VerifyOptions&) {
  int checked = 0;
  for (std::uint32_t w : {4u, 8u}) {
    const CompositionIndex index(2, w);
    Vector<Rational> p(2);
    p << Rational(1, 2), Rational(1, 2);
    const auto matrix = build_transition_matrix(index, p);
    const Vector<Rational> limit = multinomial_distribution(index, p);
    const std::uint32_t start[] = {w, 0};
    Vector<Rational> law = point_mass<Rational>(index, start);
    for (std::uint64_t t = 1; t <= 50ull * w; ++t) {
      law = advance(matrix, law);
      if (t < w) continue;
      const auto bound = kl_bound(w, t);
      if (!bound) continue;
      const double r = kl_divergence(limit, law);
      if (!(r <= *bound)) fail("R^t = " + std::to_string(r) + " above bound at w=" + std::to_string(w) +
                               " t=" + std::to_string(t));
      ++checked;
    }
  }
  return std::to_string(checked) + " (w, t) pairs with R^t <= bound";
}

std::string corollary(const VerifyOptions&) {
  std::ostringstream os;
  const std::uint32_t w = 32;
  for (int b = 1; b <= 3; ++b) {
    const auto t = static_cast<std::uint64_t>(std::llround(w * std::log(static_cast<double>(w)) + b * w));
    const double bound_nats = kl_bound(w, t).value() * std::numbers::ln2;
    const double target = std::exp(-b);
    if (!(bound_nats >= 0.3 * target && bound_nats <= 3 * target))
      fail("bound " + std::to_string(bound_nats) + " nats not near e^-" + std::to_string(b));
    os << (b == 1 ? "" : "; ") << "b=" << b << ": " << bound_nats / target << "x e^-b";
  }
  return os.str();
}

std::string theorem3(const VerifyOptions& options) {
  for (std::uint32_t w : {4u, 16u, 64u})
    for (double p : {0.3, 0.9})
      for (double e0 : {0.0, 1.0})
        for (std::uint64_t t = 1; t <= 20ull * w; ++t) {
          const double bias = std::abs(expected_count_exact(w, p, e0, t) / w - p);
          if (!(bias < std::exp(-static_cast<double>(t) / w))) fail("closed-form bias bound violated");
        }

  // The closed form against the mean of the exact chain law.
  for (std::uint32_t w : {3u, 5u, 8u}) {
    const CompositionIndex index(2, w);
    Vector<double> p(2);
    p << 0.3, 0.7;
    const auto matrix = build_transition_matrix(index, p);
    const std::uint32_t start[] = {w, 0};
    Vector<double> law = point_mass<double>(index, start);
    for (std::uint64_t t = 0; t <= 10ull * w; ++t) {
      double mean = 0;
      for (std::size_t s = 0; s < index.size(); ++s) mean += law(static_cast<Eigen::Index>(s)) * index.state(s)[0];
      if (std::abs(mean - expected_count_exact(w, 0.3, 1.0, t)) > 1e-9) fail("chain mean disagrees with closed form");
      law = advance(matrix, law);
    }
  }

  const std::uint64_t checkpoints[] = {8, 32, 128};
  const std::int64_t start[] = {16, 0};
  const auto snaps = monte_carlo_frequencies({0.3, 0.7}, IswState(2, 16, start), checkpoints, options.trials, 2024);
  std::ostringstream os;
  for (const auto& snap : snaps) {
    const double expected = expected_count_exact(16, 0.3, 1.0, snap.t);
    const double z = (snap.mean_counts[0] - expected) / snap.standard_errors[0];
    if (!(std::abs(z) < 3)) fail("Monte Carlo mean off by " + std::to_string(z) + " standard errors");
    os << (snap.t == checkpoints[0] ? "" : "; ") << "t=" << snap.t << " z=" << z;
  }
  return os.str();
}

std::vector<Symbol> boxes_for(std::span<const std::uint32_t> counts) {
  std::vector<Symbol> boxes;
  for (Symbol a = 0; a < counts.size(); ++a) boxes.insert(boxes.end(), counts[a], a);
  return boxes;
}

std::string swrre(const VerifyOptions& options) {
  int cases = 0;
  for (std::size_t m : {2u, 3u}) {
    std::vector<Rational> p(m, Rational(1, static_cast<int>(m)));
    if (m == 2) p = {Rational(1, 3), Rational(2, 3)};
    Vector<Rational> pv(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) pv(static_cast<Eigen::Index>(i)) = p[i];
    for (std::uint32_t w = 1; w <= 4; ++w) {
      const CompositionIndex index(m, w);
      const auto matrix = build_transition_matrix(index, pv);
      for (std::size_t s = 0; s < index.size(); ++s) {
        const auto start = index.state(s);
        Vector<Rational> chain = point_mass<Rational>(index, start);
        for (std::uint64_t t = 0; t <= 5; ++t) {
          const std::vector<std::uint32_t> counts(start.begin(), start.end());
          const CountLaw isw = exact_isw_law(IswState(counts), p, t, options.selector);
          const CountLaw box = exact_swrre_law(SwrreBoxes(m, boxes_for(start)), p, t).counts();
          if (isw != box) fail("ISW and box-model laws differ at m=" + std::to_string(m) + " w=" + std::to_string(w) +
                               " t=" + std::to_string(t));
          if (isw != to_count_law(index, chain)) fail("ISW law differs from the transition-matrix law");
          chain = advance(matrix, chain);
          ++cases;
        }
      }
    }
  }
  return std::to_string(cases) + " (m, w, start, t) laws equal exactly";
}

BigInt surjections(std::uint32_t boxes, std::uint64_t draws) {
  // S(n, k) k! by the recurrence s(n, k) = k (s(n-1, k) + s(n-1, k-1)).
  std::vector<BigInt> row(boxes + 1, 0);
  row[0] = 1;
  for (std::uint64_t n = 1; n <= draws; ++n) {
    for (std::uint32_t k = boxes; k >= 1; --k) row[k] = k * (row[k] + row[k - 1]);
    row[0] = 0;
  }
  return row[boxes];
}

std::string occupancy(const VerifyOptions&) {
  int cases = 0;
  for (std::uint32_t w = 1; w <= 8; ++w)
    for (std::uint64_t t = 0; t <= 16; ++t) {
      const Rational exact = occupancy_all_replaced(w, t);
      const Rational oracle(surjections(w, t), boost::multiprecision::pow(BigInt(w), static_cast<unsigned>(t)));
      if (exact != oracle) fail("occupancy sum differs from surjection count");
      if (std::abs(occupancy_all_replaced_recurrence(w, t) - to_double(exact)) > 1e-12) fail("recurrence disagrees");
      const auto bound = kl_bound(w, t);
      if (exact == 0) {
        if (bound) fail("bound defined where occupancy is zero");
      } else if (!bound || *bound != neg_log2(exact)) {
        fail("bound is not -log2 of the occupancy probability");
      }
      ++cases;
    }
  return std::to_string(cases) + " (w, t) pairs";
}

// Uniform cut points in [0, w]; sparse letters get zero counts often.
std::vector<std::uint32_t> random_composition(std::size_t m, std::uint32_t w, std::mt19937_64& rng) {
  std::vector<std::uint32_t> cuts(m - 1);
  for (auto& c : cuts) c = static_cast<std::uint32_t>(rng() % (w + 1ull));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::uint32_t> counts(m);
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    counts[i] = cuts[i] - prev;
    prev = cuts[i];
  }
  counts[m - 1] = w - prev;
  return counts;
}

std::string sumtree(const VerifyOptions& options) {
  // Exhaustive over compositions of 6 into 4 parts.
  const CompositionIndex index(4, 6);
  for (std::size_t s = 0; s < index.size(); ++s) {
    const std::vector<std::uint32_t> counts(index.state(s).begin(), index.state(s).end());
    const IswState state(counts);
    const SumTree tree(counts);
    for (std::uint64_t z = 0; z < 6; ++z)
      if (tree.select(z) != options.selector(state, z)) fail("tree select disagrees with the selector");
  }
  std::mt19937_64 rng(7);
  for (int c = 0; c < 1000; ++c) {
    const std::vector<std::uint32_t> counts = random_composition(256, 1u << 16, rng);
    const IswState state(counts);
    const SumTree tree(counts);
    const std::uint64_t z = rng() % (1u << 16);
    if (tree.select(z) != options.selector(state, z)) fail("tree select disagrees at m=256");
  }
  IswState slow(16, 64);
  SumTree fast(slow.counts());
  SeededBitSource bits_a(99), bits_b(99);
  std::mt19937_64 letters(5);
  std::uint64_t worst = 0;
  for (int t = 0; t < 10000; ++t) {
    const Symbol a = letters() % 16;
    isw_step(slow, a, bits_a, options.selector);
    fast.reset_touch_counter();
    isw_step_fast(fast, a, bits_b);
    worst = std::max(worst, fast.touched_nodes());
  }
  if (!std::equal(slow.counts().begin(), slow.counts().end(), fast.leaves().begin())) fail("fast replay diverged");
  if (worst > 3 * (4 + 1)) fail("too many nodes touched per step");
  return "select exhaustive at m=4 w=6, 10^4-step replay, max " + std::to_string(worst) + " nodes per step";
}

std::string memory(const VerifyOptions&) {
  const std::size_t m = 256;
  const std::uint32_t w = 1u << 20;
  const IswState state(m, w);
  const SumTree tree(state.counts());
  const std::uint64_t limit = 2 * m * counter_width(w);
  if (state.storage_bits() > limit || tree.storage_bits() > limit) fail("ISW storage above 2m counters");
  const std::uint64_t window = TrueWindow::storage_bits(m, w);
  std::ostringstream os;
  os << "tree " << tree.storage_bits() << " bits vs window " << window << " bits";
  return os.str();
}

std::string coder(const VerifyOptions&) {
  std::mt19937_64 rng(11);
  for (RngMode mode : {RngMode::seeded_prng, RngMode::self_feed})
    for (std::size_t order : {0u, 1u, 2u}) {
      CoderConfig config{.m = 4, .order = order, .w = 64, .rng_mode = mode, .seed = rng()};
      std::vector<Symbol> x(3000);
      for (auto& a : x) a = (rng() % 10 < 7) ? 0 : rng() % 4;
      if (decode(encode(x, config)) != x) fail("round trip failed");
    }
  std::vector<Symbol> x(100000);
  std::bernoulli_distribution one(0.1);
  std::size_t ones = 0;
  for (auto& a : x) ones += (a = one(rng) ? 1 : 0);
  const auto bytes = encode(x, {.m = 2, .order = 0, .w = 1024});
  const double f = static_cast<double>(ones) / x.size();
  const double entropy = -(f * std::log2(f) + (1 - f) * std::log2(1 - f));
  const double rate = 8.0 * bytes.size() / x.size();
  if (!(rate < entropy + 0.2)) fail("compression rate " + std::to_string(rate) + " too far above entropy");
  return "round trips ok; " + std::to_string(rate) + " bits/symbol vs entropy " + std::to_string(entropy);
}

const std::vector<std::pair<std::string, Family>>& registry() {
  static const std::vector<std::pair<std::string, Family>> families = {
      {"theorem1", theorem1}, {"theorem2", theorem2}, {"corollary", corollary}, {"theorem3", theorem3},
      {"swrre", swrre},       {"occupancy", occupancy}, {"sumtree", sumtree},   {"memory", memory},
      {"coder", coder},
  };
  return families;
}

}  // namespace

const std::vector<std::string>& verify_families() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::vector<CheckResult> run_checks(const VerifyOptions& options) {
  if (options.only) {
    const auto& names = verify_families();
    if (std::find(names.begin(), names.end(), *options.only) == names.end())
      throw std::invalid_argument("unknown check family: " + *options.only);
  }
  std::vector<CheckResult> results;
  for (const auto& [name, family] : registry()) {
    if (options.only && *options.only != name) continue;
    CheckResult r;
    r.family = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.detail = family(options);
      r.passed = true;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace isw
