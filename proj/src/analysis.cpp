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

#include "isw/analysis.hpp"

#include <cstdlib>
#include <random>
#include <string>

namespace isw {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

// ways[k][r]: compositions of r into k parts, saturating.
std::vector<std::vector<std::uint64_t>> composition_table(std::size_t m, std::uint32_t w) {
  std::vector<std::vector<std::uint64_t>> ways(m + 1, std::vector<std::uint64_t>(w + 1, 0));
  ways[0][0] = 1;
  for (std::size_t k = 1; k <= m; ++k) {
    std::uint64_t running = 0;
    for (std::uint32_t r = 0; r <= w; ++r) {
      running = saturating_add(running, ways[k - 1][r]);
      ways[k][r] = running;
    }
  }
  return ways;
}

void enumerate(std::size_t m, std::uint32_t remaining, std::vector<std::uint32_t>& prefix,
               std::vector<std::uint32_t>& out) {
  if (prefix.size() + 1 == m) {
    prefix.push_back(remaining);
    out.insert(out.end(), prefix.begin(), prefix.end());
    prefix.pop_back();
    return;
  }
  for (std::uint32_t v = remaining + 1; v-- > 0;) {
    prefix.push_back(v);
    enumerate(m, remaining - v, prefix, out);
    prefix.pop_back();
  }
}

// Inverse-CDF draw of a letter from 53 random bits; never returns a letter of
// probability zero.
class LetterSampler {
 public:
  explicit LetterSampler(const std::vector<double>& p) : p_(p), cumulative_(p.size()) {
    double running = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      running += p[i];
      cumulative_[i] = running;
      if (p[i] > 0) last_ = i;
    }
  }

  Symbol operator()(std::mt19937_64& rng) const {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    for (Symbol i = 0; i < p_.size(); ++i)
      if (u < cumulative_[i] && p_[i] > 0) return i;
    return last_;
  }

 private:
  const std::vector<double>& p_;
  std::vector<double> cumulative_;
  Symbol last_ = 0;
};

struct Occupancy {
  double all;         // P{all w boxes hit}
  double complement;  // 1 - all, summed directly
};

Occupancy occupancy_recurrence(std::uint32_t w, std::uint64_t t) {
  std::vector<double> hit(w + 1, 0.0);  // hit[j] = P{exactly j distinct boxes}
  hit[0] = 1.0;
  const double inv_w = 1.0 / w;
  for (std::uint64_t step = 0; step < t; ++step) {
    const std::size_t top = static_cast<std::size_t>(std::min<std::uint64_t>(step + 1, w));
    for (std::size_t j = top; j >= 1; --j)
      hit[j] = hit[j] * (j * inv_w) + hit[j - 1] * ((w - j + 1) * inv_w);
    hit[0] = 0.0;
  }
  double complement = 0;
  for (std::uint32_t j = 0; j < w; ++j) complement += hit[j];
  return {hit[w], complement};
}

}  // namespace

std::size_t default_state_cap() {
  if (const char* env = std::getenv("ISW_STATE_CAP"); env && *env) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("ISW_STATE_CAP is not an integer: ") + env);
    }
  }
  return 100'000;
}

std::uint64_t composition_count(std::size_t m, std::uint32_t w) noexcept {
  if (m == 0) return w == 0 ? 1 : 0;
  // C(w+m-1, m-1) built incrementally; each partial product is itself a binomial.
  const std::uint64_t k = m - 1;
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (w + i) / i;
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

CompositionIndex::CompositionIndex(std::size_t m, std::uint32_t w, std::size_t cap) : m_(m), w_(w) {
  if (m < 1) throw std::invalid_argument("CompositionIndex: need at least one part");
  const std::uint64_t count = composition_count(m, w);
  if (count > cap)
    throw std::length_error("state space of " + std::to_string(count) + " compositions exceeds cap " +
                            std::to_string(cap));
  size_ = static_cast<std::size_t>(count);
  ways_ = composition_table(m, w);
  states_.reserve(size_ * m);
  std::vector<std::uint32_t> prefix;
  prefix.reserve(m);
  enumerate(m, w, prefix, states_);
}

std::span<const std::uint32_t> CompositionIndex::state(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("composition index out of range");
  return {states_.data() + index * m_, m_};
}

std::size_t CompositionIndex::index_of(std::span<const std::uint32_t> composition) const {
  if (composition.size() != m_) throw std::invalid_argument("index_of: wrong number of parts");
  std::uint64_t remaining = w_;
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i + 1 < m_; ++i) {
    const std::uint32_t v = composition[i];
    if (v > remaining) throw std::invalid_argument("index_of: parts exceed w");
    const std::size_t parts_after = m_ - 1 - i;
    for (std::uint64_t larger = v + 1; larger <= remaining; ++larger)
      rank += ways_[parts_after][remaining - larger];
    remaining -= v;
  }
  if (composition[m_ - 1] != remaining) throw std::invalid_argument("index_of: parts do not sum to w");
  return static_cast<std::size_t>(rank);
}

Vector<double> stationary_distribution(const TransitionMatrix<double>& matrix, std::optional<Vector<double>> initial,
                                       double tolerance, std::uint64_t max_iterations) {
  const Eigen::Index n = matrix.rows();
  Vector<double> law = initial ? std::move(*initial) : Vector<double>::Constant(n, 1.0 / static_cast<double>(n));
  if (law.size() != n) throw std::invalid_argument("stationary_distribution: size mismatch");
  for (std::uint64_t it = 0; it < max_iterations; ++it) {
    Vector<double> next = advance(matrix, law);
    const double residual = (next - law).cwiseAbs().maxCoeff();
    law.swap(next);
    if (residual < tolerance) return law / law.sum();
  }
  throw std::runtime_error("stationary_distribution: no convergence within the iteration cap");
}

Rational occupancy_all_replaced(std::uint32_t w, std::uint64_t t) {
  if (w < 1) throw std::invalid_argument("occupancy: w must be positive");
  BigInt sum = 0;
  for (std::uint32_t k = 0; k <= w; ++k) {
    BigInt term = binomial(w, k) * boost::multiprecision::pow(BigInt(w - k), static_cast<unsigned>(t));
    if (k & 1u) sum -= term;
    else sum += term;
  }
  return Rational(sum, boost::multiprecision::pow(BigInt(w), static_cast<unsigned>(t)));
}

double occupancy_all_replaced_recurrence(std::uint32_t w, std::uint64_t t) {
  if (w < 1) throw std::invalid_argument("occupancy: w must be positive");
  return occupancy_recurrence(w, t).all;
}

std::optional<double> kl_bound(std::uint32_t w, std::uint64_t t) {
  if (w < 1) throw std::invalid_argument("kl_bound: w must be positive");
  if (t < w) return std::nullopt;
  if (w <= 64) return neg_log2(occupancy_all_replaced(w, t));
  const Occupancy occ = occupancy_recurrence(w, t);
  if (occ.all <= 0) return std::nullopt;
  if (occ.all > 0.5) return -std::log1p(-occ.complement) / std::numbers::ln2;
  return -std::log2(occ.all);
}

double kl_bound_asymptotic(double w, double t) { return w * std::exp(-t / w); }

double expected_count_exact(std::uint32_t w, double p, double e0, std::uint64_t t) {
  if (w < 1) throw std::invalid_argument("expected_count_exact: w must be positive");
  const double untouched = std::pow(1.0 - 1.0 / w, static_cast<double>(t));
  return w * (1.0 - untouched) * p + w * untouched * e0;
}

double MonteCarloSnapshot::probability(std::span<const std::uint32_t> composition) const {
  const auto it = histogram.find(std::vector<std::uint32_t>(composition.begin(), composition.end()));
  return it == histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
}

std::vector<MonteCarloSnapshot> monte_carlo_frequencies(const std::vector<double>& p, const IswState& initial,
                                                        std::span<const std::uint64_t> checkpoints,
                                                        std::uint64_t trials, std::uint64_t seed,
                                                        const std::vector<double>* initial_law) {
  const std::size_t m = initial.alphabet_size();
  if (p.size() != m) throw std::invalid_argument("monte_carlo: p has the wrong dimension");
  if (trials < 1) throw std::invalid_argument("monte_carlo: need at least one trial");
  detail::check_probabilities<double>(Eigen::Map<const Vector<double>>(p.data(), static_cast<Eigen::Index>(m)));
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] <= checkpoints[i - 1]) throw std::invalid_argument("monte_carlo: checkpoints must ascend");

  if (initial_law) {
    if (initial_law->size() != m) throw std::invalid_argument("monte_carlo: initial law has the wrong dimension");
    detail::check_probabilities<double>(
        Eigen::Map<const Vector<double>>(initial_law->data(), static_cast<Eigen::Index>(m)));
  }
  const LetterSampler draw_letter(p);

  struct Accumulator {
    std::vector<std::uint64_t> sum;
    std::vector<unsigned __int128> sum_squares;
  };
  std::vector<MonteCarloSnapshot> snapshots(checkpoints.size());
  std::vector<Accumulator> acc(checkpoints.size(), {std::vector<std::uint64_t>(m, 0),
                                                    std::vector<unsigned __int128>(m, 0)});
  auto record = [&](std::size_t c, const IswState& state) {
    const auto counts = state.counts();
    ++snapshots[c].histogram[std::vector<std::uint32_t>(counts.begin(), counts.end())];
    for (std::size_t i = 0; i < m; ++i) {
      acc[c].sum[i] += counts[i];
      acc[c].sum_squares[i] += static_cast<unsigned __int128>(counts[i]) * counts[i];
    }
  };

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = splitmix64(seed + trial);
    SeededBitSource bits(trial_seed);
    std::mt19937_64 letters(splitmix64(trial_seed));
    IswState state = initial;
    if (initial_law) {
      const LetterSampler draw_start(*initial_law);
      std::vector<std::uint32_t> counts(m, 0);
      for (std::uint32_t k = 0; k < initial.window_length(); ++k) ++counts[draw_start(letters)];
      state = IswState(std::move(counts));
    }
    std::uint64_t t = 0;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      for (; t < checkpoints[c]; ++t) isw_step(state, draw_letter(letters), bits);
      record(c, state);
    }
  }

  const auto n = static_cast<long double>(trials);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    MonteCarloSnapshot& snap = snapshots[c];
    snap.t = checkpoints[c];
    snap.trials = trials;
    snap.mean_counts.resize(m);
    snap.standard_errors.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const long double mean = acc[c].sum[i] / n;
      long double variance = 0;
      if (trials > 1) {
        variance = (static_cast<long double>(acc[c].sum_squares[i]) - n * mean * mean) / (n - 1);
        if (variance < 0) variance = 0;
      }
      snap.mean_counts[i] = static_cast<double>(mean);
      snap.standard_errors[i] = static_cast<double>(std::sqrt(variance / n));
    }
  }
  return snapshots;
}

MonteCarloSnapshot monte_carlo_frequencies(std::size_t m, std::uint32_t w, const std::vector<double>& p,
                                           std::uint64_t t, std::uint64_t trials, std::uint64_t seed) {
  const std::uint64_t checkpoint[] = {t};
  return monte_carlo_frequencies(p, IswState(m, w), checkpoint, trials, seed).front();
}

CountLaw exact_isw_law(const IswState& initial, const std::vector<Rational>& p, std::uint64_t t,
                       const Selector& select) {
  const std::size_t m = initial.alphabet_size();
  if (p.size() != m) throw std::invalid_argument("exact_isw_law: p has the wrong dimension");
  const std::uint32_t w = initial.window_length();
  const auto counts = initial.counts();
  CountLaw law{{std::vector<std::uint32_t>(counts.begin(), counts.end()), Rational(1)}};
  for (std::uint64_t step = 0; step < t; ++step) {
    CountLaw next;
    for (const auto& [composition, mass] : law) {
      const IswState state(composition);
      for (std::uint64_t z = 0; z < w; ++z) {
        const Symbol evicted = select(state, z);
        for (Symbol a = 0; a < m; ++a) {
          if (p[a] == 0) continue;
          IswState moved = state;
          moved.apply(a, evicted);
          const auto c = moved.counts();
          next[std::vector<std::uint32_t>(c.begin(), c.end())] += mass * p[a] / w;
        }
      }
    }
    law.swap(next);
  }
  return law;
}

CountLaw SwrreLaw::counts() const {
  CountLaw out;
  for (const auto& [key, mass] : joint) out[key.first] += mass;
  return out;
}

Rational SwrreLaw::all_replaced_probability() const {
  Rational total = 0;
  for (const auto& [key, mass] : joint)
    if (key.second == 0) total += mass;
  return total;
}

CountLaw SwrreLaw::counts_given_all_replaced() const {
  const Rational given = all_replaced_probability();
  if (given == 0) throw std::domain_error("conditioning on an event of probability zero");
  CountLaw out;
  for (const auto& [key, mass] : joint)
    if (key.second == 0) out[key.first] += mass / given;
  return out;
}

SwrreLaw exact_swrre_law(const SwrreBoxes& initial, const std::vector<Rational>& p, std::uint64_t t) {
  const std::size_t m = initial.alphabet_size();
  const std::size_t w = initial.window_length();
  if (p.size() != m) throw std::invalid_argument("exact_swrre_law: p has the wrong dimension");
  using Key = std::pair<std::vector<Symbol>, std::vector<bool>>;
  std::map<Key, std::pair<SwrreBoxes, Rational>> law;
  auto key_of = [](const SwrreBoxes& b) {
    return Key{std::vector<Symbol>(b.boxes().begin(), b.boxes().end()), b.touched()};
  };
  law.emplace(key_of(initial), std::make_pair(initial, Rational(1)));
  for (std::uint64_t step = 0; step < t; ++step) {
    std::map<Key, std::pair<SwrreBoxes, Rational>> next;
    for (const auto& [key, entry] : law) {
      const auto& [boxes, mass] = entry;
      for (std::size_t box = 0; box < w; ++box) {
        for (Symbol a = 0; a < m; ++a) {
          if (p[a] == 0) continue;
          SwrreBoxes moved = boxes;
          moved.replace(box, a);
          const Rational share = mass * p[a] / w;
          auto [it, fresh] = next.try_emplace(key_of(moved), moved, share);
          if (!fresh) it->second.second += share;
        }
      }
    }
    law.swap(next);
  }
  SwrreLaw out;
  for (const auto& [key, entry] : law)
    out.joint[{entry.first.counts(), entry.first.untouched_count()}] += entry.second;
  return out;
}

CountLaw to_count_law(const CompositionIndex& index, const Vector<Rational>& law) {
  CountLaw out;
  for (std::size_t s = 0; s < index.size(); ++s) {
    const Rational& mass = law(static_cast<Eigen::Index>(s));
    if (mass == 0) continue;
    const auto c = index.state(s);
    out.emplace(std::vector<std::uint32_t>(c.begin(), c.end()), mass);
  }
  return out;
}

}  // namespace isw
