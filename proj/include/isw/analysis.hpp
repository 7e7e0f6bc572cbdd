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

// Exact and Monte Carlo machinery for the law of the ISW counts: the state
// space of compositions, the count-vector Markov chain, its stationary and
// finite-time laws, divergence from the multinomial limit and the occupancy
// bound on it. Chain code is templated on the scalar so the same routines run
// in double or in exact rationals.

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "isw/core.hpp"
#include "isw/exact.hpp"
#include "isw/window_models.hpp"

namespace isw {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using TransitionMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

/// Largest exact chain we build: ISW_STATE_CAP from the environment, else 1e5.
std::size_t default_state_cap();

/// C(w+m-1, m-1), saturating at UINT64_MAX.
std::uint64_t composition_count(std::size_t m, std::uint32_t w) noexcept;

/// All m-part compositions of w, ordered with the first part descending
/// (so state 0 is (w, 0, ..., 0)), and the inverse map.
class CompositionIndex {
 public:
  /// Throws std::length_error when the state count exceeds `cap`.
  CompositionIndex(std::size_t m, std::uint32_t w, std::size_t cap = default_state_cap());

  std::size_t alphabet_size() const noexcept { return m_; }
  std::uint32_t window_length() const noexcept { return w_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const std::uint32_t> state(std::size_t index) const;
  std::size_t index_of(std::span<const std::uint32_t> composition) const;

 private:
  std::size_t m_;
  std::uint32_t w_;
  std::size_t size_;
  std::vector<std::uint32_t> states_;  // size_ rows of m_
  std::vector<std::vector<std::uint64_t>> ways_;  // ways_[parts][total]
};

class InfiniteDivergence : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

template <typename Scalar>
void check_probabilities(const Vector<Scalar>& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) < 0) throw std::invalid_argument("negative probability");
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (std::abs(p.sum() - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
  } else {
    if (p.sum() != Scalar(1)) throw std::invalid_argument("probabilities must sum to 1");
  }
}

}  // namespace detail

/// Multinomial probability of composition n of w under letter law p.
template <typename Scalar>
Scalar multinomial_pmf(std::uint32_t w, const Vector<Scalar>& p, std::span<const std::uint32_t> n) {
  if (static_cast<std::size_t>(p.size()) != n.size())
    throw std::invalid_argument("multinomial_pmf: dimension mismatch");
  std::uint64_t sum = 0;
  for (std::uint32_t c : n) sum += c;
  if (sum != w) throw std::invalid_argument("multinomial_pmf: composition does not sum to w");

  if constexpr (std::is_floating_point_v<Scalar>) {
    double log_value = std::lgamma(w + 1.0);
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] == 0) continue;
      if (p(i) == 0) return 0;
      log_value += n[i] * std::log(p(i)) - std::lgamma(n[i] + 1.0);
    }
    return std::exp(log_value);
  } else {
    Scalar value = 1;
    std::uint64_t remaining = w;
    for (std::size_t i = 0; i < n.size(); ++i) {
      value *= Scalar(binomial(remaining, n[i]));
      remaining -= n[i];
      value *= power(Scalar(p(i)), n[i]);
    }
    return value;
  }
}

/// The multinomial law over every state of `index`.
template <typename Scalar>
Vector<Scalar> multinomial_distribution(const CompositionIndex& index, const Vector<Scalar>& p) {
  Vector<Scalar> out(static_cast<Eigen::Index>(index.size()));
  for (std::size_t s = 0; s < index.size(); ++s)
    out(static_cast<Eigen::Index>(s)) = multinomial_pmf<Scalar>(index.window_length(), p, index.state(s));
  return out;
}

template <typename Scalar>
Vector<Scalar> point_mass(const CompositionIndex& index, std::span<const std::uint32_t> composition) {
  Vector<Scalar> out = Vector<Scalar>::Zero(static_cast<Eigen::Index>(index.size()));
  out(static_cast<Eigen::Index>(index.index_of(composition))) = Scalar(1);
  return out;
}

/// Row-stochastic transition matrix of the ISW counts: from sigma, letter i
/// arrives with p_i and letter j leaves with sigma_j / w.
template <typename Scalar>
TransitionMatrix<Scalar> build_transition_matrix(const CompositionIndex& index, const Vector<Scalar>& p) {
  const std::size_t m = index.alphabet_size();
  if (static_cast<std::size_t>(p.size()) != m)
    throw std::invalid_argument("build_transition_matrix: dimension mismatch");
  detail::check_probabilities(p);
  const Scalar w = Scalar(index.window_length());

  std::vector<Eigen::Triplet<Scalar>> entries;
  std::vector<std::uint32_t> target(m);
  for (std::size_t s = 0; s < index.size(); ++s) {
    const auto sigma = index.state(s);
    Scalar stay = 0;
    for (std::size_t k = 0; k < m; ++k) stay += p(k) * Scalar(sigma[k]) / w;
    const auto row = static_cast<Eigen::Index>(s);
    if (stay != Scalar(0)) entries.emplace_back(row, row, stay);
    for (std::size_t i = 0; i < m; ++i) {
      if (p(i) == Scalar(0)) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i || sigma[j] == 0) continue;
        target.assign(sigma.begin(), sigma.end());
        ++target[i];
        --target[j];
        entries.emplace_back(row, static_cast<Eigen::Index>(index.index_of(target)),
                             p(i) * Scalar(sigma[j]) / w);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(index.size());
  TransitionMatrix<Scalar> matrix(n, n);
  matrix.setFromTriplets(entries.begin(), entries.end());
  return matrix;
}

/// One step of the chain applied to a law: returns law * M.
template <typename Scalar>
Vector<Scalar> advance(const TransitionMatrix<Scalar>& matrix, const Vector<Scalar>& law) {
  Vector<Scalar> next = matrix.transpose() * law;
  return next;
}

/// initial * M^t.
template <typename Scalar>
Vector<Scalar> evolve_distribution(const TransitionMatrix<Scalar>& matrix, Vector<Scalar> initial,
                                   std::uint64_t t) {
  if (initial.size() != matrix.rows()) throw std::invalid_argument("evolve_distribution: size mismatch");
  for (std::uint64_t step = 0; step < t; ++step) initial = advance(matrix, initial);
  return initial;
}

/// Power iteration from `initial` (uniform if absent) until successive
/// iterates differ by less than `tolerance` in max norm. With a reducible
/// chain the result is the limit reached from `initial`.
Vector<double> stationary_distribution(const TransitionMatrix<double>& matrix,
                                       std::optional<Vector<double>> initial = std::nullopt,
                                       double tolerance = 1e-12, std::uint64_t max_iterations = 1'000'000);

/// Kullback-Leibler divergence sum ref * log2(ref / actual), in bits. Each
/// term goes through log1p of (ref/actual - 1) formed in Scalar, so exact
/// rational laws keep full relative precision however close they are.
/// Throws InfiniteDivergence where ref > 0 but actual == 0.
template <typename Scalar>
double kl_divergence(const Vector<Scalar>& reference, const Vector<Scalar>& actual) {
  if (reference.size() != actual.size()) throw std::invalid_argument("kl_divergence: size mismatch");
  double total = 0;
  for (Eigen::Index i = 0; i < reference.size(); ++i) {
    if (reference(i) == Scalar(0)) continue;
    if (actual(i) <= Scalar(0)) throw InfiniteDivergence("reference mass on a state the actual law misses");
    const Scalar excess = reference(i) / actual(i) - Scalar(1);
    total += to_double(reference(i)) * std::log1p(to_double(excess));
  }
  return total / std::numbers::ln2;
}

template <typename Scalar>
double total_variation(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
  double sum = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) sum += std::abs(to_double(Scalar(a(i) - b(i))));
  return sum / 2;
}

/// P{every one of w boxes replaced after t uniform picks}, as the exact
/// inclusion-exclusion sum over k of (-1)^k C(w,k) (1 - k/w)^t.
Rational occupancy_all_replaced(std::uint32_t w, std::uint64_t t);

/// The same probability by the forward recurrence on the number of distinct
/// boxes hit; nonnegative terms only, so it is stable in double for any w.
double occupancy_all_replaced_recurrence(std::uint32_t w, std::uint64_t t);

/// Upper bound on the divergence of the ISW law at time t from its limit,
/// -log2 P{all boxes replaced}, in bits. Empty where the probability is 0
/// (t < w). Exact for w <= 64, recurrence beyond.
std::optional<double> kl_bound(std::uint32_t w, std::uint64_t t);

/// w * exp(-t / w), in nats.
double kl_bound_asymptotic(double w, double t);

/// E(count of a letter at time t) when it arrives with probability p and
/// each box initially holds it with probability e0:
/// w (1 - q^t) p + w q^t e0 with q = 1 - 1/w.
double expected_count_exact(std::uint32_t w, double p, double e0, std::uint64_t t);

struct MonteCarloSnapshot {
  std::uint64_t t = 0;
  std::uint64_t trials = 0;
  std::map<std::vector<std::uint32_t>, std::uint64_t> histogram;
  std::vector<double> mean_counts;
  std::vector<double> standard_errors;  // of the means

  double probability(std::span<const std::uint32_t> composition) const;
};

/// Runs `trials` independent ISW chains from `initial`, letters i.i.d. from p,
/// recording the state at each checkpoint (ascending). Trial k draws from
/// generators seeded by splitmix64(seed + k), so results do not depend on the
/// order trials are run in. With `initial_law`, each trial instead starts
/// from the counts of w letters drawn i.i.d. from it (a multinomial start);
/// `initial` then only fixes m and w.
std::vector<MonteCarloSnapshot> monte_carlo_frequencies(const std::vector<double>& p, const IswState& initial,
                                                        std::span<const std::uint64_t> checkpoints,
                                                        std::uint64_t trials, std::uint64_t seed,
                                                        const std::vector<double>* initial_law = nullptr);
/// Balanced start, single checkpoint.
MonteCarloSnapshot monte_carlo_frequencies(std::size_t m, std::uint32_t w, const std::vector<double>& p,
                                           std::uint64_t t, std::uint64_t trials, std::uint64_t seed);

/// Exact law of counts keyed by composition.
using CountLaw = std::map<std::vector<std::uint32_t>, Rational>;

/// Law of the ISW counts after t steps, by summing over every (z, letter)
/// outcome of every step: z uniform on [0, w), eviction = select(state, z).
CountLaw exact_isw_law(const IswState& initial, const std::vector<Rational>& p, std::uint64_t t,
                       const Selector& select = select_naive);

struct SwrreLaw {
  /// (counts, untouched boxes) -> probability.
  std::map<std::pair<std::vector<std::uint32_t>, std::size_t>, Rational> joint;

  CountLaw counts() const;
  Rational all_replaced_probability() const;
  /// Law of the counts given that no box is untouched.
  CountLaw counts_given_all_replaced() const;
};

/// Law of the box model after t steps by summing over every (box, letter)
/// outcome of every step. Needs w <= 64.
SwrreLaw exact_swrre_law(const SwrreBoxes& initial, const std::vector<Rational>& p, std::uint64_t t);

/// Reads a chain law over `index` into a CountLaw (zero states dropped).
CountLaw to_count_law(const CompositionIndex& index, const Vector<Rational>& law);

}  // namespace isw
