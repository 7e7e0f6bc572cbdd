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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "isw/analysis.hpp"

using namespace isw;

namespace {

Vector<double> vecd(std::initializer_list<double> xs) {
  Vector<double> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Vector<Rational> vecq(std::initializer_list<Rational> xs) {
  Vector<Rational> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

std::vector<std::uint32_t> comp(std::initializer_list<std::uint32_t> xs) { return xs; }

// Number of maps from t boxes onto all of w, by inclusion-exclusion over
// Stirling numbers of the second kind: w! S(t, w).
BigInt surjections(std::uint32_t w, std::uint64_t t) {
  std::vector<std::vector<BigInt>> s(t + 1, std::vector<BigInt>(w + 1, 0));
  s[0][0] = 1;
  for (std::uint64_t n = 1; n <= t; ++n)
    for (std::uint32_t k = 1; k <= w; ++k) s[n][k] = k * s[n - 1][k] + s[n - 1][k - 1];
  BigInt factorial = 1;
  for (std::uint32_t k = 2; k <= w; ++k) factorial *= k;
  return factorial * s[t][w];
}

}  // namespace

TEST_CASE("composition index") {
  CompositionIndex idx(2, 2);
  REQUIRE(idx.size() == 3);
  CHECK(std::vector<std::uint32_t>(idx.state(0).begin(), idx.state(0).end()) == comp({2, 0}));
  CHECK(std::vector<std::uint32_t>(idx.state(1).begin(), idx.state(1).end()) == comp({1, 1}));
  CHECK(std::vector<std::uint32_t>(idx.state(2).begin(), idx.state(2).end()) == comp({0, 2}));
  CompositionIndex big(4, 6);
  CHECK(big.size() == 84);
  for (std::size_t i = 0; i < big.size(); ++i) REQUIRE(big.index_of(big.state(i)) == i);
  CHECK(composition_count(3, 4) == 15);
  CHECK_THROWS_AS(CompositionIndex(10, 50, 1000), std::length_error);
}

TEST_CASE("multinomial pmf") {
  CHECK(multinomial_pmf<double>(2, vecd({0.5, 0.5}), comp({1, 1})) == doctest::Approx(0.5));
  CHECK(multinomial_pmf<double>(3, vecd({1, 0}), comp({3, 0})) == doctest::Approx(1.0));
  CHECK(multinomial_pmf<double>(3, vecd({1, 0}), comp({2, 1})) == 0.0);

  // enumerate the 16 window contents of length 4 with two of each letter
  double by_windows = 0;
  for (int word = 0; word < 16; ++word) {
    int ones = __builtin_popcount(word);
    if (ones == 2) by_windows += std::pow(0.7, 4 - ones) * std::pow(0.3, ones);
  }
  CHECK(by_windows == doctest::Approx(0.2646).epsilon(1e-12));
  CHECK(multinomial_pmf<double>(4, vecd({0.7, 0.3}), comp({2, 2})) == doctest::Approx(by_windows).epsilon(1e-12));
  CHECK(multinomial_pmf<Rational>(4, vecq({Rational(7, 10), Rational(3, 10)}), comp({2, 2})) ==
        Rational(2646, 10000));
}

TEST_CASE("transition matrix") {
  SUBCASE("rows are stochastic") {
    CompositionIndex idx(2, 3);
    const auto M = build_transition_matrix(idx, vecd({0.6, 0.4}));
    const Vector<double> rows = M * Vector<double>::Ones(M.cols());
    for (Eigen::Index i = 0; i < rows.size(); ++i) CHECK(rows(i) == doctest::Approx(1.0));
  }
  SUBCASE("w = 1 by hand") {
    CompositionIndex idx(2, 1);
    const auto M = build_transition_matrix(idx, vecq({Rational(1, 3), Rational(2, 3)}));
    CHECK(M.coeff(0, 0) == Rational(1, 3));
    CHECK(M.coeff(0, 1) == Rational(2, 3));
  }
  SUBCASE("diagonal at (1,1)") {
    CompositionIndex idx(2, 2);
    const auto M = build_transition_matrix(idx, vecq({Rational(1, 2), Rational(1, 2)}));
    CHECK(M.coeff(1, 1) == Rational(1, 2));
  }
  SUBCASE("agrees with one enumerated ISW step") {
    const std::vector<Rational> p{Rational(1, 5), Rational(3, 10), Rational(1, 2)};
    CompositionIndex idx(3, 4);
    const auto M = build_transition_matrix(idx, vecq({p[0], p[1], p[2]}));
    for (std::size_t s = 0; s < idx.size(); ++s) {
      const auto sigma = idx.state(s);
      const IswState start(std::vector<std::uint32_t>(sigma.begin(), sigma.end()));
      const CountLaw law = exact_isw_law(start, p, 1);
      for (const auto& [counts, prob] : law)
        REQUIRE(M.coeff(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(idx.index_of(counts))) == prob);
    }
  }
  SUBCASE("rejects bad probabilities") {
    CompositionIndex idx(2, 2);
    CHECK_THROWS(build_transition_matrix(idx, vecd({0.5, 0.6})));
    CHECK_THROWS(build_transition_matrix(idx, vecd({1.0})));
  }
}

TEST_CASE("stationary distribution") {
  {
    CompositionIndex idx(2, 2);
    const auto pi = stationary_distribution(build_transition_matrix(idx, vecd({0.5, 0.5})));
    CHECK(pi(0) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(pi(1) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pi(2) == doctest::Approx(0.25).epsilon(1e-10));
  }
  {
    CompositionIndex idx(2, 4);
    const Vector<double> p = vecd({0.7, 0.3});
    const auto pi = stationary_distribution(build_transition_matrix(idx, p));
    const auto ref = multinomial_distribution(idx, p);
    CHECK((pi - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
  {
    CompositionIndex idx(3, 3);
    const auto pi = stationary_distribution(build_transition_matrix(idx, vecd({1, 0, 0})));
    CHECK(pi(0) == doctest::Approx(1.0));
    CHECK(pi.tail(pi.size() - 1).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("evolution") {
  CompositionIndex idx(2, 3);
  const Vector<double> p = vecd({0.6, 0.4});
  const auto M = build_transition_matrix(idx, p);
  const Vector<double> start = point_mass<double>(idx, comp({3, 0}));
  CHECK(evolve_distribution(M, start, 0) == start);
  const Vector<double> one = evolve_distribution(M, start, 1);
  for (Eigen::Index j = 0; j < one.size(); ++j) CHECK(one(j) == doctest::Approx(M.coeff(0, j)));
  const Vector<double> late = evolve_distribution(M, start, 2000);
  CHECK((late - stationary_distribution(M)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("divergence") {
  const Vector<double> a = vecd({0.5, 0.5});
  CHECK(kl_divergence(a, a) == 0.0);
  CHECK(kl_divergence(a, vecd({0.25, 0.75})) == doctest::Approx(0.5 + 0.5 * std::log2(2.0 / 3.0)));
  CHECK(kl_divergence(a, vecd({0.25, 0.75})) == doctest::Approx(0.2075).epsilon(1e-3));
  CHECK_THROWS_AS(kl_divergence(a, vecd({1.0, 0.0})), InfiniteDivergence);
  CHECK(kl_divergence(vecd({1.0, 0.0}), a) == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int k = 0; k < 200; ++k) {
    Vector<double> x(5), y(5);
    for (int i = 0; i < 5; ++i) x(i) = u(rng), y(i) = u(rng);
    x /= x.sum();
    y /= y.sum();
    REQUIRE(kl_divergence(x, y) >= 0.0);
  }
  CHECK(kl_divergence(vecq({Rational(1, 2), Rational(1, 2)}), vecq({Rational(1, 4), Rational(3, 4)})) ==
        doctest::Approx(0.5 + 0.5 * std::log2(2.0 / 3.0)));
  CHECK(total_variation(a, vecd({0.25, 0.75})) == doctest::Approx(0.25));
}

TEST_CASE("occupancy") {
  CHECK(occupancy_all_replaced(2, 2) == Rational(1, 2));
  CHECK(occupancy_all_replaced(3, 3) == Rational(2, 9));
  CHECK(occupancy_all_replaced(4, 3) == 0);
  CHECK(occupancy_all_replaced(1, 0) == 0);
  CHECK(occupancy_all_replaced(1, 1) == 1);
  for (std::uint32_t w = 1; w <= 8; ++w)
    for (std::uint64_t t = 0; t <= 16; ++t) {
      const Rational oracle(surjections(w, t), boost::multiprecision::pow(BigInt(w), static_cast<unsigned>(t)));
      REQUIRE(occupancy_all_replaced(w, t) == oracle);
      REQUIRE(occupancy_all_replaced_recurrence(w, t) == doctest::Approx(to_double(oracle)).epsilon(1e-12));
    }
}

TEST_CASE("kl bound") {
  REQUIRE(kl_bound(2, 2).has_value());
  CHECK(*kl_bound(2, 2) == doctest::Approx(1.0));
  CHECK_FALSE(kl_bound(2, 1).has_value());
  CHECK(*kl_bound(4, 40) < 0.001);
  CHECK(*kl_bound(4, 40) > 0.0);
  CHECK(*kl_bound(3, 3) == doctest::Approx(std::log2(4.5)));
  // exact and recurrence branches meet at w = 64
  for (std::uint64_t t : {64u, 200u, 500u, 2000u}) {
    const double exact = *kl_bound(64, t);
    const double rec = -std::log2(occupancy_all_replaced_recurrence(64, t));
    CHECK(exact == doctest::Approx(rec).epsilon(1e-9));
  }
  CHECK(kl_bound(65, 1000).has_value());
  CHECK(*kl_bound(65, 1000) > 0.0);
}

TEST_CASE("asymptotic bound") {
  CHECK(kl_bound_asymptotic(4, 8) == doctest::Approx(4 * std::exp(-2.0)));
  CHECK(kl_bound_asymptotic(4, 8) == doctest::Approx(0.5413).epsilon(1e-4));
  const double w = 32;
  CHECK(kl_bound_asymptotic(w, w * std::log(w)) == doctest::Approx(1.0));
  for (int b = 0; b < 4; ++b)
    CHECK(kl_bound_asymptotic(w, w * std::log(w) + b * w) == doctest::Approx(std::exp(-b)));
}

TEST_CASE("expected count") {
  CHECK(expected_count_exact(2, 0.5, 1, 1) == doctest::Approx(1.5));
  // the single step from (2,0): arrivals 0/1 half each, eviction always letter 0
  const auto law = exact_isw_law(IswState(std::vector<std::uint32_t>{2, 0}), {Rational(1, 2), Rational(1, 2)}, 1);
  Rational mean = 0;
  for (const auto& [counts, prob] : law) mean += prob * counts[0];
  CHECK(mean == Rational(3, 2));
  CHECK(expected_count_exact(10, 0.3, 0.8, 0) == doctest::Approx(8.0));
  CHECK(expected_count_exact(10, 0.3, 0.8, 100000) == doctest::Approx(3.0));
}

TEST_CASE("expected count matches the chain mean") {
  CompositionIndex idx(2, 5);
  const auto M = build_transition_matrix(idx, vecq({Rational(3, 10), Rational(7, 10)}));
  Vector<Rational> law = point_mass<Rational>(idx, comp({5, 0}));
  for (std::uint64_t t = 0; t <= 30; ++t) {
    Rational mean = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) mean += law(static_cast<Eigen::Index>(s)) * idx.state(s)[0];
    REQUIRE(to_double(mean) == doctest::Approx(expected_count_exact(5, 0.3, 1.0, t)).epsilon(1e-12));
    law = advance(M, law);
  }
}

TEST_CASE("Monte Carlo") {
  SUBCASE("one trial is a point mass") {
    const auto snap = monte_carlo_frequencies(2, 4, {0.5, 0.5}, 20, 1, 9);
    CHECK(snap.histogram.size() == 1);
    CHECK(snap.probability(snap.histogram.begin()->first) == 1.0);
  }
  SUBCASE("mean count within three standard errors") {
    const std::vector<std::uint64_t> at{200};
    const auto snap = monte_carlo_frequencies({0.5, 0.5}, IswState(2, 4), at, 100000, 11)[0];
    const double expected = expected_count_exact(4, 0.5, 0.5, 200);
    CHECK(std::abs(snap.mean_counts[0] - expected) < 3 * snap.standard_errors[0]);
  }
  SUBCASE("empirical law close to the exact chain") {
    CompositionIndex idx(2, 3);
    const Vector<double> p = vecd({0.5, 0.5});
    const Vector<double> exact =
        evolve_distribution(build_transition_matrix(idx, p), point_mass<double>(idx, comp({2, 1})), 10);
    const std::vector<std::uint64_t> at{10};
    const auto snap = monte_carlo_frequencies({0.5, 0.5}, IswState(2, 3), at, 100000, 12)[0];
    Vector<double> empirical(exact.size());
    for (std::size_t s = 0; s < idx.size(); ++s) empirical(static_cast<Eigen::Index>(s)) = snap.probability(idx.state(s));
    CHECK(total_variation(exact, empirical) < 0.02);
  }
  SUBCASE("same seed, same result") {
    const std::vector<std::uint64_t> at{5, 50};
    const auto a = monte_carlo_frequencies({0.2, 0.8}, IswState(2, 6), at, 500, 3);
    const auto b = monte_carlo_frequencies({0.2, 0.8}, IswState(2, 6), at, 500, 3);
    CHECK(a[1].histogram == b[1].histogram);
  }
  SUBCASE("multinomial start") {
    const std::vector<double> q{0.9, 0.1};
    const std::vector<std::uint64_t> at{0};
    const auto snap = monte_carlo_frequencies({0.5, 0.5}, IswState(2, 10), at, 100000, 4, &q)[0];
    CHECK(std::abs(snap.mean_counts[0] - 9.0) < 3 * snap.standard_errors[0] + 1e-12);
  }
}

TEST_CASE("conditioned on full renewal the box law is multinomial") {
  const std::vector<Rational> p{Rational(1, 3), Rational(2, 3)};
  const auto law = exact_swrre_law(SwrreBoxes(2, {0, 0, 1}), p, 5);
  const auto given = law.counts_given_all_replaced();
  const Vector<Rational> pv = vecq({p[0], p[1]});
  Rational total = 0;
  for (const auto& [counts, prob] : given) {
    CHECK(prob == multinomial_pmf<Rational>(3, pv, counts));
    total += prob;
  }
  CHECK(total == 1);
}

TEST_CASE("exact ISW law equals the chain law") {
  const std::vector<Rational> p{Rational(1, 4), Rational(1, 4), Rational(1, 2)};
  CompositionIndex idx(3, 3);
  const auto M = build_transition_matrix(idx, vecq({p[0], p[1], p[2]}));
  const IswState start(std::vector<std::uint32_t>{2, 0, 1});
  const auto chain = evolve_distribution(M, point_mass<Rational>(idx, start.counts()), 4);
  CHECK(to_count_law(idx, chain) == exact_isw_law(start, p, 4));
}
