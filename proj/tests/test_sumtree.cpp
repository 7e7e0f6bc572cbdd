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

#include <random>
#include <vector>

#include "doctest.h"
#include "isw/sumtree.hpp"

using namespace isw;

namespace {

std::vector<std::uint32_t> vec(std::span<const std::uint32_t> s) { return {s.begin(), s.end()}; }

// every composition of w into m parts
void compositions(std::size_t m, std::uint32_t w, std::vector<std::uint32_t>& prefix,
                  std::vector<std::vector<std::uint32_t>>& out) {
  if (prefix.size() + 1 == m) {
    prefix.push_back(w);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::uint32_t c = 0; c <= w; ++c) {
    prefix.push_back(c);
    compositions(m, w - c, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

TEST_CASE("build pairs up sums") {
  const std::vector<std::uint32_t> a{1, 0, 3, 0};
  SumTree t(a);
  CHECK(vec(t.level(2)) == std::vector<std::uint32_t>{1, 3});
  CHECK(t.total() == 4);
  CHECK(t.level_count() == 3);

  const std::vector<std::uint32_t> b{2, 2, 2, 2};
  SumTree u(b);
  CHECK(vec(u.level(2)) == std::vector<std::uint32_t>{4, 4});
  CHECK(u.total() == 8);

  const std::vector<std::uint32_t> c{1, 2, 3};
  SumTree v(c);
  CHECK(vec(v.level(1)) == std::vector<std::uint32_t>{1, 2, 3, 0});
  CHECK(vec(v.level(2)) == std::vector<std::uint32_t>{3, 3});
  CHECK(v.total() == 6);
  CHECK(v.leaf_capacity() == 4);
  CHECK(vec(v.leaves()) == c);
}

TEST_CASE("select on the tree") {
  const std::vector<std::uint32_t> a{1, 0, 3, 0};
  SumTree t(a);
  CHECK(t.select(0) == 0);
  CHECK(t.select(3) == 2);
  CHECK(t.prefix_sum(2) == 1);
  CHECK(t.prefix_sum(4) == 4);
}

TEST_CASE("tree select equals naive select, m = 4, w = 6") {
  std::vector<std::vector<std::uint32_t>> all;
  std::vector<std::uint32_t> prefix;
  compositions(4, 6, prefix, all);
  REQUIRE(all.size() == 84);
  for (const auto& counts : all) {
    const SumTree tree(counts);
    const IswState state(counts);
    for (std::uint64_t z = 0; z < 6; ++z) REQUIRE(tree.select(z) == select_naive(state, z));
  }
}

TEST_CASE("weighted select matches the add-half intervals") {
  const std::vector<std::uint32_t> counts{3, 0, 1, 4, 0};
  const SumTree tree(counts);
  std::uint64_t low = 0;
  for (Symbol a = 0; a < counts.size(); ++a) {
    const std::uint64_t width = 2 * counts[a] + 1;
    for (std::uint64_t z = low; z < low + width; ++z) REQUIRE(tree.select_weighted(z, 2, 1) == a);
    low += width;
  }
  CHECK(low == 2 * 8 + 5);
}

TEST_CASE("path updates") {
  const std::vector<std::uint32_t> a{1, 0, 3, 0};
  SumTree t(a);
  const SumTree original = t;
  t.update(2, -1);
  CHECK(vec(t.leaves()) == std::vector<std::uint32_t>{1, 0, 2, 0});
  CHECK(vec(t.level(2)) == std::vector<std::uint32_t>{1, 2});
  CHECK(t.total() == 3);
  t.update(2, +1);
  CHECK(t == original);
  CHECK_THROWS(t.update(1, -1));
}

TEST_CASE("an update touches one node per level") {
  std::vector<std::uint32_t> counts(256, 4);
  SumTree t(counts);
  t.reset_touch_counter();
  t.update(17, +1);
  CHECK(t.touched_nodes() == 9);
  t.reset_touch_counter();
  t.select(100);
  CHECK(t.touched_nodes() <= 9);
}

TEST_CASE("fast step") {
  SUBCASE("mirrors the core example") {
    const std::vector<std::uint32_t> a{2, 2};
    SumTree t(a);
    TableBitSource bits(std::vector<bool>{true, true});
    CHECK(isw_step_fast(t, 0, bits) == 1);
    CHECK(vec(t.leaves()) == std::vector<std::uint32_t>{3, 1});
  }
  SUBCASE("evicting the arriving letter leaves the tree unchanged") {
    const std::vector<std::uint32_t> a{3, 1, 2, 0};
    SumTree t(a);
    const SumTree before = t;
    TableBitSource bits(std::vector<bool>{false, true, false});  // z = 2 -> letter 0
    CHECK(isw_step_fast(t, 0, bits) == 0);
    CHECK(t == before);
  }
}

TEST_CASE("fast step replays the reference step") {
  std::mt19937_64 letters(99);
  IswState reference(16, 64);
  SumTree tree(reference);
  SeededBitSource bits_a(5), bits_b(5);
  const std::uint64_t bound = 3 * (ceil_log2(16) + 1);
  for (int step = 0; step < 10000; ++step) {
    const Symbol a = letters() % 16;
    const Symbol e1 = isw_step(reference, a, bits_a);
    tree.reset_touch_counter();
    const Symbol e2 = isw_step_fast(tree, a, bits_b);
    REQUIRE(e1 == e2);
    REQUIRE(tree.touched_nodes() <= bound);
  }
  CHECK(vec(tree.leaves()) == vec(reference.counts()));
}
