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
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "isw/analysis.hpp"
#include "isw/cli.hpp"
#include "isw/verify.hpp"

using namespace isw;
namespace fs = std::filesystem;

namespace {

// Off by one at the interval boundary: first j with z <= Q_{j+1}.
Symbol select_off_by_one(const IswState& state, std::uint64_t z) {
  std::uint64_t q = 0;
  for (Symbol j = 0; j < state.alphabet_size(); ++j) {
    q += state.count(j);
    if (z <= q) return j;
  }
  return state.alphabet_size() - 1;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("isw_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("probability lists") {
  CHECK(parse_probabilities("0.3,0.7") == std::vector<double>{0.3, 0.7});
  CHECK(parse_probabilities("1") == std::vector<double>{1.0});
  CHECK_THROWS(parse_probabilities("0.3,x"));
  CHECK_THROWS(parse_probabilities("0.3,,0.7"));
}

TEST_CASE("geometric checkpoints") {
  const auto c = geometric_checkpoints(100);
  CHECK(c.front() == 0);
  CHECK(c.back() == 100);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
  CHECK(c.size() < 30);
}

TEST_CASE("simulate, exact chain, fair coin") {
  RunSpec spec;
  spec.m = 2;
  spec.w = 8;
  spec.p = {0.5, 0.5};
  spec.checkpoints.resize(161);
  for (std::uint64_t t = 0; t <= 160; ++t) spec.checkpoints[t] = t;
  const auto rows = simulate(spec);
  REQUIRE(rows.size() == 161);
  for (const auto& r : rows) {
    REQUIRE(r.exact);
    if (r.t >= 8) {
      REQUIRE(!std::isnan(r.kl_bound_bits));
      CHECK(r.r_bits <= r.kl_bound_bits);
    } else {
      CHECK(std::isnan(r.kl_bound_bits));
    }
  }
  // balanced start at w = 8: still the trend is down to zero
  CHECK(rows[160].r_bits < 1e-6);
  CHECK(rows[160].r_bits < rows[40].r_bits);
  CHECK(rows[40].r_bits < rows[8].r_bits);
  CHECK(rows[160].mean_counts[0] == doctest::Approx(4.0));
}

TEST_CASE("simulate from the far corner decreases monotonically") {
  RunSpec spec;
  spec.p = {0.5, 0.5};
  spec.w = 8;
  spec.regime_change = {1.0, 0.0};
  const auto rows = simulate(spec);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::isinf(rows[i - 1].r_bits)) continue;
    CHECK(rows[i].r_bits <= rows[i - 1].r_bits + 1e-15);
  }
  CHECK(std::isinf(rows.front().r_bits));
  CHECK(rows.front().tv_to_limit == doctest::Approx(1 - 1.0 / 256));
}

TEST_CASE("bound column near the memory horizon") {
  RunSpec spec;
  spec.m = 2;
  spec.w = 16;
  const double w = 16;
  for (int b = 0; b <= 3; ++b) spec.checkpoints.push_back(std::llround(w * std::log(w) + b * w));
  const auto rows = simulate(spec);
  REQUIRE(rows.size() == 4);
  for (int b = 0; b <= 3; ++b) {
    const double nats = rows[b].kl_bound_bits * std::log(2.0);
    CHECK(nats > std::exp(-b) / 2);
    CHECK(nats < std::exp(-b) * 2);
  }
}

TEST_CASE("simulate parameter errors") {
  RunSpec spec;
  spec.m = 256;
  spec.w = 100;
  CHECK_THROWS_AS(simulate(spec), std::invalid_argument);
  std::ostringstream out, err;
  CHECK(run_simulate(spec, out, err) != 0);
  CHECK(err.str().find("--trials") != std::string::npos);

  RunSpec mismatched;
  mismatched.m = 3;
  mismatched.p = {0.5, 0.5};
  CHECK_THROWS(simulate(mismatched));
  RunSpec bad_sum;
  bad_sum.p = {0.5, 0.6};
  CHECK_THROWS(simulate(bad_sum));
  RunSpec order;
  order.mu = 1;
  CHECK_THROWS(simulate(order));
  RunSpec long_run;
  long_run.t_max = kMaxSimulationSteps + 1;
  CHECK_THROWS(simulate(long_run));
}

TEST_CASE("Monte Carlo simulate is reproducible") {
  RunSpec spec;
  spec.m = 256;
  spec.w = 64;
  spec.trials = 200;
  spec.seed = 5;
  spec.t_max = 300;
  std::ostringstream a, b, err;
  REQUIRE(run_simulate(spec, a, err) == 0);
  REQUIRE(run_simulate(spec, b, err) == 0);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(std::string(kSimulationCsvHeader) + "\n", 0) == 0);
  CHECK(a.str().find(",mc,") != std::string::npos);
  const auto rows = simulate(spec);
  CHECK(std::isnan(rows.back().r_bits));
  CHECK(rows.back().mean_counts.size() == 256);
}

TEST_CASE("CSV has one row per checkpoint") {
  RunSpec spec;
  spec.w = 4;
  spec.checkpoints = {0, 4, 40};
  std::ostringstream out, err;
  REQUIRE(run_simulate(spec, out, err) == 0);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  REQUIRE(all.size() == 4);
  CHECK(all[1].rfind("0,exact,", 0) == 0);
  CHECK(all[3].rfind("40,exact,", 0) == 0);
}

TEST_CASE("verify selects families") {
  RunSpec spec;
  spec.only = "theorem1";
  std::ostringstream out;
  CHECK(run_verify(spec, out) == 0);
  CHECK(out.str().rfind("PASS theorem1", 0) == 0);
  CHECK(out.str().find('\n') == out.str().size() - 1);

  spec.only = "no-such-family";
  std::ostringstream bad;
  CHECK(run_verify(spec, bad) != 0);
}

TEST_CASE("an off-by-one selector fails the equivalence check") {
  RunSpec spec;
  spec.only = "swrre";
  std::ostringstream out;
  CHECK(run_verify(spec, out, select_off_by_one) != 0);
  CHECK(out.str().find("FAIL swrre") != std::string::npos);

  std::ostringstream good;
  CHECK(run_verify(spec, good) == 0);
}

TEST_CASE("compress and decompress files") {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::vector<std::uint8_t> text;
  for (int i = 0; i < 20000; ++i) text.push_back(static_cast<std::uint8_t>('a' + rng() % 7));
  write_bytes(dir.file("text"), text);
  write_bytes(dir.file("empty"), {});
  write_bytes(dir.file("one"), {0x5A});

  for (const char* name : {"text", "empty", "one"})
    for (std::size_t m : {256u, 2u})
      for (std::size_t mu : {0u, 2u})
        for (RngMode mode : {RngMode::seeded_prng, RngMode::self_feed}) {
          RunSpec c;
          c.in = dir.file(name);
          c.out = dir.file("packed");
          c.m = m;
          c.mu = mu;
          c.w = 256;
          c.rng_mode = mode;
          c.seed = 3;
          std::ostringstream out, err;
          REQUIRE(run_compress(c, out, err) == 0);
          CHECK(out.str().find("bits/symbol") != std::string::npos);
          RunSpec d;
          d.in = dir.file("packed");
          d.out = dir.file("unpacked");
          REQUIRE(run_decompress(d, out, err) == 0);
          REQUIRE(read_bytes(dir.file("unpacked")) == read_bytes(dir.file(name)));
        }
}

TEST_CASE("all-zero file compresses below half a bit per symbol") {
  TempDir dir;
  write_bytes(dir.file("zeros"), std::vector<std::uint8_t>(100000, 0));
  RunSpec c;
  c.in = dir.file("zeros");
  c.out = dir.file("packed");
  c.m = 256;
  c.w = 4096;
  std::ostringstream out, err;
  REQUIRE(run_compress(c, out, err) == 0);
  const double rate = 8.0 * fs::file_size(dir.file("packed")) / 100000.0;
  CHECK(rate < 0.5);
}

TEST_CASE("decompress errors") {
  TempDir dir;
  std::vector<std::uint8_t> data(5000);
  std::mt19937_64 rng(2);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng() % 3);
  write_bytes(dir.file("data"), data);
  RunSpec c;
  c.in = dir.file("data");
  c.out = dir.file("packed");
  std::ostringstream out, err;
  REQUIRE(run_compress(c, out, err) == 0);
  auto packed = read_bytes(dir.file("packed"));
  packed.resize(packed.size() - 5);
  write_bytes(dir.file("cut"), packed);

  RunSpec d;
  d.in = dir.file("cut");
  d.out = dir.file("unpacked");
  CHECK(run_decompress(d, out, err) != 0);
  CHECK(err.str().find("truncated") != std::string::npos);

  d.in = dir.file("missing");
  CHECK(run_decompress(d, out, err) != 0);

  RunSpec bad_m;
  bad_m.in = dir.file("data");
  bad_m.out = dir.file("x");
  bad_m.m = 16;
  CHECK(run_compress(bad_m, out, err) == 2);
}
