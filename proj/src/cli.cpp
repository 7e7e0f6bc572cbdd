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

#include "isw/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "isw/analysis.hpp"
#include "isw/verify.hpp"

namespace isw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string format(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += format(xs[i]);
  }
  return out;
}

struct Model {
  std::size_t m;
  std::vector<double> p;
};

Model resolve_model(const RunSpec& spec) {
  Model model;
  if (!spec.p.empty()) {
    if (spec.m && *spec.m != spec.p.size()) throw std::invalid_argument("--m disagrees with the length of --p");
    model.p = spec.p;
    model.m = spec.p.size();
  } else {
    model.m = spec.m.value_or(2);
    if (model.m < 2) throw std::invalid_argument("--m must be at least 2");
    model.p.assign(model.m, 1.0 / static_cast<double>(model.m));
  }
  if (model.m < 2) throw std::invalid_argument("need at least two letters");
  double sum = 0;
  for (double x : model.p) {
    if (!(x >= 0)) throw std::invalid_argument("probabilities must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
  if (!spec.regime_change.empty() && spec.regime_change.size() != model.m)
    throw std::invalid_argument("--regime-change must have m entries");
  return model;
}

}  // namespace

std::vector<double> parse_probabilities(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(x);
  }
  return out;
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t t_max) {
  std::vector<std::uint64_t> out{0};
  double x = 1;
  while (true) {
    const auto t = static_cast<std::uint64_t>(std::ceil(x - 1e-9));
    if (t >= t_max) break;
    if (t > out.back()) out.push_back(t);
    x *= 1.25;
  }
  if (t_max > out.back()) out.push_back(t_max);
  return out;
}

std::vector<SimulationRow> simulate(const RunSpec& spec) {
  const Model model = resolve_model(spec);
  if (spec.w < 1) throw std::invalid_argument("--w must be at least 1");
  if (spec.mu != 0) throw std::invalid_argument("simulate models a memoryless source; --mu must be 0");
  const std::uint64_t t_max = spec.t_max.value_or(20ull * spec.w);
  if (t_max > kMaxSimulationSteps) throw std::invalid_argument("--t-max above the step cap");

  std::vector<std::uint64_t> checkpoints = spec.checkpoints.empty() ? geometric_checkpoints(t_max) : spec.checkpoints;
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] <= checkpoints[i - 1]) throw std::invalid_argument("checkpoints must be strictly increasing");
  if (!checkpoints.empty() && checkpoints.back() > kMaxSimulationSteps)
    throw std::invalid_argument("checkpoint above the step cap");

  const std::size_t m = model.m;
  const std::uint32_t w = spec.w;
  const std::size_t cap = default_state_cap();
  const bool exact = composition_count(m, w) <= cap;
  if (!exact && spec.trials == 0)
    throw std::invalid_argument("state space exceeds the exact-chain cap; pass --trials for Monte Carlo");

  const Vector<double> p = Eigen::Map<const Vector<double>>(model.p.data(), static_cast<Eigen::Index>(m));
  const IswState start(m, w);

  std::vector<SimulationRow> rows;
  auto fill_common = [&](SimulationRow& row) {
    row.kl_bound_bits = kl_bound(w, row.t).value_or(kNaN);
    row.lambda_nats = kl_bound_asymptotic(w, static_cast<double>(row.t));
  };

  if (exact) {
    const CompositionIndex index(m, w, cap);
    const auto matrix = build_transition_matrix(index, p);
    const Vector<double> limit = multinomial_distribution(index, p);
    Vector<double> law;
    if (spec.regime_change.empty()) {
      law = point_mass<double>(index, start.counts());
    } else {
      const Vector<double> q =
          Eigen::Map<const Vector<double>>(spec.regime_change.data(), static_cast<Eigen::Index>(m));
      law = multinomial_distribution(index, q);
    }
    std::uint64_t t = 0;
    for (std::uint64_t target : checkpoints) {
      for (; t < target; ++t) law = advance(matrix, law);
      SimulationRow row;
      row.t = target;
      row.exact = true;
      row.tv_to_limit = total_variation(limit, law);
      try {
        row.r_bits = kl_divergence(limit, law);
      } catch (const InfiniteDivergence&) {
        row.r_bits = std::numeric_limits<double>::infinity();
      }
      row.mean_counts.assign(m, 0.0);
      for (std::size_t s = 0; s < index.size(); ++s) {
        const auto sigma = index.state(s);
        for (std::size_t i = 0; i < m; ++i) row.mean_counts[i] += law(static_cast<Eigen::Index>(s)) * sigma[i];
      }
      row.mean_stderr.assign(m, 0.0);
      fill_common(row);
      rows.push_back(std::move(row));
    }
    return rows;
  }

  const auto snaps = monte_carlo_frequencies(model.p, start, checkpoints, spec.trials, spec.seed,
                                             spec.regime_change.empty() ? nullptr : &spec.regime_change);
  for (const auto& snap : snaps) {
    SimulationRow row;
    row.t = snap.t;
    row.exact = false;
    double observed_limit = 0;
    double distance = 0;
    for (const auto& [composition, hits] : snap.histogram) {
      const double ref = multinomial_pmf<double>(w, p, composition);
      observed_limit += ref;
      distance += std::abs(static_cast<double>(hits) / static_cast<double>(snap.trials) - ref);
    }
    row.tv_to_limit = (distance + std::max(0.0, 1.0 - observed_limit)) / 2;
    row.r_bits = kNaN;
    row.mean_counts = snap.mean_counts;
    row.mean_stderr = snap.standard_errors;
    fill_common(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows) {
  out << kSimulationCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << (r.exact ? "exact" : "mc") << ',' << format(r.tv_to_limit) << ',' << format(r.r_bits) << ','
        << format(r.kl_bound_bits) << ',' << format(r.lambda_nats) << ',' << join(r.mean_counts) << ','
        << join(r.mean_stderr) << '\n';
  }
}

int run_simulate(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  std::vector<SimulationRow> rows;
  try {
    rows = simulate(spec);
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << '\n';
    return 2;
  }
  if (spec.out.empty()) {
    write_simulation_csv(out, rows);
    return 0;
  }
  std::ofstream file(spec.out);
  if (!file) {
    err << "simulate: cannot open " << spec.out << '\n';
    return 1;
  }
  write_simulation_csv(file, rows);
  return file ? 0 : 1;
}

int run_verify(const RunSpec& spec, std::ostream& out, const Selector& selector) {
  VerifyOptions options;
  options.only = spec.only;
  options.selector = selector;
  std::vector<CheckResult> results;
  try {
    results = run_checks(options);
  } catch (const std::invalid_argument& e) {
    out << "verify: " << e.what() << '\n';
    return 2;
  }
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.family << " (" << std::fixed << std::setprecision(2) << r.seconds
        << std::defaultfloat << " s): " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

int run_compress(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    const std::size_t m = spec.m.value_or(256);
    if (m != 256 && m != 2) throw std::invalid_argument("--m must be 256 (bytes) or 2 (bits)");
    const auto input = read_file(spec.in);
    std::vector<Symbol> symbols;
    if (m == 256) {
      symbols.assign(input.begin(), input.end());
    } else {
      symbols.reserve(input.size() * 8);
      for (std::uint8_t b : input)
        for (int i = 7; i >= 0; --i) symbols.push_back((b >> i) & 1u);
    }
    CoderConfig config{.m = m, .order = spec.mu, .w = spec.w, .rng_mode = spec.rng_mode, .seed = spec.seed};
    const auto stream = encode(symbols, config);
    write_file(spec.out, stream);
    const double rate = symbols.empty() ? 0.0 : 8.0 * static_cast<double>(stream.size()) / symbols.size();
    out << input.size() << " bytes -> " << stream.size() << " bytes, " << format(rate) << " bits/symbol\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "compress: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "compress: " << e.what() << '\n';
    return 1;
  }
}

int run_decompress(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    const auto stream = read_file(spec.in);
    std::size_t header_size = 0;
    const StreamHeader header = StreamHeader::parse(stream, header_size);
    const auto symbols = decode(stream);
    std::vector<std::uint8_t> bytes;
    if (header.config.m == 256) {
      bytes.assign(symbols.begin(), symbols.end());
    } else if (header.config.m == 2) {
      if (symbols.size() % 8) throw CorruptStream("bit stream length is not a whole number of bytes");
      bytes.resize(symbols.size() / 8, 0);
      for (std::size_t i = 0; i < symbols.size(); ++i)
        bytes[i / 8] = static_cast<std::uint8_t>(bytes[i / 8] | (symbols[i] << (7 - i % 8)));
    } else {
      throw std::runtime_error("stream alphabet of " + std::to_string(header.config.m) + " letters has no file form");
    }
    write_file(spec.out, bytes);
    const double rate = symbols.empty() ? 0.0 : 8.0 * static_cast<double>(stream.size()) / symbols.size();
    out << stream.size() << " bytes -> " << bytes.size() << " bytes, " << format(rate) << " bits/symbol\n";
    return 0;
  } catch (const std::exception& e) {
    err << "decompress: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace isw
