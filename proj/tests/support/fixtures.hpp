#pragma once

// Shared inputs for tests and the acceptance run.

#include <random>
#include <string>
#include <vector>

#include "norden/connections.hpp"
#include "norden/io.hpp"

namespace fixture {

inline norden::Chart data_chart(const std::string& file) {
  return norden::to_chart(norden::load_manifold_file(std::string(NORDEN_DATA_DIR) + "/" + file));
}

// Q^k_ij = c_kij + sum_a b_kija x_a, not symmetric in (i, j).
inline norden::ConnectionField::Rule random_offset(std::uint64_t seed, double scale = 1.0) {
  using norden::Jet;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5 * scale, 0.5 * scale);
  std::vector<double> c(6 * 6 * 6 * 7);
  for (auto& v : c) v = u(rng);
  return [c](const norden::PointFrame& f) {
    const int d = f.dim();
    const int order = f.field_order();
    norden::JetTensor q(d, {norden::Variance::upper, norden::Variance::lower, norden::Variance::lower},
                        Jet::constant(0.0, d, order));
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const std::size_t base = static_cast<std::size_t>(((k * 6 + i) * 6 + j) * 7);
          Jet v = Jet::constant(c[base], d, order);
          for (int a = 0; a < d; ++a)
            v += c[base + 1 + static_cast<std::size_t>(a)] *
                 Jet::coordinate(a, f.point()[static_cast<std::size_t>(a)], d, order);
          q(k, i, j) = v;
        }
    return q;
  };
}

inline norden::ConnectionField random_connection(std::uint64_t seed) {
  return norden::with_offset(norden::levi_civita_connection(), "random", random_offset(seed));
}

inline std::vector<norden::PointFrame> frames(const norden::Chart& c, int count, std::uint64_t seed = 42) {
  std::vector<norden::PointFrame> out;
  for (const auto& p : norden::sample_points(c, count, seed)) out.emplace_back(c, p, 2);
  return out;
}

}  // namespace fixture
