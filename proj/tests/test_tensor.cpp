#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "norden/errors.hpp"
#include "norden/tensor.hpp"
#include "support/oracles.hpp"

using namespace norden;

namespace {

constexpr Variance U = Variance::upper;
constexpr Variance D = Variance::lower;

// Flat Norden pair of dim 2n: g = diag(1.., -1..), J e_i = e_{n+i}.
MetricPair flat_pair(int n) {
  const int d = 2 * n;
  Tensor g = zeros(d, {D, D});
  Tensor J = zeros(d, {U, D});
  for (int i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    g(n + i, n + i) = -1.0;
    J(n + i, i) = 1.0;
    J(i, n + i) = -1.0;
  }
  return MetricPair::build(g, J);
}

// A non-diagonal Norden pair: the flat pair pulled back through a constant
// linear map A, J = A^-1 J0 A, g = A^T g0 A.
MetricPair skewed_pair() {
  const MetricPair f = flat_pair(2);
  const int d = 4;
  Tensor A = zeros(d, {U, D});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = (i == j ? 1.2 : 0.0) + 0.4 * f.J(i, j);
  A(0, 1) += 0.3;
  const auto inv = invert_matrix(A.components(), d);
  Tensor Ainv = zeros(d, {U, D});
  Ainv.components() = inv.inverse;
  Tensor J = zeros(d, {U, D});
  Tensor g = zeros(d, {D, D});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double jv = 0.0, gv = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          jv += Ainv(i, a) * f.J(a, b) * A(b, j);
          gv += A(a, i) * f.g(a, b) * A(b, j);
        }
      J(i, j) = jv;
      g(i, j) = gv;
    }
  return MetricPair::build(g, J);
}

Tensor random_symmetric(int d, std::mt19937_64& rng) {
  Tensor s = oracle::random_tensor(d, {D, D}, rng);
  Tensor t = s;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t(i, j) = s(i, j) + s(j, i);
  return t;
}

}  // namespace

TEST_CASE("contraction matches naive loops on random tensors") {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 5;
    const Tensor t = oracle::random_tensor(d, {U, D, D, D}, rng);
    worst = std::max(worst, max_abs_diff(contract(t, 0, 2), oracle::naive_trace_0_2(t)));
  }
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 5;
    const Tensor t = oracle::random_tensor(d, {D, D, D}, rng);
    const Tensor s = oracle::random_tensor(d, {U, D}, rng);
    worst = std::max(worst, max_abs_diff(contract(outer(t, s), 2, 3), oracle::naive_chain(t, s)));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("contraction rejects bad slots") {
  const Tensor t = zeros(3, {D, D});
  CHECK_THROWS_AS(contract(t, 0, 1), ArgumentError);
  CHECK_THROWS_AS(contract(zeros(3, {U, D}), 0, 0), ArgumentError);
  CHECK_THROWS_AS(contract(zeros(3, {U, D}), 0, 2), ArgumentError);
}

TEST_CASE("permute_slots and outer") {
  std::mt19937_64 rng(3);
  const Tensor t = oracle::random_tensor(3, {U, D, D}, rng);
  const Tensor p = permute_slots(t, {2, 0, 1});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) CHECK(p(c, a, b) == t(a, b, c));
  CHECK(p.variance(1) == U);
  const Tensor x = oracle::random_tensor(3, {D}, rng);
  const Tensor o = outer(x, x);
  CHECK(o(1, 2) == x(1) * x(2));
}

TEST_CASE("matrix inversion and signature") {
  const std::vector<double> a{2, 1, 0, 1, 3, 1, 0, 1, 4};
  const auto inv = invert_matrix(a, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += a[static_cast<std::size_t>(i * 3 + k)] * inv.inverse[static_cast<std::size_t>(k * 3 + j)];
      CHECK(v == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  CHECK(inv.condition > 1.0);
  CHECK_THROWS_AS(invert_matrix({1, 2, 2, 4}, 2), ValidationError);
  CHECK_THROWS_AS(invert_matrix({1, 0, 0, 1e-12}, 2), ValidationError);
  CHECK(signature({1, 0, 0, 0, -2, 0, 0, 0, 3}, 3) == std::pair<int, int>{2, 1});
}

TEST_CASE("MetricPair validates the Norden axioms") {
  const MetricPair m = flat_pair(2);
  // g~ = g J is symmetric and also Norden
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m.g_tilde(i, j) == doctest::Approx(m.g_tilde(j, i)));
  Tensor bad = m.J;
  bad(0, 2) = -1.1;
  CHECK_THROWS_AS(MetricPair::build(m.g, bad), ValidationError);
  Tensor riem = zeros(4, {D, D});
  for (int i = 0; i < 4; ++i) riem(i, i) = 1.0;
  CHECK_THROWS_AS(MetricPair::build(riem, m.J), ValidationError);
  CHECK_NOTHROW(skewed_pair());
}

TEST_CASE("index moves are inverse to each other") {
  std::mt19937_64 rng(5);
  const MetricPair m = skewed_pair();
  const Tensor t = oracle::random_tensor(4, {D, D, D}, rng);
  const Tensor up = move_index(t, 1, IndexMove::raise, m);
  CHECK(up.variance(1) == U);
  CHECK(max_abs_diff(move_index(up, 1, IndexMove::lower, m), t) <= 1e-13);
  CHECK_THROWS_AS(move_index(t, 1, IndexMove::lower, m), ArgumentError);
}

TEST_CASE("Kulkarni-Nomizu products are curvature-like") {
  std::mt19937_64 rng(8);
  const MetricPair m = skewed_pair();
  const Tensor a = random_symmetric(4, rng);
  const Tensor b = random_symmetric(4, rng);
  CHECK(max_abs_diff(kulkarni_nomizu(a, b), kulkarni_nomizu(b, a)) <= 1e-14);
  CHECK(is_curvature_like(kulkarni_nomizu(a, b), 1e-12).holds);
  CHECK(is_curvature_like(psi2(a, m), 1e-12).holds == false);
  CHECK(is_curvature_like(pi1(m), 1e-12).holds);
  CHECK(is_curvature_like(pi2(m), 1e-12).holds);
  CHECK(is_curvature_like(pi3(m), 1e-12).holds);
  // pi1(X,Y,Z,W) = g(Y,Z)g(X,W) - g(X,Z)g(Y,W)
  const Tensor p = pi1(m);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        for (int w = 0; w < 4; ++w)
          CHECK(p(x, y, z, w) == doctest::Approx(m.g(y, z) * m.g(x, w) - m.g(x, z) * m.g(y, w)));
}

TEST_CASE("pi1 - pi2 is a Kaehler tensor") {
  const MetricPair m = skewed_pair();
  CHECK(is_kahler_tensor(pi1(m) - pi2(m), m, 1e-12).holds);
  CHECK(is_kahler_tensor(pi3(m), m, 1e-12).holds);
  CHECK(!is_kahler_tensor(pi1(m), m, 1e-12).holds);
}

TEST_CASE("Ricci contraction against loops") {
  std::mt19937_64 rng(9);
  const MetricPair m = skewed_pair();
  const Tensor l = kulkarni_nomizu(random_symmetric(4, rng), random_symmetric(4, rng));
  const RicciScalar rs = ricci_scalar(l, m);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      double v = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v += m.g_inv(i, j) * l(i, x, y, j);
      CHECK(rs.rho(x, y) == doctest::Approx(v));
    }
  double tau = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) tau += m.g_inv(i, j) * rs.rho(i, j);
  CHECK(rs.tau == doctest::Approx(tau));
}

TEST_CASE("Weyl part removes pure trace and is trace free") {
  std::mt19937_64 rng(12);
  for (int n : {2, 3}) {
    const MetricPair m = flat_pair(n);
    const int d = 2 * n;
    CHECK(max_abs(weyl(psi1(random_symmetric(d, rng), m), m)) <= 1e-12);
    Tensor r = zeros(d, {D, D, D, D});
    const Tensor a = random_symmetric(d, rng), b = random_symmetric(d, rng);
    r = kulkarni_nomizu(a, b) + pi2(m) + psi2(random_symmetric(d, rng), m);
    const Tensor w = weyl(r, m);
    CHECK(max_abs(ricci_scalar(w, m).rho) <= 1e-12);
  }
  CHECK_THROWS_AS(weyl(zeros(2, {D, D, D, D}), MetricPair{}), ArgumentError);
}

TEST_CASE("inner product and symmetry residual") {
  const MetricPair m = flat_pair(2);
  CHECK(inner_product(m.g, m.g, m) == doctest::Approx(4.0));
  CHECK(inner_product(m.g_tilde, m.g_tilde, m) == doctest::Approx(-4.0));
  Tensor s = zeros(4, {D, D});
  s(0, 1) = 1.0;
  CHECK(symmetry_residual(s) == 1.0);
  CHECK(describe_variance({U, D, D}) == "(1,2)");
}
