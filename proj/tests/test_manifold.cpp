#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "norden/errors.hpp"
#include "norden/io.hpp"
#include "norden/manifold.hpp"
#include "support/oracles.hpp"

using namespace norden;

namespace {

Chart data_chart(const char* file) { return to_chart(load_manifold_file(std::string(NORDEN_DATA_DIR) + "/" + file)); }

std::vector<double> metric_values(const Chart& c, const std::vector<double>& p) {
  std::vector<double> g(static_cast<std::size_t>(c.dim() * c.dim()));
  for (int i = 0; i < c.dim(); ++i)
    for (int j = 0; j < c.dim(); ++j) g[static_cast<std::size_t>(i * c.dim() + j)] = c.g(i, j).eval(p);
  return g;
}

// Gamma values at p shifted along coordinate a by s*h.
Tensor gamma_at(const Chart& c, std::vector<double> p, int a, double s, double h) {
  p[static_cast<std::size_t>(a)] += s * h;
  return values(levi_civita(c, p, Which::g, 0));
}

}  // namespace

TEST_CASE("chart construction rejects malformed input") {
  const std::vector<std::array<double, 2>> box(4, {-0.5, 0.5});
  const std::vector<std::string> g{"1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "-1", "0", "0", "0", "0", "-1"};
  const std::vector<std::string> J{"0", "0", "-1", "0", "0", "0", "0", "-1", "1", "0", "0", "0", "0", "1", "0", "0"};
  CHECK_NOTHROW(chart_from_strings("ok", 2, box, g, J));
  CHECK_THROWS_AS(chart_from_strings("short", 2, box, std::vector<std::string>(g.begin(), g.end() - 1), J),
                  ArgumentError);
  CHECK_THROWS_AS(chart_from_strings("box", 2, {{0, 1}, {0, 1}, {0, 1}}, g, J), ArgumentError);
  CHECK_THROWS_AS(chart_from_strings("empty", 2, {{0, 1}, {0, 1}, {0, 1}, {1, 1}}, g, J), ArgumentError);
  CHECK_THROWS_AS(chart_from_strings("x9", 2, box, g, std::vector<std::string>(16, "x9")), ParseError);
}

TEST_CASE("builtin charts") {
  const Chart f = flat_kahler(3);
  CHECK(f.name() == "flat-kahler-6");
  CHECK(f.dim() == 6);
  CHECK(f.J(3, 0).source() == "1");
  CHECK(f.J(0, 3).source() == "-1");
  const Chart c = conformal_flat(2, "x1*x2");
  CHECK(c.g(0, 0).source() == "exp(2*(x1*x2))");
  CHECK(c.g(3, 3).source() == "-exp(2*(x1*x2))");
}

TEST_CASE("sampling is deterministic and inside the box") {
  const Chart c = conformal_flat(3, "x1");
  const auto a = sample_points(c, 16, 42);
  const auto b = sample_points(c, 16, 42);
  const auto other = sample_points(c, 16, 43);
  CHECK(a == b);
  CHECK(a != other);
  CHECK(a.size() == 16);
  for (const auto& p : a) CHECK(c.contains(p));
  CHECK_THROWS_AS(sample_points(c, 0, 1), ArgumentError);
}

TEST_CASE("jet inverse satisfies g g^-1 = I to second order") {
  const Chart c = data_chart("twisted_4.json");
  const std::vector<double> p{0.1, -0.2, 0.3, 0.25};
  const JetMetricPair m = metric_pair_at(c, p, 2);
  for (Which w : {Which::g, Which::g_tilde})
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Jet s = Jet::constant(i == j ? -1.0 : 0.0, 4, 2);
        for (int k = 0; k < 4; ++k) s += m.metric(w)(i, k) * m.inverse(w)(k, j);
        CHECK(std::abs(s.value()) <= 1e-14);
        for (int a = 0; a < 4; ++a) {
          CHECK(std::abs(s.grad(a)) <= 1e-13);
          for (int b = 0; b < 4; ++b) CHECK(std::abs(s.hess(a, b)) <= 1e-12);
        }
      }
}

TEST_CASE("metric_pair_at rejects charts that are not Norden") {
  const std::vector<std::array<double, 2>> box(4, {-0.5, 0.5});
  std::vector<std::string> g{"1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "-1", "0", "0", "0", "0", "-1"};
  std::vector<std::string> J{"0", "0", "-1", "0", "0", "0", "0", "-1", "1", "0", "0", "0", "0", "1", "0", "0"};
  J[8] = "1.1";
  const Chart bad = chart_from_strings("bad", 2, box, g, J);
  CHECK_THROWS_AS(metric_pair_at(bad, std::vector<double>(4, 0.0), 1), ValidationError);
  g[15] = "1";
  J[8] = "1";
  CHECK_THROWS_AS(metric_pair_at(chart_from_strings("riem", 2, box, g, J), std::vector<double>(4, 0.0), 1),
                  ValidationError);
}

TEST_CASE("Christoffel symbols against finite differences of g") {
  for (const char* file : {"conformal_4.json", "twisted_4.json", "conformal_6.json"}) {
    const Chart c = data_chart(file);
    for (const auto& p : sample_points(c, 4, 7)) {
      const Tensor gamma = values(levi_civita(c, p, Which::g, 0));
      const auto fd = oracle::fd_christoffel([&](const std::vector<double>& q) { return metric_values(c, q); }, p,
                                             c.dim());
      for (std::size_t k = 0; k < fd.size(); ++k) CHECK(oracle::rel_err(gamma.flat(k), fd[k]) <= 1e-6);
    }
  }
}

TEST_CASE("curvature against differences of jet Christoffel symbols") {
  const Chart c = data_chart("twisted_4.json");
  const int d = c.dim();
  const double h = 1e-5;
  for (const auto& p : sample_points(c, 3, 5)) {
    const Tensor r = curvature_from_coefficients(levi_civita(c, p, Which::g, 1));
    const Tensor G = gamma_at(c, p, 0, 0.0, h);
    std::vector<Tensor> dG;
    for (int a = 0; a < d; ++a) dG.push_back((1.0 / (2 * h)) * (gamma_at(c, p, a, 1, h) - gamma_at(c, p, a, -1, h)));
    // R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            double v = dG[static_cast<std::size_t>(i)](l, j, k) - dG[static_cast<std::size_t>(j)](l, i, k);
            for (int m = 0; m < d; ++m) v += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
            CHECK(std::abs(r(i, j, k, l) - v) <= 1e-7);
          }
  }
}

TEST_CASE("flat Kaehler structure vanishes identically") {
  for (int n : {2, 3}) {
    const Chart c = flat_kahler(n);
    for (const auto& p : sample_points(c, 8, 42)) {
      const PointFrame f(c, p, 2);
      CHECK(max_abs(values(f.F())) <= 1e-12);
      CHECK(max_abs(values(f.theta())) <= 1e-12);
      CHECK(max_abs(curvature_R0(f)) <= 1e-12);
      const ClassReport r = classify(f, 1e-8);
      CHECK(r.W0);
      CHECK(r.W1);
      CHECK(r.W2);
      CHECK(r.W3);
    }
  }
}

TEST_CASE("F is symmetric in its last slots and J-compatible") {
  const Chart c = data_chart("twisted_4.json");
  for (const auto& p : sample_points(c, 6, 42)) {
    const PointFrame f(c, p, 2);
    const Tensor F = values(f.F());
    const Tensor J = f.values().J;
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        for (int z = 0; z < 4; ++z) {
          CHECK(std::abs(F(x, y, z) - F(x, z, y)) <= 1e-10);
          double fj = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) fj += F(x, a, b) * J(a, y) * J(b, z);
          CHECK(std::abs(fj - F(x, y, z)) <= 1e-10);
        }
  }
}

TEST_CASE("R0 is curvature-like on every shipped chart") {
  for (const char* file : {"conformal_4.json", "conformal_6.json", "twisted_4.json"}) {
    const Chart c = data_chart(file);
    for (const auto& p : sample_points(c, 4, 42)) {
      const PointFrame f(c, p, 2);
      CHECK(is_curvature_like(curvature_R0(f), 1e-8).holds);
      CHECK(is_curvature_like(curvature_R0(f, Which::g_tilde), 1e-8).holds);
    }
  }
}

TEST_CASE("conformal chart lands in W1 and is integrable") {
  for (const char* file : {"conformal_4.json", "conformal_6.json"}) {
    const Chart c = data_chart(file);
    for (const auto& p : sample_points(c, 8, 42)) {
      const PointFrame f(c, p, 2);
      const ClassReport r = classify(f, 1e-8);
      CHECK(r.W1);
      CHECK(!r.W0);
      CHECK(r.W12);
      CHECK(max_abs(nijenhuis(f)) <= 1e-12);
      const Nabla0JNorms nn = nabla0J_norms(f);
      CHECK(std::abs(nn.norm_sq - nn.norm_sq_alt) <= 1e-10);
      double tO = 0.0;
      const Tensor th = values(f.theta()), om = values(f.omega());
      for (int i = 0; i < f.dim(); ++i) tO += th(i) * om(i);
      CHECK(std::abs(tO - 0.5 * f.n() * nn.norm_sq) <= 1e-10);
    }
  }
}

TEST_CASE("twisted chart is neither W1 nor integrable") {
  const Chart c = data_chart("twisted_4.json");
  const double h = 1e-6;
  for (const auto& p : sample_points(c, 4, 42)) {
    const PointFrame f(c, p, 2);
    const ClassReport r = classify(f, 1e-8);
    CHECK(!r.W1);
    CHECK(!r.W12);
    CHECK(r.residual_W1 == doctest::Approx(max_abs_diff(values(f.F()), w1_form(f))));
    // Nijenhuis tensor from finite differences of J
    const Tensor N = nijenhuis(f);
    CHECK(max_abs(N) > 1e-3);
    auto dJ = [&](int a, int k, int j) {
      std::vector<double> q = p;
      q[static_cast<std::size_t>(a)] += h;
      const double up = c.J(k, j).eval(q);
      q[static_cast<std::size_t>(a)] -= 2 * h;
      return (up - c.J(k, j).eval(q)) / (2 * h);
    };
    const Tensor J = f.values().J;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double v = 0.0;
          for (int a = 0; a < 4; ++a)
            v += J(a, i) * dJ(a, k, j) - J(a, j) * dJ(a, k, i) + J(k, a) * dJ(j, a, i) - J(k, a) * dJ(i, a, j);
          CHECK(std::abs(N(i, j, k) - v) <= 1e-7);
        }
  }
}

TEST_CASE("theta and Omega") {
  const Chart c = data_chart("conformal_4.json");
  const std::vector<double> p{0.2, -0.1, 0.3, 0.05};
  const PointFrame f(c, p, 2);
  const LieForms lf = lie_forms(f);
  const Tensor gi = f.values().g_inv;
  for (int a = 0; a < 4; ++a) {
    double v = 0.0;
    for (int b = 0; b < 4; ++b) v += gi(a, b) * lf.theta(b);
    CHECK(lf.omega(a) == doctest::Approx(v));
    double t = 0.0;
    for (int b = 0; b < 4; ++b) t += lf.theta(b) * f.values().J(b, a);
    CHECK(lf.theta_J(a) == doctest::Approx(t));
  }
  CHECK(max_abs(lf.theta) > 0.1);
}

TEST_CASE("frame order budget") {
  const Chart c = flat_kahler(2);
  const PointFrame f1(c, std::vector<double>(4, 0.0), 1);
  CHECK(f1.field_order() == 0);
  CHECK_THROWS_AS(curvature_R0(f1), ArgumentError);
  CHECK_THROWS_AS(metric_pair_at(c, std::vector<double>(4, 0.0), 4), ArgumentError);
}
