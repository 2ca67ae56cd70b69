#include "norden/manifold.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "norden/errors.hpp"

namespace norden {
namespace {

constexpr Variance L = Variance::lower;
constexpr Variance U = Variance::upper;

JetTensor jet_zeros(int dim, std::vector<Variance> var, int order) {
  return JetTensor(dim, std::move(var), Jet::constant(0.0, dim, order));
}

JetTensor mat_mul(const JetTensor& a, const JetTensor& b, std::vector<Variance> var) {
  const int d = a.dim();
  JetTensor out = jet_zeros(d, std::move(var), a(0, 0).order());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet acc = zero_like(a(0, 0));
      for (int k = 0; k < d; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

JetTensor symmetrized(const JetTensor& h) {
  JetTensor out = h;
  const int d = h.dim();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Jet s = (h(i, j) + h(j, i)) * 0.5;
      out(i, j) = s;
      out(j, i) = s;
    }
  return out;
}

std::vector<double> primes(int count) {
  std::vector<double> out;
  for (int c = 2; static_cast<int>(out.size()) < count; ++c) {
    bool prime = true;
    for (int p = 2; p * p <= c; ++p)
      if (c % p == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(c);
  }
  return out;
}

double radical_inverse(unsigned long long i, double base) {
  const auto b = static_cast<unsigned long long>(base);
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % b);
    i /= b;
  }
  return r;
}

}  // namespace

Chart::Chart(std::string name, int n, std::vector<std::array<double, 2>> domain,
             std::vector<Expression> g, std::vector<Expression> J)
    : name_(std::move(name)), n_(n), domain_(std::move(domain)), g_(std::move(g)), J_(std::move(J)) {
  if (n < 1) throw ArgumentError("chart: n must be at least 1");
  const auto d = static_cast<std::size_t>(2 * n);
  if (domain_.size() != d) throw ArgumentError("chart: domain needs one interval per coordinate");
  for (const auto& iv : domain_)
    if (!(iv[0] < iv[1])) throw ArgumentError("chart: empty domain interval");
  if (g_.size() != d * d || J_.size() != d * d) throw ArgumentError("chart: g and J must be 2n x 2n");
  for (const auto& e : g_)
    if (e.empty() || e.dim() != 2 * n) throw ArgumentError("chart: g entry bound to the wrong dimension");
  for (const auto& e : J_)
    if (e.empty() || e.dim() != 2 * n) throw ArgumentError("chart: J entry bound to the wrong dimension");
}

bool Chart::contains(std::span<const double> p) const {
  if (p.size() != domain_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < domain_[i][0] || p[i] > domain_[i][1]) return false;
  return true;
}

Chart chart_from_strings(std::string name, int n, std::vector<std::array<double, 2>> domain,
                         const std::vector<std::string>& g, const std::vector<std::string>& J) {
  const int d = 2 * n;
  std::vector<Expression> ge, je;
  for (const auto& s : g) ge.push_back(parse(s, d));
  for (const auto& s : J) je.push_back(parse(s, d));
  return Chart(std::move(name), n, std::move(domain), std::move(ge), std::move(je));
}

namespace {

std::vector<std::string> flat_J_strings(int n) {
  const int d = 2 * n;
  std::vector<std::string> J(static_cast<std::size_t>(d * d), "0");
  for (int i = 0; i < n; ++i) {
    J[static_cast<std::size_t>((n + i) * d + i)] = "1";
    J[static_cast<std::size_t>(i * d + n + i)] = "-1";
  }
  return J;
}

std::vector<std::string> diag_strings(int n, const std::string& pos, const std::string& neg) {
  const int d = 2 * n;
  std::vector<std::string> g(static_cast<std::size_t>(d * d), "0");
  for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(i * d + i)] = i < n ? pos : neg;
  return g;
}

}  // namespace

Chart flat_kahler(int n) {
  if (n < 1) throw ArgumentError("flat_kahler: n must be at least 1");
  std::vector<std::array<double, 2>> box(static_cast<std::size_t>(2 * n), {-0.5, 0.5});
  return chart_from_strings("flat-kahler-" + std::to_string(2 * n), n, box, diag_strings(n, "1", "-1"),
                            flat_J_strings(n));
}

Chart conformal_flat(int n, std::string_view u) {
  if (n < 1) throw ArgumentError("conformal_flat: n must be at least 1");
  const std::string e = "exp(2*(" + std::string(u) + "))";
  std::vector<std::array<double, 2>> box(static_cast<std::size_t>(2 * n), {-0.5, 0.5});
  return chart_from_strings("conformal-" + std::to_string(2 * n), n, box, diag_strings(n, e, "-" + e),
                            flat_J_strings(n));
}

std::vector<std::vector<double>> sample_points(const Chart& c, int count, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("sample_points: count must be positive");
  const int d = c.dim();
  const std::vector<double> bases = primes(d);
  std::mt19937_64 rng(seed);
  std::vector<double> shift(static_cast<std::size_t>(d));
  for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    std::vector<double> p(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      double v = radical_inverse(static_cast<unsigned long long>(k), bases[ui]) + shift[ui];
      v -= std::floor(v);
      const auto& iv = c.domain()[ui];
      p[ui] = iv[0] + v * (iv[1] - iv[0]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

JetTensor invert_jet_matrix(const JetTensor& h) {
  const int d = h.dim();
  const int order = h(0, 0).order();
  std::vector<double> vals(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) vals[static_cast<std::size_t>(i * d + j)] = h(i, j).value();
  const MatrixInverse inv = invert_matrix(vals, d);
  JetTensor x = jet_zeros(d, {U, U}, order);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = Jet::constant(inv.inverse[static_cast<std::size_t>(i * d + j)], d, order);
  // Newton step X <- X (2I - H X); each step doubles the number of exact jet orders.
  for (int step = 0; step < 3; ++step) {
    JetTensor hx = mat_mul(h, x, {L, U});
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) hx(i, j) = (i == j ? 2.0 : 0.0) - hx(i, j);
    x = mat_mul(x, hx, {U, U});
  }
  return symmetrized(x);
}

JetMetricPair metric_pair_at(const Chart& c, std::span<const double> p, int order, double tol) {
  if (order < 0 || order > Jet::max_order) throw ArgumentError("metric_pair_at: order must be 0..3");
  const int d = c.dim();
  if (static_cast<int>(p.size()) != d) throw ArgumentError("metric_pair_at: point has the wrong dimension");
  JetMetricPair out;
  out.order = order;
  out.g = jet_zeros(d, {L, L}, order);
  out.J = jet_zeros(d, {U, L}, order);
  Tensor gv = zeros(d, {L, L});
  Tensor Jv = zeros(d, {U, L});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out.g(i, j) = c.g(i, j).eval_jet(p, order);
      out.J(i, j) = c.J(i, j).eval_jet(p, order);
      gv(i, j) = out.g(i, j).value();
      Jv(i, j) = out.J(i, j).value();
    }
  out.values = MetricPair::build(gv, Jv, tol);
  out.g = symmetrized(out.g);
  out.g_tilde = symmetrized(mat_mul(out.g, out.J, {L, L}));
  out.g_inv = invert_jet_matrix(out.g);
  out.g_tilde_inv = invert_jet_matrix(out.g_tilde);
  return out;
}

JetTensor christoffel_from_metric(const JetTensor& h, const JetTensor& h_inv) {
  const int d = h.dim();
  const int order = h(0, 0).order() - 1;
  if (order < 0) throw ArgumentError("christoffel_from_metric: metric jets need order >= 1");
  // dh(a, i, j) = d_a h_ij
  std::vector<Jet> dh;
  dh.reserve(static_cast<std::size_t>(d * d * d));
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dh.push_back(h(i, j).partial(a));
  auto D = [&](int a, int i, int j) -> const Jet& { return dh[static_cast<std::size_t>((a * d + i) * d + j)]; };
  const JetTensor hi = truncated(h_inv, order);
  JetTensor gamma = jet_zeros(d, {U, L, L}, order);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      std::vector<Jet> lower;
      lower.reserve(static_cast<std::size_t>(d));
      for (int l = 0; l < d; ++l) lower.push_back((D(i, l, j) + D(j, l, i) - D(l, i, j)) * 0.5);
      for (int k = 0; k < d; ++k) {
        Jet acc = Jet::constant(0.0, d, order);
        for (int l = 0; l < d; ++l) acc += hi(k, l) * lower[static_cast<std::size_t>(l)];
        gamma(k, i, j) = acc;
        gamma(k, j, i) = acc;
      }
    }
  return gamma;
}

Tensor curvature_from_coefficients(const JetTensor& gamma) {
  const int d = gamma.dim();
  if (gamma(0, 0, 0).order() < 1) throw ArgumentError("curvature: connection jets need order >= 1");
  Tensor r = zeros(d, {L, L, L, U});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = gamma(l, j, k).grad(i) - gamma(l, i, k).grad(j);
          for (int m = 0; m < d; ++m)
            v += gamma(l, i, m).value() * gamma(m, j, k).value() - gamma(l, j, m).value() * gamma(m, i, k).value();
          r(i, j, k, l) = v;
        }
  return r;
}

Tensor lower_curvature(const Tensor& r13, const Tensor& metric) {
  const int d = r13.dim();
  Tensor out = zeros(d, {L, L, L, L});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int w = 0; w < d; ++w) {
          double v = 0.0;
          for (int l = 0; l < d; ++l) v += r13(i, j, k, l) * metric(l, w);
          out(i, j, k, w) = v;
        }
  return out;
}

PointFrame::PointFrame(const Chart& c, std::span<const double> p, int order, double tol)
    : chart_(c), point_(p.begin(), p.end()) {
  if (order < 1) throw ArgumentError("PointFrame: order must be at least 1");
  metric_ = metric_pair_at(c, p, order, tol);
  const int d = c.dim();
  const int K = order - 1;
  J_field_ = truncated(metric_.J, K);
  g_field_ = truncated(metric_.g, K);
  gt_field_ = truncated(metric_.g_tilde, K);
  g_inv_field_ = truncated(metric_.g_inv, K);
  gt_inv_field_ = truncated(metric_.g_tilde_inv, K);
  gamma_ = christoffel_from_metric(metric_.g, metric_.g_inv);
  gamma_tilde_ = christoffel_from_metric(metric_.g_tilde, metric_.g_tilde_inv);

  const Jet zero = Jet::constant(0.0, d, K);
  nabla0_J_ = jet_zeros(d, {L, U, L}, K);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        Jet v = metric_.J(k, j).partial(i);
        for (int l = 0; l < d; ++l) {
          v += gamma_(k, i, l) * J_field_(l, j);
          v -= gamma_(l, i, j) * J_field_(k, l);
        }
        nabla0_J_(i, k, j) = v;
      }
  F_ = jet_zeros(d, {L, L, L}, K);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Jet v = zero;
        for (int m = 0; m < d; ++m) v += g_field_(k, m) * nabla0_J_(i, m, j);
        F_(i, j, k) = v;
      }
  theta_ = jet_zeros(d, {L}, K);
  for (int k = 0; k < d; ++k) {
    Jet v = zero;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v += g_inv_field_(i, j) * F_(i, j, k);
    theta_(k) = v;
  }
  theta_J_ = jet_zeros(d, {L}, K);
  omega_ = jet_zeros(d, {U}, K);
  for (int k = 0; k < d; ++k) {
    Jet tj = zero;
    Jet om = zero;
    for (int m = 0; m < d; ++m) {
      tj += theta_(m) * J_field_(m, k);
      om += g_inv_field_(k, m) * theta_(m);
    }
    theta_J_(k) = tj;
    omega_(k) = om;
  }
  J_omega_ = jet_zeros(d, {U}, K);
  for (int a = 0; a < d; ++a) {
    Jet v = zero;
    for (int b = 0; b < d; ++b) v += J_field_(a, b) * omega_(b);
    J_omega_(a) = v;
  }
}

JetTensor levi_civita(const Chart& c, std::span<const double> p, Which which, int order) {
  if (order < 0 || order + 1 > Jet::max_order) throw ArgumentError("levi_civita: order must be 0..2");
  return PointFrame(c, p, order + 1).christoffel(which);
}

Tensor tensor_F(const Chart& c, std::span<const double> p) { return values(PointFrame(c, p, 1).F()); }

LieForms lie_forms(const PointFrame& f) {
  return {values(f.theta()), values(f.theta_J()), values(f.omega())};
}

LieForms lie_forms(const Chart& c, std::span<const double> p) { return lie_forms(PointFrame(c, p, 1)); }

Tensor w1_form(const PointFrame& f) {
  const int d = f.dim();
  const Tensor g = values(f.metric_field(Which::g));
  const Tensor gt = values(f.metric_field(Which::g_tilde));
  const Tensor th = values(f.theta());
  const Tensor tj = values(f.theta_J());
  const double s = 1.0 / (2.0 * f.n());
  Tensor out = zeros(d, {L, L, L});
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        out(x, y, z) = s * (g(x, y) * th(z) + gt(x, y) * tj(z) + g(x, z) * th(y) + gt(x, z) * tj(y));
  return out;
}

ClassReport classify(const PointFrame& f, double threshold) {
  const int d = f.dim();
  const Tensor F = values(f.F());
  const Tensor J = values(f.J());
  ClassReport r;
  r.threshold = threshold;
  r.residual_W0 = max_abs(F);
  r.residual_W1 = max_abs_diff(F, w1_form(f));
  r.residual_theta = max_abs(values(f.theta()));
  Tensor FJ = zeros(d, {L, L, L});  // F(x, y, Jz)
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        double v = 0.0;
        for (int m = 0; m < d; ++m) v += F(x, y, m) * J(m, z);
        FJ(x, y, z) = v;
      }
  double cyc_j = 0.0;
  double cyc = 0.0;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        cyc_j = std::max(cyc_j, std::abs(FJ(x, y, z) + FJ(y, z, x) + FJ(z, x, y)));
        cyc = std::max(cyc, std::abs(F(x, y, z) + F(y, z, x) + F(z, x, y)));
      }
  r.residual_W2_cyclic = cyc_j;
  r.residual_W12_cyclic = cyc_j;
  r.residual_W3_cyclic = cyc;
  r.W0 = r.residual_W0 < threshold;
  r.W1 = r.residual_W1 < threshold;
  r.W2 = r.residual_W2_cyclic < threshold && r.residual_theta < threshold;
  r.W3 = r.residual_W3_cyclic < threshold;
  r.W12 = r.residual_W12_cyclic < threshold;
  return r;
}

ClassReport classify(const Chart& c, std::span<const double> p, double threshold) {
  return classify(PointFrame(c, p, 1), threshold);
}

Tensor curvature_R0(const PointFrame& f, Which which) {
  if (f.order() < 2) throw ArgumentError("curvature_R0: frame order must be at least 2");
  return lower_curvature(curvature_from_coefficients(f.christoffel(which)), values(f.metric_field(which)));
}

Tensor curvature_R0(const Chart& c, std::span<const double> p, Which which) {
  return curvature_R0(PointFrame(c, p, 2), which);
}

Nabla0JNorms nabla0J_norms(const PointFrame& f, double tol) {
  const int d = f.dim();
  const Tensor F = values(f.F());
  const Tensor N = values(f.nabla0_J());
  const Tensor gi = values(f.inverse_field(Which::g));
  // P(i, k, j, l) = g((nabla_i J) e_k, (nabla_j J) e_l)
  std::vector<double> P(static_cast<std::size_t>(d * d * d * d), 0.0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          double v = 0.0;
          for (int b = 0; b < d; ++b) v += F(i, k, b) * N(j, b, l);
          P[static_cast<std::size_t>(((i * d + k) * d + j) * d + l)] = v;
        }
  auto at = [&](int i, int k, int j, int l) { return P[static_cast<std::size_t>(((i * d + k) * d + j) * d + l)]; };
  Nabla0JNorms out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          out.norm_sq += gi(i, j) * gi(k, l) * at(i, k, j, l);
          out.norm_sq_alt += 2.0 * gi(i, l) * gi(j, k) * at(i, k, j, l);
        }
  out.isotropic = std::abs(out.norm_sq) < tol;
  return out;
}

Nabla0JNorms nabla0J_norms(const Chart& c, std::span<const double> p, double tol) {
  return nabla0J_norms(PointFrame(c, p, 1), tol);
}

Tensor nijenhuis(const PointFrame& f) {
  const int d = f.dim();
  const JetTensor& Jj = f.metric().J;
  const Tensor J = values(Jj);
  auto dJ = [&](int a, int k, int j) { return Jj(k, j).grad(a); };  // d_a J^k_j
  Tensor out = zeros(d, {L, L, U});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double v = 0.0;
        for (int a = 0; a < d; ++a)
          v += J(a, i) * dJ(a, k, j) - J(a, j) * dJ(a, k, i) + J(k, a) * dJ(j, a, i) - J(k, a) * dJ(i, a, j);
        out(i, j, k) = v;
      }
  return out;
}

Tensor nijenhuis(const Chart& c, std::span<const double> p) { return nijenhuis(PointFrame(c, p, 1)); }

}  // namespace norden
