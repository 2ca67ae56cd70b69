#include "norden/connections.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "norden/errors.hpp"

namespace norden {
namespace {

constexpr Variance L = Variance::lower;
constexpr Variance U = Variance::upper;

JetTensor jet_zeros(int dim, std::vector<Variance> var, int order) {
  return JetTensor(dim, std::move(var), Jet::constant(0.0, dim, order));
}

void require_connection_shape(const JetTensor& gamma, const PointFrame& f) {
  if (gamma.dim() != f.dim() || gamma.variances() != std::vector<Variance>{U, L, L})
    throw ArgumentError("connection rule returned a tensor that is not (1,2) over the chart");
}

}  // namespace

ConnectionField::ConnectionField(std::string label, Source source, Rule rule)
    : label_(std::move(label)), source_(source), rule_(std::make_shared<const Rule>(std::move(rule))) {
  if (!*rule_) throw ArgumentError("connection rule is empty");
}

JetTensor ConnectionField::difference(const PointFrame& f) const {
  return coefficients(f) - f.christoffel(Which::g);
}

ConnectionField levi_civita_connection(Which which) {
  if (which == Which::g)
    return ConnectionField("levi-civita", ConnectionField::Source::levi_civita_g,
                           [](const PointFrame& f) { return f.christoffel(Which::g); });
  return ConnectionField("levi-civita-twin", ConnectionField::Source::levi_civita_g_tilde,
                         [](const PointFrame& f) { return f.christoffel(Which::g_tilde); });
}

ConnectionField conjugate_metric(const ConnectionField& nabla, Which which) {
  std::string label = nabla.label() + (which == Which::g ? "*g" : "*g~");
  return ConnectionField(std::move(label), ConnectionField::Source::explicit_offset,
                         [nabla, which](const PointFrame& f) {
                           const JetTensor gamma = nabla.coefficients(f);
                           require_connection_shape(gamma, f);
                           const int d = f.dim();
                           const int K = f.field_order();
                           const JetTensor& h_full = f.metric().metric(which);
                           const JetTensor& h = f.metric_field(which);
                           const JetTensor& hi = f.inverse_field(which);
                           // b(i, j, k) = d_i h_jk - Gamma^l_ij h_lk = h_jm Gamma*^m_ik
                           JetTensor b = jet_zeros(d, {L, L, L}, K);
                           for (int i = 0; i < d; ++i)
                             for (int j = 0; j < d; ++j)
                               for (int k = 0; k < d; ++k) {
                                 Jet v = h_full(j, k).partial(i);
                                 for (int l = 0; l < d; ++l) v -= gamma(l, i, j) * h(l, k);
                                 b(i, j, k) = v;
                               }
                           JetTensor out = jet_zeros(d, {U, L, L}, K);
                           for (int m = 0; m < d; ++m)
                             for (int i = 0; i < d; ++i)
                               for (int k = 0; k < d; ++k) {
                                 Jet v = Jet::constant(0.0, d, K);
                                 for (int j = 0; j < d; ++j) v += hi(m, j) * b(i, j, k);
                                 out(m, i, k) = v;
                               }
                           return out;
                         });
}

ConnectionField conjugate_complex(const ConnectionField& nabla) {
  return ConnectionField(nabla.label() + "*J", ConnectionField::Source::explicit_offset,
                         [nabla](const PointFrame& f) {
                           const JetTensor gamma = nabla.coefficients(f);
                           require_connection_shape(gamma, f);
                           const int d = f.dim();
                           const int K = f.field_order();
                           const JetTensor& Jf = f.metric().J;
                           const JetTensor& J = f.J();
                           // a(m, i, j) = d_i J^m_j + Gamma^m_il J^l_j = (nabla_i (J e_j))^m
                           JetTensor a = jet_zeros(d, {U, L, L}, K);
                           for (int m = 0; m < d; ++m)
                             for (int i = 0; i < d; ++i)
                               for (int j = 0; j < d; ++j) {
                                 Jet v = Jf(m, j).partial(i);
                                 for (int l = 0; l < d; ++l) v += gamma(m, i, l) * J(l, j);
                                 a(m, i, j) = v;
                               }
                           JetTensor out = jet_zeros(d, {U, L, L}, K);
                           for (int k = 0; k < d; ++k)
                             for (int i = 0; i < d; ++i)
                               for (int j = 0; j < d; ++j) {
                                 Jet v = Jet::constant(0.0, d, K);
                                 for (int m = 0; m < d; ++m) v -= J(k, m) * a(m, i, j);
                                 out(k, i, j) = v;
                               }
                           return out;
                         });
}

ConnectionField average(const ConnectionField& a, const ConnectionField& b) {
  return ConnectionField("avg(" + a.label() + "," + b.label() + ")", ConnectionField::Source::explicit_offset,
                         [a, b](const PointFrame& f) {
                           JetTensor out = a.coefficients(f) + b.coefficients(f);
                           out *= 0.5;
                           return out;
                         });
}

ConnectionField with_offset(const ConnectionField& base, std::string label, ConnectionField::Rule q) {
  if (!q) throw ArgumentError("with_offset: empty offset rule");
  return ConnectionField(std::move(label), ConnectionField::Source::explicit_offset,
                         [base, q = std::move(q)](const PointFrame& f) {
                           JetTensor out = base.coefficients(f);
                           out += q(f);
                           return out;
                         });
}

ConnectionField lichnerowicz_D() {
  return with_offset(levi_civita_connection(Which::g), "lichnerowicz", [](const PointFrame& f) {
    const int d = f.dim();
    const int K = f.field_order();
    const JetTensor& J = f.J();
    const JetTensor& N = f.nabla0_J();
    JetTensor q = jet_zeros(d, {U, L, L}, K);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          Jet v = Jet::constant(0.0, d, K);
          for (int m = 0; m < d; ++m) v += J(k, m) * N(i, m, j);
          q(k, i, j) = v * -0.5;
        }
    return q;
  });
}

Curvature curvature(const ConnectionField& nabla, const PointFrame& f) {
  if (f.field_order() < 1) throw ArgumentError("curvature: frame order must be at least 2");
  const JetTensor gamma = nabla.coefficients(f);
  require_connection_shape(gamma, f);
  Curvature c;
  c.R_1_3 = curvature_from_coefficients(gamma);
  c.R_0_4 = lower_curvature(c.R_1_3, values(f.metric_field(Which::g)));
  return c;
}

Tensor covariant_derivative(const JetTensor& gamma, const JetTensor& t) {
  const int d = t.dim();
  if (t.size() == 0) throw ArgumentError("covariant_derivative: empty tensor");
  if (t.flat(0).order() < 1) throw ArgumentError("covariant_derivative: field jets need order >= 1");
  if (gamma.dim() != d) throw ArgumentError("covariant_derivative: dimension mismatch");
  const int r = t.rank();
  std::vector<Variance> var{L};
  var.insert(var.end(), t.variances().begin(), t.variances().end());
  Tensor out = zeros(d, var);
  std::vector<int> src(static_cast<std::size_t>(r));
  for (std::size_t o = 0; o < out.size(); ++o) {
    const std::vector<int> idx = out.unflatten(o);
    const int i = idx[0];
    std::vector<int> ti(idx.begin() + 1, idx.end());
    double v = t.flat(t.flatten(ti)).grad(i);
    for (int s = 0; s < r; ++s) {
      src = ti;
      const auto us = static_cast<std::size_t>(s);
      for (int m = 0; m < d; ++m) {
        src[us] = m;
        const double tv = t.flat(t.flatten(src)).value();
        if (t.variance(s) == U)
          v += gamma(ti[us], i, m).value() * tv;
        else
          v -= gamma(m, i, ti[us]).value() * tv;
      }
    }
    out.flat(o) = v;
  }
  return out;
}

Tensor covariant_derivative(const ConnectionField& nabla, const JetTensor& t, const PointFrame& f) {
  return covariant_derivative(nabla.coefficients(f), t);
}

Tensor metric_derivative(const ConnectionField& nabla, const PointFrame& f, Which which) {
  return covariant_derivative(nabla, f.metric_field(which), f);
}

Tensor J_derivative(const ConnectionField& nabla, const PointFrame& f) {
  return covariant_derivative(nabla, f.J(), f);
}

Tensor torsion(const ConnectionField& nabla, const PointFrame& f) {
  const Tensor g = values(nabla.coefficients(f));
  const int d = f.dim();
  Tensor t = zeros(d, {U, L, L});
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t(k, i, j) = g(k, i, j) - g(k, j, i);
  return t;
}

double metric_conjugacy_residual(const ConnectionField& nabla, const ConnectionField& nabla_star,
                                 const PointFrame& f, Which which) {
  const int d = f.dim();
  const Tensor a = values(nabla.coefficients(f));
  const Tensor b = values(nabla_star.coefficients(f));
  const JetTensor& hj = f.metric().metric(which);
  const Tensor h = values(f.metric_field(which));
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double v = hj(j, k).grad(i);
        for (int l = 0; l < d; ++l) v -= a(l, i, j) * h(l, k) + h(j, l) * b(l, i, k);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

double complex_conjugacy_residual(const ConnectionField& nabla, const ConnectionField& nabla_star,
                                  const PointFrame& f) {
  return max_abs_diff(values(nabla_star.coefficients(f)), values(conjugate_complex(nabla).coefficients(f)));
}

double coefficient_distance(const ConnectionField& a, const ConnectionField& b, const PointFrame& f) {
  return max_abs_diff(values(a.coefficients(f)), values(b.coefficients(f)));
}

namespace {

ConnectionField::Rule q1_rule(const std::array<double, 4>& lam) {
  return [lam](const PointFrame& f) {
    const int d = f.dim();
    const int K = f.field_order();
    const JetTensor& th = f.theta();
    const JetTensor& tj = f.theta_J();
    const JetTensor& om = f.omega();
    const JetTensor& jom = f.J_omega();
    const JetTensor& g = f.metric_field(Which::g);
    const JetTensor& gt = f.metric_field(Which::g_tilde);
    const JetTensor& J = f.J();
    const Jet zero = Jet::constant(0.0, d, K);
    JetTensor q = jet_zeros(d, {U, L, L}, K);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          const Jet di = i == k ? Jet::constant(1.0, d, K) : zero;
          const Jet dj = j == k ? Jet::constant(1.0, d, K) : zero;
          Jet v = lam[0] * (th(i) * dj + th(j) * di + g(i, j) * om(k));
          v += lam[1] * (tj(i) * dj + tj(j) * di + g(i, j) * jom(k));
          v += lam[2] * (th(i) * J(k, j) + th(j) * J(k, i) + gt(i, j) * om(k));
          v += lam[3] * (tj(i) * J(k, j) + tj(j) * J(k, i) + gt(i, j) * jom(k));
          q(k, i, j) = v;
          q(k, j, i) = v;
        }
    return q;
  };
}

ConnectionField::Rule q2_rule(const std::array<double, 4>& lam) {
  return [lam](const PointFrame& f) {
    const int d = f.dim();
    const int K = f.field_order();
    const JetTensor& th = f.theta();
    const JetTensor& tj = f.theta_J();
    const JetTensor& om = f.omega();
    const JetTensor& jom = f.J_omega();
    JetTensor q = jet_zeros(d, {U, L, L}, K);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          Jet v = lam[0] * th(i) * th(j) * om(k);
          v += lam[1] * tj(i) * tj(j) * jom(k);
          v += lam[2] * (th(i) * th(j) * jom(k) + th(i) * tj(j) * om(k) + tj(i) * th(j) * om(k));
          v += lam[3] * (tj(i) * th(j) * jom(k) + tj(i) * tj(j) * om(k) + th(i) * tj(j) * jom(k));
          q(k, i, j) = v;
          q(k, j, i) = v;
        }
    return q;
  };
}

std::string lambda_label(const char* family, const std::array<double, 4>& lam) {
  std::string s = family;
  s += "(";
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (i) s += ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", lam[i]);
    s += buf;
  }
  return s + ")";
}

}  // namespace

StatStructure stat_structure(QFamily family, const std::array<double, 4>& lambda) {
  for (double l : lambda)
    if (!std::isfinite(l)) throw ArgumentError("lambda values must be finite");
  ConnectionField::Rule q = family == QFamily::q1 ? q1_rule(lambda) : q2_rule(lambda);
  const std::string label = lambda_label(family == QFamily::q1 ? "q1" : "q2", lambda);
  const ConnectionField lc = levi_civita_connection(Which::g);
  ConnectionField nabla = with_offset(lc, label, q);
  ConnectionField nabla_star = with_offset(lc, label + "*", [q](const PointFrame& f) {
    JetTensor t = q(f);
    t *= -1.0;
    return t;
  });
  return StatStructure{family, lambda, q, std::move(nabla), std::move(nabla_star)};
}

StatStructure q1_family(const std::array<double, 4>& lambda) { return stat_structure(QFamily::q1, lambda); }
StatStructure q2_family(const std::array<double, 4>& lambda) { return stat_structure(QFamily::q2, lambda); }

Tensor StatStructure::q_lowered(const PointFrame& f) const {
  const int d = f.dim();
  const Tensor qv = values(q(f));
  const Tensor g = values(f.metric_field(Which::g));
  Tensor out = zeros(d, {L, L, L});
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        double v = 0.0;
        for (int k = 0; k < d; ++k) v += qv(k, x, y) * g(k, z);
        out(x, y, z) = v;
      }
  return out;
}

CubicForm cubic_form(const StatStructure& s, const PointFrame& f) {
  const int d = f.dim();
  const Tensor a = values(s.nabla.coefficients(f));
  const Tensor b = values(s.nabla_star.coefficients(f));
  const Tensor g = values(f.metric_field(Which::g));
  CubicForm c{zeros(d, {L, L, L}), metric_derivative(s.nabla, f, Which::g)};
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        double v = 0.0;
        for (int k = 0; k < d; ++k) v += (b(k, x, y) - a(k, x, y)) * g(k, z);
        c.from_difference(x, y, z) = v;
      }
  return c;
}

Tensor L_from_Q(const StatStructure& s, const PointFrame& f) {
  const int d = f.dim();
  const Tensor q = values(s.q(f));
  const Tensor g = values(f.metric_field(Which::g));
  // gq(x, w, y, z) = g(Q(x, w), Q(y, z))
  auto gq = [&](int x, int w, int y, int z) {
    double v = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) v += g(a, b) * q(a, x, w) * q(b, y, z);
    return v;
  };
  Tensor out = zeros(d, {L, L, L, L});
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) out(x, y, z, w) = gq(x, w, y, z) - gq(x, z, y, w);
  return out;
}

Tensor L_from_Q_nested(const StatStructure& s, const PointFrame& f) {
  const int d = f.dim();
  const Tensor q = values(s.q(f));
  const Tensor ql = s.q_lowered(f);
  // Q(X, Q(Y,Z), W) - Q(Y, Q(X,Z), W)
  auto nested = [&](int x, int y, int z, int w) {
    double v = 0.0;
    for (int m = 0; m < d; ++m) v += q(m, y, z) * ql(x, m, w);
    return v;
  };
  Tensor out = zeros(d, {L, L, L, L});
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) out(x, y, z, w) = nested(x, y, z, w) - nested(y, x, z, w);
  return out;
}

}  // namespace norden
