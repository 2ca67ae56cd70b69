#include "norden/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace norden {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_rank(const Tensor& t, int rank, const char* what) {
  if (t.rank() != rank)
    throw ArgumentError(std::string(what) + ": expected rank " + std::to_string(rank) + ", got " +
                        std::to_string(t.rank()));
}

void require_all_lower(const Tensor& t, const char* what) {
  for (Variance v : t.variances())
    if (v != Variance::lower) throw ArgumentError(std::string(what) + ": expected all-lower slots");
}

void require_dim(const Tensor& t, int dim, const char* what) {
  if (t.dim() != dim) throw ArgumentError(std::string(what) + ": dimension mismatch");
}

std::string entry_name(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double v : t.components()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  a.require_same_shape(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.flat(i) - b.flat(i)));
  return m;
}

Tensor values(const JetTensor& t) {
  Tensor out(t.dim(), t.variances(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) out.flat(i) = t.flat(i).value();
  return out;
}

JetTensor truncated(const JetTensor& t, int order) {
  JetTensor out = t;
  for (auto& j : out.components()) j = j.truncated(order);
  return out;
}

JetTensor as_constant_jets(const Tensor& t, int jet_dim, int order) {
  JetTensor out(t.dim(), t.variances(), Jet::constant(0.0, jet_dim, order));
  for (std::size_t i = 0; i < t.size(); ++i) out.flat(i) = Jet::constant(t.flat(i), jet_dim, order);
  return out;
}

MatrixInverse invert_matrix(const std::vector<double>& a, int n, double max_condition) {
  if (static_cast<int>(a.size()) != n * n) throw ArgumentError("invert_matrix: size mismatch");
  Eigen::Map<const Matrix> m(a.data(), n, n);
  Eigen::PartialPivLU<Matrix> lu(m);
  const Matrix inv = lu.inverse();
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm = inv.cwiseAbs().colwise().sum().maxCoeff();
  const double cond = norm * inv_norm;
  if (!std::isfinite(cond) || lu.determinant() == 0.0)
    throw ValidationError("singular metric (LU pivot vanished)");
  if (cond > max_condition) {
    std::ostringstream os;
    os << "metric condition number " << cond << " exceeds " << max_condition;
    throw ValidationError(os.str());
  }
  MatrixInverse out;
  out.inverse.assign(inv.data(), inv.data() + static_cast<std::size_t>(n) * n);
  out.condition = cond;
  return out;
}

std::pair<int, int> signature(const std::vector<double>& symmetric, int n) {
  Eigen::Map<const Matrix> m(symmetric.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  int pos = 0, neg = 0;
  for (int i = 0; i < n; ++i) {
    if (ev(i) > 1e-12 * scale) ++pos;
    if (ev(i) < -1e-12 * scale) ++neg;
  }
  return {pos, neg};
}

MetricPair MetricPair::build(const Tensor& g_in, const Tensor& J, double tol) {
  const int n = g_in.dim();
  if (n % 2 != 0) throw ValidationError("dimension must be even, got " + std::to_string(n));
  if (g_in.variances() != std::vector<Variance>{Variance::lower, Variance::lower})
    throw ArgumentError("metric must be a (0,2) tensor");
  if (J.variances() != std::vector<Variance>{Variance::upper, Variance::lower} || J.dim() != n)
    throw ArgumentError("J must be a (1,1) tensor of the metric's dimension");

  auto worst = [n](auto&& residual, const char* what, double tol_) {
    double w = 0.0;
    int wi = 0, wj = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double r = std::abs(residual(i, j));
        if (r > w) {
          w = r;
          wi = i;
          wj = j;
        }
      }
    if (!(w <= tol_)) {
      std::ostringstream os;
      os << what << ": worst entry " << entry_name(wi, wj) << " residual " << w;
      throw ValidationError(os.str());
    }
  };

  worst([&](int i, int j) { return g_in(i, j) - g_in(j, i); }, "g is not symmetric", tol);
  Tensor g = g_in;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g(i, j) = g(j, i) = 0.5 * (g_in(i, j) + g_in(j, i));

  worst(
      [&](int i, int j) {
        double s = (i == j) ? 1.0 : 0.0;
        for (int k = 0; k < n; ++k) s += J(i, k) * J(k, j);
        return s;
      },
      "J^2 != -I", tol);
  worst(
      [&](int i, int j) {
        double s = g(i, j);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += J(a, i) * g(a, b) * J(b, j);
        return s;
      },
      "g(JX,JY) != -g(X,Y)", tol);

  MetricPair m;
  m.g = g;
  m.J = J;
  m.g_tilde = zeros(n, {Variance::lower, Variance::lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += g(i, k) * J(k, j);
      m.g_tilde(i, j) = s;
    }

  auto inverse_of = [n](const Tensor& h) {
    const MatrixInverse inv = invert_matrix(h.components(), n);
    Tensor out(n, {Variance::upper, Variance::upper}, 0.0);
    out.components() = inv.inverse;
    return out;
  };
  m.g_inv = inverse_of(m.g);
  m.g_tilde_inv = inverse_of(m.g_tilde);

  worst(
      [&](int i, int j) {
        double s = (i == j) ? -1.0 : 0.0;
        for (int k = 0; k < n; ++k) s += m.g(i, k) * m.g_inv(k, j);
        return s;
      },
      "g g^-1 != I", tol);

  const auto [pos, neg] = signature(m.g.components(), n);
  if (pos != n / 2 || neg != n / 2)
    throw ValidationError("metric signature (" + std::to_string(pos) + "," + std::to_string(neg) +
                          ") is not neutral");
  return m;
}

Tensor move_index(const Tensor& t, int slot, IndexMove direction, const MetricPair& m) {
  if (slot < 0 || slot >= t.rank()) throw ArgumentError("move_index: slot out of range");
  require_dim(t, m.dim(), "move_index");
  const Variance from = direction == IndexMove::raise ? Variance::lower : Variance::upper;
  if (t.variance(slot) != from)
    throw ArgumentError(direction == IndexMove::raise ? "move_index: slot is already upper"
                                                      : "move_index: slot is already lower");
  const Tensor& metric = direction == IndexMove::raise ? m.g_inv : m.g;
  std::vector<Variance> var = t.variances();
  var[static_cast<std::size_t>(slot)] =
      direction == IndexMove::raise ? Variance::upper : Variance::lower;
  Tensor out(t.dim(), var, 0.0);
  for (std::size_t o = 0; o < out.size(); ++o) {
    std::vector<int> idx = out.unflatten(o);
    const int a = idx[static_cast<std::size_t>(slot)];
    double s = 0.0;
    for (int b = 0; b < t.dim(); ++b) {
      idx[static_cast<std::size_t>(slot)] = b;
      s += metric(a, b) * t.flat(t.flatten(idx));
    }
    out.flat(o) = s;
  }
  return out;
}

Tensor kulkarni_nomizu(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "kulkarni_nomizu");
  require_rank(b, 2, "kulkarni_nomizu");
  if (a.dim() != b.dim()) throw ArgumentError("kulkarni_nomizu: dimension mismatch");
  const int n = a.dim();
  Tensor out = zeros(n, {Variance::lower, Variance::lower, Variance::lower, Variance::lower});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          out(x, y, z, w) = a(y, z) * b(x, w) - a(x, z) * b(y, w) + a(x, w) * b(y, z) -
                            a(y, w) * b(x, z);
  return out;
}

Tensor twist(const Tensor& s, const MetricPair& m) {
  require_rank(s, 2, "twist");
  require_dim(s, m.dim(), "twist");
  const int n = s.dim();
  Tensor out = zeros(n, s.variances());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) v += s(x, k) * m.J(k, y);
      out(x, y) = v;
    }
  return out;
}

Tensor psi1(const Tensor& s, const MetricPair& m) {
  require_dim(s, m.dim(), "psi1");
  return kulkarni_nomizu(m.g, s);
}

Tensor psi2(const Tensor& s, const MetricPair& m) {
  require_dim(s, m.dim(), "psi2");
  return kulkarni_nomizu(m.g_tilde, twist(s, m));
}

Tensor pi1(const MetricPair& m) { return 0.5 * psi1(m.g, m); }
Tensor pi2(const MetricPair& m) { return 0.5 * psi2(m.g, m); }
Tensor pi3(const MetricPair& m) { return -1.0 * psi1(m.g_tilde, m); }

PsiPiFamily psi_pi_family(const Tensor& s, const MetricPair& m) {
  return {psi1(s, m), psi2(s, m), pi1(m), pi2(m), pi3(m)};
}

SymmetryResidual is_curvature_like(const Tensor& l, double tol) {
  require_rank(l, 4, "is_curvature_like");
  require_all_lower(l, "is_curvature_like");
  const int n = l.dim();
  double r = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          const double v = l(x, y, z, w);
          r = std::max(r, std::abs(v + l(y, x, z, w)));
          r = std::max(r, std::abs(v + l(x, y, w, z)));
          r = std::max(r, std::abs(v + l(y, z, x, w) + l(z, x, y, w)));
        }
  return {r <= tol, r};
}

SymmetryResidual is_kahler_tensor(const Tensor& l, const MetricPair& m, double tol) {
  require_rank(l, 4, "is_kahler_tensor");
  require_all_lower(l, "is_kahler_tensor");
  require_dim(l, m.dim(), "is_kahler_tensor");
  const int n = l.dim();
  // Contract J into the last slot, then into the third.
  Tensor lw = zeros(n, l.variances());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          double s = 0.0;
          for (int b = 0; b < n; ++b) s += m.J(b, w) * l(x, y, z, b);
          lw(x, y, z, w) = s;
        }
  double r = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) s += m.J(a, z) * lw(x, y, a, w);
          r = std::max(r, std::abs(s + l(x, y, z, w)));
        }
  return {r <= tol, r};
}

RicciScalar ricci_scalar(const Tensor& l, const MetricPair& m) {
  require_rank(l, 4, "ricci_scalar");
  require_dim(l, m.dim(), "ricci_scalar");
  const int n = l.dim();
  RicciScalar out{zeros(n, {Variance::lower, Variance::lower}), 0.0};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += m.g_inv(i, j) * l(i, x, y, j);
      out.rho(x, y) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.tau += m.g_inv(i, j) * out.rho(i, j);
  return out;
}

Tensor weyl(const Tensor& l, const MetricPair& m) {
  const int dim = m.dim();
  if (dim < 4) throw ArgumentError("weyl: unsupported dimension " + std::to_string(dim) + " (need >= 4)");
  const double n = dim / 2;
  const RicciScalar rs = ricci_scalar(l, m);
  Tensor bracket = psi1(rs.rho, m) - (rs.tau / (2.0 * n - 1.0)) * pi1(m);
  return l - (1.0 / (2.0 * (n - 1.0))) * bracket;
}

double inner_product(const Tensor& a, const Tensor& b, const MetricPair& m) {
  a.require_same_shape(b);
  require_all_lower(a, "inner_product");
  Tensor raised = b;
  for (int s = 0; s < b.rank(); ++s) raised = move_index(raised, s, IndexMove::raise, m);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.flat(i) * raised.flat(i);
  return sum;
}

double symmetry_residual(const Tensor& s) {
  require_rank(s, 2, "symmetry_residual");
  double r = 0.0;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) r = std::max(r, std::abs(s(i, j) - s(j, i)));
  return r;
}

std::string describe_variance(const std::vector<Variance>& v) {
  int upper = 0;
  for (Variance x : v) upper += x == Variance::upper;
  return "(" + std::to_string(upper) + "," + std::to_string(static_cast<int>(v.size()) - upper) + ")";
}

}  // namespace norden
