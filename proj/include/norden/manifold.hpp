#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "norden/expr.hpp"
#include "norden/tensor.hpp"

namespace norden {

/// Which of the twin metrics a metric-dependent operation refers to.
enum class Which { g, g_tilde };

/// An almost Norden manifold presented on one coordinate box.
///
/// g(i, j) holds the expression for g_ij; J(i, j) holds J^i_j, i.e. column j
/// is the image of the j-th coordinate vector.
class Chart {
 public:
  Chart(std::string name, int n, std::vector<std::array<double, 2>> domain,
        std::vector<Expression> g, std::vector<Expression> J);

  const std::string& name() const noexcept { return name_; }
  int n() const noexcept { return n_; }
  int dim() const noexcept { return 2 * n_; }
  const std::vector<std::array<double, 2>>& domain() const noexcept { return domain_; }
  const Expression& g(int i, int j) const { return g_[static_cast<std::size_t>(i * dim() + j)]; }
  const Expression& J(int i, int j) const { return J_[static_cast<std::size_t>(i * dim() + j)]; }
  bool contains(std::span<const double> p) const;

 private:
  std::string name_;
  int n_;
  std::vector<std::array<double, 2>> domain_;
  std::vector<Expression> g_;
  std::vector<Expression> J_;
};

/// Chart built from expression strings (row-major 2n x 2n matrices).
Chart chart_from_strings(std::string name, int n, std::vector<std::array<double, 2>> domain,
                         const std::vector<std::string>& g, const std::vector<std::string>& J);

/// g = diag(I_n, -I_n), J e_i = e_{n+i}, J e_{n+i} = -e_i on [-0.5, 0.5]^{2n}.
Chart flat_kahler(int n);
/// The flat Kaehler structure with g scaled by exp(2u).
Chart conformal_flat(int n, std::string_view u);

/// Deterministic Halton points (bases 2, 3, 5, ...) shifted by a seed-derived
/// offset modulo 1 and mapped into the chart's domain box.
std::vector<std::vector<double>> sample_points(const Chart& c, int count, std::uint64_t seed);

/// g, J, g~ and both inverses as jets at one point.
struct JetMetricPair {
  int order = 0;
  JetTensor g;
  JetTensor g_tilde;
  JetTensor g_inv;
  JetTensor g_tilde_inv;
  JetTensor J;
  MetricPair values;

  const JetTensor& metric(Which w) const { return w == Which::g ? g : g_tilde; }
  const JetTensor& inverse(Which w) const { return w == Which::g ? g_inv : g_tilde_inv; }
};

/// Evaluates g and J at `p` to jet order `order`, validates the Norden axioms
/// at `tol`, and inverts both metrics (values by LU, derivative parts from
/// d(G^-1) = -G^-1 dG G^-1 applied recursively).
JetMetricPair metric_pair_at(const Chart& c, std::span<const double> p, int order,
                             double tol = 1e-10);

/// Inverse of a symmetric matrix field given as a (0,2) jet tensor.
JetTensor invert_jet_matrix(const JetTensor& h);

/// Christoffel symbols Gamma(k, i, j) = Gamma^k_ij of the metric `h` (one jet
/// order lower than h), symmetrised in (i, j).
JetTensor christoffel_from_metric(const JetTensor& h, const JetTensor& h_inv);

/// Curvature of a connection from its coefficients (jet order >= 1):
/// R(i, j, k, l) = R^l_ijk with R(e_i, e_j) e_k = R^l_ijk e_l.
Tensor curvature_from_coefficients(const JetTensor& gamma);

/// Lowers the last (output) slot of R^l_ijk with `metric`: R(X,Y,Z,W) = h(R(X,Y)Z, W).
Tensor lower_curvature(const Tensor& r13, const Tensor& metric);

/// Every structure quantity at a single chart point, expanded to a fixed jet
/// order budget K: the metric pair at order K and everything obtained after
/// one differentiation (Christoffel symbols, nabla0 J, F, theta, Omega) at K-1.
class PointFrame {
 public:
  PointFrame(const Chart& c, std::span<const double> p, int order, double tol = 1e-10);

  const Chart& chart() const noexcept { return chart_; }
  const std::vector<double>& point() const noexcept { return point_; }
  int dim() const noexcept { return chart_.dim(); }
  int n() const noexcept { return chart_.n(); }
  /// Jet order of the metric pair.
  int order() const noexcept { return metric_.order; }
  /// Jet order of the once-differentiated fields (order() - 1).
  int field_order() const noexcept { return metric_.order - 1; }

  const JetMetricPair& metric() const noexcept { return metric_; }
  const MetricPair& values() const noexcept { return metric_.values; }

  /// J truncated to field_order().
  const JetTensor& J() const noexcept { return J_field_; }
  /// Metric and inverse truncated to field_order().
  const JetTensor& metric_field(Which w) const { return w == Which::g ? g_field_ : gt_field_; }
  const JetTensor& inverse_field(Which w) const { return w == Which::g ? g_inv_field_ : gt_inv_field_; }

  /// Gamma(k, i, j) of the Levi-Civita connection of g or g~.
  const JetTensor& christoffel(Which w) const { return w == Which::g ? gamma_ : gamma_tilde_; }
  /// N(i, k, j) = (nabla0_{e_i} J)^k_j.
  const JetTensor& nabla0_J() const noexcept { return nabla0_J_; }
  /// F(i, j, k) = g((nabla0_{e_i} J) e_j, e_k).
  const JetTensor& F() const noexcept { return F_; }
  const JetTensor& theta() const noexcept { return theta_; }
  /// theta(J e_k).
  const JetTensor& theta_J() const noexcept { return theta_J_; }
  /// Omega^a = g^{ab} theta_b.
  const JetTensor& omega() const noexcept { return omega_; }
  /// (J Omega)^a.
  const JetTensor& J_omega() const noexcept { return J_omega_; }

 private:
  Chart chart_;
  std::vector<double> point_;
  JetMetricPair metric_;
  JetTensor J_field_, g_field_, gt_field_, g_inv_field_, gt_inv_field_;
  JetTensor gamma_, gamma_tilde_;
  JetTensor nabla0_J_, F_, theta_, theta_J_, omega_, J_omega_;
};

/// Levi-Civita coefficients of g or g~ at jet order `order` (order + 1 <= 3).
JetTensor levi_civita(const Chart& c, std::span<const double> p, Which which, int order);

Tensor tensor_F(const Chart& c, std::span<const double> p);

struct LieForms {
  Tensor theta;    // (0,1)
  Tensor theta_J;  // (0,1), theta(JX)
  Tensor omega;    // (1,0)
};
LieForms lie_forms(const Chart& c, std::span<const double> p);
LieForms lie_forms(const PointFrame& f);

struct ClassReport {
  double residual_W0 = 0.0;           // max |F|
  double residual_W1 = 0.0;           // max |F - F1(theta)|
  double residual_W2_cyclic = 0.0;    // max |F(X,Y,JZ) + F(Y,Z,JX) + F(Z,X,JY)|
  double residual_theta = 0.0;        // max |theta|
  double residual_W3_cyclic = 0.0;    // max |F(X,Y,Z) + F(Y,Z,X) + F(Z,X,Y)|
  double residual_W12_cyclic = 0.0;   // the W1+W2 (integrability) condition
  double threshold = 0.0;
  bool W0 = false;
  bool W1 = false;
  bool W2 = false;  // cyclic condition and theta = 0, thresholded independently
  bool W3 = false;
  bool W12 = false;
};

ClassReport classify(const PointFrame& f, double threshold);
ClassReport classify(const Chart& c, std::span<const double> p, double threshold);

/// The W1 right-hand side built from theta: F1(X,Y,Z).
Tensor w1_form(const PointFrame& f);

/// (0,4) curvature of the Levi-Civita connection of g (lowered with g) or of
/// g~ (lowered with g~). The frame must have order >= 2.
Tensor curvature_R0(const PointFrame& f, Which which = Which::g);
Tensor curvature_R0(const Chart& c, std::span<const double> p, Which which = Which::g);

struct Nabla0JNorms {
  double norm_sq = 0.0;      // g^{ij} g^{kl} g((nabla_i J) e_k, (nabla_j J) e_l)
  double norm_sq_alt = 0.0;  // 2 g^{il} g^{jk} g((nabla_i J) e_k, (nabla_j J) e_l)
  bool isotropic = false;
};
Nabla0JNorms nabla0J_norms(const PointFrame& f, double tol = 1e-8);
Nabla0JNorms nabla0J_norms(const Chart& c, std::span<const double> p, double tol = 1e-8);

/// N(i, j, k) = N(e_i, e_j)^k with N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y].
Tensor nijenhuis(const PointFrame& f);
Tensor nijenhuis(const Chart& c, std::span<const double> p);

}  // namespace norden
