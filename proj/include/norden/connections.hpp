#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "norden/manifold.hpp"

namespace norden {

/// A linear connection given by its coefficients Gamma(k, i, j) = Gamma^k_ij,
/// i.e. nabla_{e_i} e_j = Gamma^k_ij e_k, evaluated on a PointFrame at the
/// frame's field order.
class ConnectionField {
 public:
  enum class Source { levi_civita_g, levi_civita_g_tilde, explicit_offset };
  using Rule = std::function<JetTensor(const PointFrame&)>;

  ConnectionField(std::string label, Source source, Rule rule);

  const std::string& label() const noexcept { return label_; }
  Source source() const noexcept { return source_; }

  JetTensor coefficients(const PointFrame& f) const { return (*rule_)(f); }
  /// Gamma - Gamma0 as a (1,2) field.
  JetTensor difference(const PointFrame& f) const;

 private:
  std::string label_;
  Source source_;
  std::shared_ptr<const Rule> rule_;
};

ConnectionField levi_civita_connection(Which which = Which::g);

/// nabla* with X h(Y,Z) = h(nabla_X Y, Z) + h(Y, nabla*_X Z), h = g or g~.
ConnectionField conjugate_metric(const ConnectionField& nabla, Which which);
/// nabla*_X Y = -J nabla_X (JY).
ConnectionField conjugate_complex(const ConnectionField& nabla);
ConnectionField average(const ConnectionField& a, const ConnectionField& b);
/// Gamma = base + Q with Q(k, i, j) = Q^k_ij supplied per frame.
ConnectionField with_offset(const ConnectionField& base, std::string label, ConnectionField::Rule q);
/// D_X Y = nabla0_X Y - 1/2 J (nabla0_X J) Y.
ConnectionField lichnerowicz_D();

struct Curvature {
  Tensor R_1_3;  // R(i, j, k, l) = R^l_ijk
  Tensor R_0_4;  // lowered with g
};
Curvature curvature(const ConnectionField& nabla, const PointFrame& f);

/// nabla T with the new covariant slot first: out(i, ...) = (nabla_{e_i} T)(...).
/// T must carry jets of order >= 1.
Tensor covariant_derivative(const ConnectionField& nabla, const JetTensor& t, const PointFrame& f);
Tensor covariant_derivative(const JetTensor& gamma, const JetTensor& t);

/// (nabla_i h)(j, k) for h = g or g~.
Tensor metric_derivative(const ConnectionField& nabla, const PointFrame& f, Which which);
/// (nabla_i J)^k_j stored (i, k, j).
Tensor J_derivative(const ConnectionField& nabla, const PointFrame& f);
/// T^k_ij = Gamma^k_ij - Gamma^k_ji stored (k, i, j).
Tensor torsion(const ConnectionField& nabla, const PointFrame& f);

/// max |X h(Y,Z) - h(nabla_X Y, Z) - h(Y, nabla*_X Z)| over coordinate triples.
double metric_conjugacy_residual(const ConnectionField& nabla, const ConnectionField& nabla_star,
                                 const PointFrame& f, Which which);
/// max |Gamma* - (complex conjugate of nabla)|.
double complex_conjugacy_residual(const ConnectionField& nabla, const ConnectionField& nabla_star,
                                  const PointFrame& f);
double coefficient_distance(const ConnectionField& a, const ConnectionField& b, const PointFrame& f);

enum class QFamily { q1, q2 };

/// Statistical structure nabla = nabla0 + Q, nabla* = nabla0 - Q.
struct StatStructure {
  QFamily family = QFamily::q1;
  std::array<double, 4> lambda{};
  ConnectionField::Rule q;  // Q^k_ij stored (k, i, j)
  ConnectionField nabla;
  ConnectionField nabla_star;

  /// Q(X,Y,Z) = g(Q(X,Y), Z) at the frame point.
  Tensor q_lowered(const PointFrame& f) const;
};

/// Q1 rule built from theta, theta o J, Omega, J Omega, g and g~.
StatStructure q1_family(const std::array<double, 4>& lambda);
/// Q2 rule, cubic in theta.
StatStructure q2_family(const std::array<double, 4>& lambda);
StatStructure stat_structure(QFamily family, const std::array<double, 4>& lambda);

struct CubicForm {
  Tensor from_difference;  // g(nabla*_X Y - nabla_X Y, Z)
  Tensor from_metric;      // (nabla_X g)(Y, Z)
};
CubicForm cubic_form(const StatStructure& s, const PointFrame& f);

/// L(X,Y,Z,W) = g(Q(X,W), Q(Y,Z)) - g(Q(X,Z), Q(Y,W)).
Tensor L_from_Q(const StatStructure& s, const PointFrame& f);
/// Q(X, Q(Y,Z), W) evaluated directly on the lowered Q (the other side of the symmetric rewrite).
Tensor L_from_Q_nested(const StatStructure& s, const PointFrame& f);

}  // namespace norden
