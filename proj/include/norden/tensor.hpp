#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "norden/errors.hpp"
#include "norden/jet.hpp"

namespace norden {

enum class Variance : unsigned char { lower, upper };

/// Dense tensor of rank r over a `dim`-dimensional space, components stored
/// row-major with slot 0 slowest. Each slot carries its variance.
///
/// Scalar is double for pointwise tensors and Jet for tensor fields expanded
/// to some jet order around a point.
template <class Scalar>
class BasicTensor {
 public:
  BasicTensor() = default;

  BasicTensor(int dim, std::vector<Variance> variance, Scalar fill)
      : dim_(dim), variance_(std::move(variance)) {
    if (dim < 1) throw ArgumentError("tensor dimension must be positive");
    std::size_t n = 1;
    for (std::size_t i = 0; i < variance_.size(); ++i) n *= static_cast<std::size_t>(dim);
    data_.assign(n, fill);
  }

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(variance_.size()); }
  Variance variance(int slot) const { return variance_.at(static_cast<std::size_t>(slot)); }
  const std::vector<Variance>& variances() const noexcept { return variance_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <class... Idx>
  Scalar& operator()(Idx... idx) {
    return data_[offset(idx...)];
  }
  template <class... Idx>
  const Scalar& operator()(Idx... idx) const {
    return data_[offset(idx...)];
  }

  Scalar& flat(std::size_t i) { return data_[i]; }
  const Scalar& flat(std::size_t i) const { return data_[i]; }
  std::vector<Scalar>& components() noexcept { return data_; }
  const std::vector<Scalar>& components() const noexcept { return data_; }

  /// Multi-index of flat position `i` (slot 0 first).
  std::vector<int> unflatten(std::size_t i) const {
    std::vector<int> idx(variance_.size());
    for (int s = rank() - 1; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(i % static_cast<std::size_t>(dim_));
      i /= static_cast<std::size_t>(dim_);
    }
    return idx;
  }
  std::size_t flatten(const std::vector<int>& idx) const {
    std::size_t off = 0;
    for (int k : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(k);
    return off;
  }

  bool same_shape(const BasicTensor& other) const {
    return dim_ == other.dim_ && variance_ == other.variance_;
  }

  BasicTensor& operator+=(const BasicTensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  BasicTensor& operator-=(const BasicTensor& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  BasicTensor& operator*=(double c) {
    for (auto& v : data_) v *= c;
    return *this;
  }
  friend BasicTensor operator+(BasicTensor a, const BasicTensor& b) { return a += b; }
  friend BasicTensor operator-(BasicTensor a, const BasicTensor& b) { return a -= b; }
  friend BasicTensor operator*(BasicTensor a, double c) { return a *= c; }
  friend BasicTensor operator*(double c, BasicTensor a) { return a *= c; }

  void require_same_shape(const BasicTensor& o) const {
    if (!same_shape(o)) throw ArgumentError("tensor shape mismatch");
  }

 private:
  template <class... Idx>
  std::size_t offset(Idx... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<Scalar> data_;
};

using Tensor = BasicTensor<double>;
using JetTensor = BasicTensor<Jet>;

inline Tensor zeros(int dim, std::vector<Variance> variance) {
  return Tensor(dim, std::move(variance), 0.0);
}

/// Largest absolute component; the residual measure used throughout.
double max_abs(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);

/// Pointwise values of a jet tensor field.
Tensor values(const JetTensor& t);
/// Jet tensor with every component truncated to `order`.
JetTensor truncated(const JetTensor& t, int order);
/// Order-0 jets holding the given values; dim is the jet dimension.
JetTensor as_constant_jets(const Tensor& t, int jet_dim, int order);

/// Einstein summation over one upper and one lower slot (0-based slots).
template <class S>
BasicTensor<S> contract(const BasicTensor<S>& t, int slot_a, int slot_b) {
  const int r = t.rank();
  if (slot_a < 0 || slot_a >= r || slot_b < 0 || slot_b >= r || slot_a == slot_b)
    throw ArgumentError("contract: slot out of range");
  if (t.variance(slot_a) == t.variance(slot_b))
    throw ArgumentError("contract: slots have the same variance; use contract_with_metric");
  std::vector<Variance> rest;
  for (int s = 0; s < r; ++s)
    if (s != slot_a && s != slot_b) rest.push_back(t.variance(s));
  const S zero = zero_like(t.flat(0));
  BasicTensor<S> out(t.dim(), rest, zero);
  std::vector<int> full(static_cast<std::size_t>(r));
  for (std::size_t o = 0; o < out.size(); ++o) {
    const std::vector<int> idx = out.unflatten(o);
    std::size_t k = 0;
    for (int s = 0; s < r; ++s)
      if (s != slot_a && s != slot_b) full[static_cast<std::size_t>(s)] = idx[k++];
    S acc = zero;
    for (int m = 0; m < t.dim(); ++m) {
      full[static_cast<std::size_t>(slot_a)] = m;
      full[static_cast<std::size_t>(slot_b)] = m;
      acc += t.flat(t.flatten(full));
    }
    out.flat(o) = acc;
  }
  return out;
}

/// Tensor product; slots of `a` come first.
template <class S>
BasicTensor<S> outer(const BasicTensor<S>& a, const BasicTensor<S>& b) {
  if (a.dim() != b.dim()) throw ArgumentError("outer: dimension mismatch");
  std::vector<Variance> var = a.variances();
  var.insert(var.end(), b.variances().begin(), b.variances().end());
  BasicTensor<S> out(a.dim(), var, zero_like(a.flat(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out.flat(i * b.size() + j) = a.flat(i) * b.flat(j);
  return out;
}

/// out(idx) = t(idx permuted): slot s of the result is slot perm[s] of `t`.
template <class S>
BasicTensor<S> permute_slots(const BasicTensor<S>& t, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != t.rank()) throw ArgumentError("permute_slots: wrong length");
  std::vector<Variance> var;
  for (int p : perm) var.push_back(t.variance(p));
  BasicTensor<S> out(t.dim(), var, t.flat(0));
  std::vector<int> src(perm.size());
  for (std::size_t o = 0; o < out.size(); ++o) {
    const std::vector<int> idx = out.unflatten(o);
    for (std::size_t s = 0; s < perm.size(); ++s) src[static_cast<std::size_t>(perm[s])] = idx[s];
    out.flat(o) = t.flat(t.flatten(src));
  }
  return out;
}

/// Point values of the structure tensors of an almost Norden manifold.
///
/// g and g_tilde are (0,2); g_inv and g_tilde_inv are (2,0); J is (1,1)
/// stored as J(i, j) = J^i_j, i.e. J e_j = J(i, j) e_i.
struct MetricPair {
  Tensor g;
  Tensor g_tilde;
  Tensor g_inv;
  Tensor g_tilde_inv;
  Tensor J;

  int dim() const { return g.dim(); }

  /// Builds g_tilde = g J and both inverses, then validates every invariant
  /// (symmetry, J^2 = -I, g(J., J.) = -g, g g_inv = I, neutral signature) at `tol`.
  static MetricPair build(const Tensor& g, const Tensor& J, double tol = 1e-10);
};

struct MatrixInverse {
  std::vector<double> inverse;  // row-major
  double condition = 0.0;       // 1-norm condition number
};

/// Dense LU with partial pivoting. Throws ValidationError when singular or
/// when the condition number exceeds `max_condition`.
MatrixInverse invert_matrix(const std::vector<double>& a, int n, double max_condition = 1e8);

/// Number of (positive, negative) eigenvalues of a symmetric matrix.
std::pair<int, int> signature(const std::vector<double>& symmetric, int n);

enum class IndexMove { raise, lower };

/// Raises (with g_inv) or lowers (with g) the index in `slot`; the slot keeps its position.
Tensor move_index(const Tensor& t, int slot, IndexMove direction, const MetricPair& m);

/// Kulkarni-Nomizu product (A o B)(X,Y,Z,W) =
///   A(Y,Z)B(X,W) - A(X,Z)B(Y,W) + A(X,W)B(Y,Z) - A(Y,W)B(X,Z).
Tensor kulkarni_nomizu(const Tensor& a, const Tensor& b);

/// S~(X,Y) = S(X,JY).
Tensor twist(const Tensor& s, const MetricPair& m);

struct PsiPiFamily {
  Tensor psi1;  // g o S
  Tensor psi2;  // g~ o S~
  Tensor pi1;   // psi1(g) / 2
  Tensor pi2;   // psi2(g) / 2
  Tensor pi3;   // -psi1(g~)
};

Tensor psi1(const Tensor& s, const MetricPair& m);
Tensor psi2(const Tensor& s, const MetricPair& m);
Tensor pi1(const MetricPair& m);
Tensor pi2(const MetricPair& m);
Tensor pi3(const MetricPair& m);
PsiPiFamily psi_pi_family(const Tensor& s, const MetricPair& m);

struct SymmetryResidual {
  bool holds = false;
  double max_residual = 0.0;
};

/// Antisymmetry in (1,2) and (3,4) plus the first Bianchi identity.
SymmetryResidual is_curvature_like(const Tensor& l, double tol);
/// L(X,Y,JZ,JW) = -L(X,Y,Z,W).
SymmetryResidual is_kahler_tensor(const Tensor& l, const MetricPair& m, double tol);

struct RicciScalar {
  Tensor rho;
  double tau = 0.0;
};

/// rho(X,Y) = g^{ij} L(e_i,X,Y,e_j), tau = g^{ij} rho(e_i,e_j).
RicciScalar ricci_scalar(const Tensor& l, const MetricPair& m);

/// Weyl part relative to psi1(rho) and pi1; dimension must be at least 4.
Tensor weyl(const Tensor& l, const MetricPair& m);

/// Full contraction of two (0,k) tensors with g_inv on every slot pair.
double inner_product(const Tensor& a, const Tensor& b, const MetricPair& m);

/// Residual of a (0,2) tensor's symmetry, used as a precondition check.
double symmetry_residual(const Tensor& s);

std::string describe_variance(const std::vector<Variance>& v);

}  // namespace norden
