#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace norden {

/// Truncated Taylor scalar in `dim` variables.
///
/// Stores the value and the dense partial derivatives up to `order` (at most
/// 3): gradient, Hessian, and third-derivative tensor. Derivative tensors are
/// kept exactly symmetric: every mixed partial is computed once on the sorted
/// index tuple and copied to its permutations.
///
/// Coordinates are 0-based in this API. Mixing jets of different dim or order
/// throws ArgumentError. Non-finite parts are allowed to propagate through the
/// arithmetic; `checked()` turns them into an EvalError at extraction time.
class Jet {
 public:
  static constexpr int max_order = 3;

  /// Constant jet, all derivative parts zero.
  static Jet constant(double c, int dim, int order);
  /// Seed for coordinate `index`: value x, gradient e_index.
  static Jet coordinate(int index, double x, int dim, int order);
  /// From raw storage [value | gradient | Hessian | third] (row-major blocks).
  /// Entries on sorted index tuples are authoritative and copied to their permutations.
  static Jet from_storage(int dim, int order, std::vector<double> data);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }

  double value() const noexcept { return data_[0]; }
  double grad(int i) const { return data_[1 + i]; }
  double hess(int i, int j) const { return data_[hess_offset() + i * dim_ + j]; }
  double third(int i, int j, int k) const {
    return data_[third_offset() + (i * dim_ + j) * dim_ + k];
  }

  std::span<const double> gradient() const;
  /// Row-major dim x dim.
  std::span<const double> hessian() const;
  /// Row-major dim x dim x dim.
  std::span<const double> third_derivative() const;

  /// The jet of the partial derivative along `index`, one order lower.
  Jet partial(int index) const;
  /// Drop all parts above `order` (must not exceed the current order).
  Jet truncated(int order) const;

  bool is_finite() const noexcept;
  /// Returns *this, or throws EvalError if any part is NaN or infinite.
  const Jet& checked(const char* what = "jet") const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return -a + c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(const Jet& a, double c);
  friend Jet operator/(double c, const Jet& a);

  /// Applies a univariate function given its derivatives f, f', f'', f''' at value().
  Jet compose(double f0, double f1, double f2, double f3) const;

  /// Exact equality of shape and every stored part.
  bool operator==(const Jet& other) const = default;

 private:
  Jet(int dim, int order);
  std::size_t hess_offset() const noexcept { return 1 + static_cast<std::size_t>(dim_); }
  std::size_t third_offset() const noexcept {
    return hess_offset() + static_cast<std::size_t>(dim_) * dim_;
  }
  void require_same_shape(const Jet& other, const char* op) const;

  int dim_ = 0;
  int order_ = 0;
  std::vector<double> data_;
};

std::size_t jet_storage_size(int dim, int order);

Jet pow(const Jet& a, int exponent);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);

/// Zero jet with the shape of `like`; the generic tensor code uses this to seed sums.
inline Jet zero_like(const Jet& like) { return Jet::constant(0.0, like.dim(), like.order()); }
inline double zero_like(double) { return 0.0; }

}  // namespace norden
