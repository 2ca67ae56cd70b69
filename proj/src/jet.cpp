#include "norden/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "norden/errors.hpp"

namespace norden {

namespace {

void require_shape(int dim, int order) {
  if (dim < 2) throw ArgumentError("jet dimension must be at least 2, got " + std::to_string(dim));
  if (order < 0 || order > Jet::max_order)
    throw ArgumentError("jet order must be in 0..3, got " + std::to_string(order));
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

[[noreturn]] void domain_error(const char* fn, double x, const char* domain) {
  throw EvalError(std::string(fn) + ": argument " + format_value(x) + " outside domain (" +
                  domain + ")");
}

}  // namespace

std::size_t jet_storage_size(int dim, int order) {
  std::size_t n = 1;
  std::size_t block = 1;
  for (int k = 1; k <= order; ++k) {
    block *= static_cast<std::size_t>(dim);
    n += block;
  }
  return n;
}

Jet::Jet(int dim, int order) : dim_(dim), order_(order), data_(jet_storage_size(dim, order), 0.0) {}

Jet Jet::constant(double c, int dim, int order) {
  require_shape(dim, order);
  Jet j(dim, order);
  j.data_[0] = c;
  return j;
}

Jet Jet::coordinate(int index, double x, int dim, int order) {
  require_shape(dim, order);
  if (index < 0 || index >= dim)
    throw ArgumentError("coordinate index " + std::to_string(index) + " out of range for dim " +
                        std::to_string(dim));
  Jet j(dim, order);
  j.data_[0] = x;
  if (order >= 1) j.data_[1 + index] = 1.0;
  return j;
}

Jet Jet::from_storage(int dim, int order, std::vector<double> data) {
  require_shape(dim, order);
  if (data.size() != jet_storage_size(dim, order))
    throw ArgumentError("jet storage size mismatch");
  Jet j(dim, order);
  j.data_ = std::move(data);
  const int n = dim;
  if (order >= 2) {
    const std::size_t h = j.hess_offset();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) j.data_[h + b * n + a] = j.data_[h + a * n + b];
  }
  if (order >= 3) {
    const std::size_t t = j.third_offset();
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c) {
          const double v = j.data_[t + (a * n + b) * n + c];
          const int idx[3] = {a, b, c};
          int p[3] = {0, 1, 2};
          do {
            j.data_[t + (idx[p[0]] * n + idx[p[1]]) * n + idx[p[2]]] = v;
          } while (std::next_permutation(p, p + 3));
        }
  }
  return j;
}

std::span<const double> Jet::gradient() const {
  if (order_ < 1) return {};
  return {data_.data() + 1, static_cast<std::size_t>(dim_)};
}

std::span<const double> Jet::hessian() const {
  if (order_ < 2) return {};
  return {data_.data() + hess_offset(), static_cast<std::size_t>(dim_) * dim_};
}

std::span<const double> Jet::third_derivative() const {
  if (order_ < 3) return {};
  return {data_.data() + third_offset(), static_cast<std::size_t>(dim_) * dim_ * dim_};
}

Jet Jet::partial(int index) const {
  if (order_ < 1) throw ArgumentError("cannot differentiate an order-0 jet");
  if (index < 0 || index >= dim_) throw ArgumentError("partial: index out of range");
  Jet d(dim_, order_ - 1);
  d.data_[0] = grad(index);
  if (order_ >= 2)
    for (int j = 0; j < dim_; ++j) d.data_[1 + j] = hess(index, j);
  if (order_ >= 3)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) d.data_[d.hess_offset() + j * dim_ + k] = third(index, j, k);
  return d;
}

Jet Jet::truncated(int order) const {
  if (order < 0 || order > order_) throw ArgumentError("truncated: order must not exceed current");
  Jet t(dim_, order);
  std::copy_n(data_.begin(), t.data_.size(), t.data_.begin());
  return t;
}

bool Jet::is_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

const Jet& Jet::checked(const char* what) const {
  if (!is_finite()) throw EvalError(std::string("non-finite result in ") + what);
  return *this;
}

void Jet::require_same_shape(const Jet& other, const char* op) const {
  if (dim_ != other.dim_ || order_ != other.order_)
    throw ArgumentError(std::string("jet ") + op + ": shape mismatch (dim " +
                        std::to_string(dim_) + "/" + std::to_string(other.dim_) + ", order " +
                        std::to_string(order_) + "/" + std::to_string(other.order_) + ")");
}

Jet& Jet::operator+=(const Jet& other) {
  require_same_shape(other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_same_shape(other, "sub");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }
Jet& Jet::operator/=(const Jet& other) { return *this = *this / other; }

Jet& Jet::operator+=(double c) {
  data_[0] += c;
  return *this;
}

Jet& Jet::operator-=(double c) {
  data_[0] -= c;
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (double& v : r.data_) v = -v;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same_shape(b, "mul");
  const int n = a.dim_;
  Jet r(n, a.order_);
  const double av = a.value();
  const double bv = b.value();
  r.data_[0] = av * bv;
  if (a.order_ >= 1)
    for (int i = 0; i < n; ++i) r.data_[1 + i] = a.grad(i) * bv + av * b.grad(i);
  if (a.order_ >= 2) {
    const std::size_t h = r.hess_offset();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v =
            a.hess(i, j) * bv + a.grad(i) * b.grad(j) + a.grad(j) * b.grad(i) + av * b.hess(i, j);
        r.data_[h + i * n + j] = v;
        r.data_[h + j * n + i] = v;
      }
  }
  if (a.order_ >= 3) {
    const std::size_t t = r.third_offset();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const double v = a.third(i, j, k) * bv + a.hess(i, j) * b.grad(k) +
                           a.hess(i, k) * b.grad(j) + a.hess(j, k) * b.grad(i) +
                           a.grad(i) * b.hess(j, k) + a.grad(j) * b.hess(i, k) +
                           a.grad(k) * b.hess(i, j) + av * b.third(i, j, k);
          const int idx[3] = {i, j, k};
          int p[3] = {0, 1, 2};
          do {
            r.data_[t + (idx[p[0]] * n + idx[p[1]]) * n + idx[p[2]]] = v;
          } while (std::next_permutation(p, p + 3));
        }
  }
  return r;
}

Jet Jet::compose(double f0, double f1, double f2, double f3) const {
  const int n = dim_;
  Jet r(n, order_);
  r.data_[0] = f0;
  if (order_ >= 1)
    for (int i = 0; i < n; ++i) r.data_[1 + i] = f1 * grad(i);
  if (order_ >= 2) {
    const std::size_t h = r.hess_offset();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = f2 * grad(i) * grad(j) + f1 * hess(i, j);
        r.data_[h + i * n + j] = v;
        r.data_[h + j * n + i] = v;
      }
  }
  if (order_ >= 3) {
    const std::size_t t = r.third_offset();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const double v =
              f3 * grad(i) * grad(j) * grad(k) +
              f2 * (hess(i, j) * grad(k) + hess(i, k) * grad(j) + hess(j, k) * grad(i)) +
              f1 * third(i, j, k);
          const int idx[3] = {i, j, k};
          int p[3] = {0, 1, 2};
          do {
            r.data_[t + (idx[p[0]] * n + idx[p[1]]) * n + idx[p[2]]] = v;
          } while (std::next_permutation(p, p + 3));
        }
  }
  return r;
}

namespace {

Jet reciprocal(const Jet& b) {
  const double x = b.value();
  if (x == 0.0) throw EvalError("division by zero");
  const double r = 1.0 / x;
  return b.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

}  // namespace

Jet operator/(const Jet& a, const Jet& b) {
  a.require_same_shape(b, "div");
  return a * reciprocal(b);
}

Jet operator/(const Jet& a, double c) {
  if (c == 0.0) throw EvalError("division by zero");
  Jet r = a;
  for (double& v : r.data_) v /= c;
  return r;
}

Jet operator/(double c, const Jet& a) { return reciprocal(a) * c; }

Jet pow(const Jet& a, int exponent) {
  const double x = a.value();
  if (exponent == 0) return Jet::constant(1.0, a.dim(), a.order());
  if (exponent < 0 && x == 0.0)
    throw EvalError("int_pow: zero base with negative exponent " + std::to_string(exponent));
  // f^(k) = n(n-1)...(n-k+1) x^(n-k); the falling factorial vanishes for k > n >= 0.
  double f[4];
  double falling = 1.0;
  for (int k = 0; k <= 3; ++k) {
    f[k] = falling == 0.0 ? 0.0 : falling * std::pow(x, exponent - k);
    falling *= static_cast<double>(exponent - k);
  }
  return a.compose(f[0], f[1], f[2], f[3]);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

Jet tan(const Jet& a) {
  const double x = a.value();
  if (std::abs(std::cos(x)) < 1e-15) domain_error("tan", x, "cos != 0");
  const double t = std::tan(x);
  const double sec2 = 1.0 + t * t;
  return a.compose(t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t));
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) domain_error("log", x, "> 0");
  const double r = 1.0 / x;
  return a.compose(std::log(x), r, -r * r, 2.0 * r * r * r);
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) domain_error("sqrt", x, "> 0");
  const double s = std::sqrt(x);
  return a.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(s, c, s, c);
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(c, s, c, s);
}

Jet tanh(const Jet& a) {
  const double t = std::tanh(a.value());
  const double d = 1.0 - t * t;
  return a.compose(t, d, -2.0 * t * d, d * (6.0 * t * t - 2.0));
}

}  // namespace norden
