#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "norden/connections.hpp"

namespace norden {

enum class Hypothesis { unconditional, met, not_met };
enum class Status { pass, fail, skipped };

std::string_view to_string(Hypothesis h);
std::string_view to_string(Status s);

/// One sampled point of a check.
struct Detail {
  int point = 0;
  double residual = 0.0;
  /// Named auxiliary numbers (lhs / rhs of a biconditional, printed-form residual, ...).
  std::vector<std::pair<std::string, double>> values;
  std::string note;
};

struct CheckReport {
  std::string check;
  Hypothesis hypothesis = Hypothesis::unconditional;
  int points_tested = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Status status = Status::fail;
  std::vector<Detail> details;
};

struct LabConfig {
  int points = 16;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::array<double, 4> lambda{0.3, -0.7, 0.2, 0.5};
  double axiom_tol = 1e-10;
  /// Treat the Kaehler-forcing hypothesis of cor-2.3 as met (negative probe).
  bool force_hypothesis = false;

  /// Identities that must hold one decade tighter (metricity, symmetry of Q).
  double strict_tol() const { return tol / 10.0; }
  /// Identities that stack two curvature computations.
  double stacked_tol() const { return tol * 10.0; }
};

/// Stable suite identifiers in run order.
const std::vector<std::string>& suite_ids();
bool is_suite(std::string_view id);

/// Connections exercised by the section-2 suites.
std::vector<ConnectionField> default_connections(const std::array<double, 4>& lambda);

/// Closed form of L for the Q1 family (printed = as typeset, otherwise the
/// form that agrees with g(Q(X,W),Q(Y,Z)) - g(Q(X,Z),Q(Y,W))).
Tensor q1_L_closed_form(const PointFrame& f, const std::array<double, 4>& lambda, bool printed);
/// alpha of the Q2 closed form L = alpha B(X,Y) B(Z,W), B = theta ^ theta o J.
double q2_alpha(const PointFrame& f, const std::array<double, 4>& lambda, bool printed);
Tensor q2_L_closed_form(const PointFrame& f, const std::array<double, 4>& lambda, bool printed);

struct CoefficientRow {
  std::string tensor;
  std::string printed;
  std::string derived;
  bool agrees = false;
};
/// Per-coefficient comparison of the typeset and the derived closed forms.
std::vector<CoefficientRow> closed_form_table();

/// Runs suites on one chart at the configured sample points.
class Lab {
 public:
  Lab(Chart chart, LabConfig config);

  const Chart& chart() const noexcept { return chart_; }
  const LabConfig& config() const noexcept { return config_; }
  const std::vector<std::vector<double>>& points() const noexcept { return points_; }
  /// First frame error, if the chart could not be evaluated at some point.
  const std::optional<std::string>& frame_error() const noexcept { return frame_error_; }

  /// `id` is a suite id or "all". Throws ArgumentError on unknown ids.
  std::vector<CheckReport> run(std::string_view id) const;

  std::vector<CheckReport> axioms() const;
  std::vector<CheckReport> classify_suite() const;
  std::vector<CheckReport> prop_2_1(const std::vector<ConnectionField>& conns) const;
  std::vector<CheckReport> cor_2_1(const StatStructure& s) const;
  std::vector<CheckReport> prop_2_2(const std::vector<ConnectionField>& conns) const;
  std::vector<CheckReport> cor_2_2(const std::vector<ConnectionField>& conns) const;
  std::vector<CheckReport> cor_2_3(const StatStructure& s) const;
  std::vector<CheckReport> natural(const std::vector<ConnectionField>& conns) const;
  std::vector<CheckReport> section_3() const;
  std::vector<CheckReport> prop_3_2() const;
  std::vector<CheckReport> prop_4_1(const StatStructure& s) const;
  std::vector<CheckReport> cor_4_1(const StatStructure& s) const;
  std::vector<CheckReport> prop_4_3(const std::array<double, 4>& lambda) const;
  std::vector<CheckReport> prop_4_4(const std::array<double, 4>& lambda) const;
  std::vector<CheckReport> prop_4_6(const std::array<double, 4>& lambda) const;
  std::vector<CheckReport> isotropic_omega(const std::array<double, 4>& lambda) const;

 private:
  const PointFrame& frame(std::size_t k) const { return *frames_[k]; }
  std::size_t size() const noexcept { return points_.size(); }
  std::vector<CheckReport> chart_failure(std::string_view id) const;

  Chart chart_;
  LabConfig config_;
  std::vector<std::vector<double>> points_;
  std::vector<std::optional<PointFrame>> frames_;
  std::optional<std::string> frame_error_;
};

/// True when no report failed (skipped is not a failure).
bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace norden
