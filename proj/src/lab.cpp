#include "norden/lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "norden/errors.hpp"

namespace norden {
namespace {

constexpr Variance L = Variance::lower;
constexpr double inf = std::numeric_limits<double>::infinity();

std::string lambda_tag(QFamily f) { return f == QFamily::q1 ? "q1" : "q2"; }

class ReportBuilder {
 public:
  ReportBuilder(std::string id, double tol) { r_.check = std::move(id), r_.tolerance = tol; }

  Detail& add(int point, double residual) {
    r_.details.push_back(Detail{point, residual, {}, {}});
    return r_.details.back();
  }
  void hypothesis(Hypothesis h) { r_.hypothesis = h; }
  void flag_indeterminate() { indeterminate_ = true; }

  CheckReport finish() {
    r_.points_tested = static_cast<int>(r_.details.size());
    bool bad = false;
    for (const auto& d : r_.details) {
      if (std::isnan(d.residual)) bad = true;
      else r_.max_residual = std::max(r_.max_residual, d.residual);
    }
    if (bad) r_.max_residual = inf;
    if (r_.hypothesis == Hypothesis::not_met)
      r_.status = Status::skipped;
    else if (!bad && !indeterminate_ && r_.max_residual <= r_.tolerance)
      r_.status = Status::pass;
    else
      r_.status = Status::fail;
    return std::move(r_);
  }

 private:
  CheckReport r_;
  bool indeterminate_ = false;
};

/// Truth of "residual is zero" at a shared threshold; -1 inside the ambiguous band.
int truth(double r, double tol) {
  if (r < tol / 10.0) return 1;
  if (r > tol * 10.0) return 0;
  return -1;
}

/// Records one point of an A <=> B check. Residual 0 = consistent, 1 = not.
void add_iff(ReportBuilder& b, int point, double a, double bres, double tol) {
  const int ta = truth(a, tol);
  const int tb = truth(bres, tol);
  Detail& d = b.add(point, 0.0);
  d.values = {{"lhs", a}, {"rhs", bres}};
  if (ta < 0 || tb < 0) {
    d.residual = 1.0;
    d.note = "indeterminate";
    b.flag_indeterminate();
  } else if (ta != tb) {
    d.residual = 1.0;
    d.note = "inconsistent";
  }
}

Hypothesis gate(const std::vector<double>& premise, double tol) {
  for (double p : premise)
    if (!(p <= tol)) return Hypothesis::not_met;
  return Hypothesis::met;
}

Tensor jj_twist(const Tensor& r, const Tensor& J) {
  // R(X, Y, JZ, JW)
  const int d = r.dim();
  Tensor t1 = zeros(d, {L, L, L, L});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int w = 0; w < d; ++w) {
          double v = 0.0;
          for (int a = 0; a < d; ++a) v += r(i, j, a, w) * J(a, k);
          t1(i, j, k, w) = v;
        }
  Tensor out = zeros(d, {L, L, L, L});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int w = 0; w < d; ++w) {
          double v = 0.0;
          for (int b = 0; b < d; ++b) v += t1(i, j, k, b) * J(b, w);
          out(i, j, k, w) = v;
        }
  return out;
}

double codazzi_residual(const Tensor& nh) {
  const int d = nh.dim();
  double w = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) w = std::max(w, std::abs(nh(i, j, k) - nh(j, i, k)));
  return w;
}

double full_symmetry_residual(const Tensor& q) {
  const int d = q.dim();
  double w = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        w = std::max({w, std::abs(q(i, j, k) - q(j, i, k)), std::abs(q(i, j, k) - q(i, k, j))});
  return w;
}

/// g((nabla0_x J) z, (nabla0_y J) w) stored (x, z, y, w).
Tensor nabla_j_pairing(const PointFrame& f) {
  const int d = f.dim();
  const Tensor F = values(f.F());
  const Tensor N = values(f.nabla0_J());
  Tensor out = zeros(d, {L, L, L, L});
  for (int x = 0; x < d; ++x)
    for (int z = 0; z < d; ++z)
      for (int y = 0; y < d; ++y)
        for (int w = 0; w < d; ++w) {
          double v = 0.0;
          for (int b = 0; b < d; ++b) v += F(x, z, b) * N(y, b, w);
          out(x, z, y, w) = v;
        }
  return out;
}

/// 1/4 {g((nabla_X J)Z, (nabla_Y J)W) - g((nabla_X J)W, (nabla_Y J)Z)}
Tensor kp_correction(const PointFrame& f) {
  const int d = f.dim();
  const Tensor p = nabla_j_pairing(f);
  Tensor out = zeros(d, {L, L, L, L});
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) out(x, y, z, w) = 0.25 * (p(x, z, y, w) - p(x, w, y, z));
  return out;
}

double theta_omega(const PointFrame& f) {
  const Tensor th = values(f.theta());
  const Tensor om = values(f.omega());
  double v = 0.0;
  for (int i = 0; i < f.dim(); ++i) v += th(i) * om(i);
  return v;
}

double theta_J_omega(const PointFrame& f) {
  const Tensor th = values(f.theta());
  const Tensor jom = values(f.J_omega());
  double v = 0.0;
  for (int i = 0; i < f.dim(); ++i) v += th(i) * jom(i);
  return v;
}

Tensor sym_product(const Tensor& a, const Tensor& b) {
  // a (x) b + b (x) a
  return outer(a, b) + outer(b, a);
}

struct WorstEntry {
  double value = 0.0;
  int i = 0, j = 0;
  void offer(double v, int a, int b) {
    if (v > value || std::isnan(v)) value = v, i = a, j = b;
  }
  std::string at() const { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }
};

}  // namespace

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::unconditional: return "unconditional";
    case Hypothesis::met: return "met";
    case Hypothesis::not_met: return "not-met";
  }
  return "unconditional";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "fail";
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{
      "axioms",  "classify", "prop-2.1", "cor-2.1",  "prop-2.2", "cor-2.2",  "cor-2.3",  "natural",
      "sec-3",   "prop-3.2", "prop-4.1", "cor-4.1",  "prop-4.3", "prop-4.4", "prop-4.6", "isotropic-omega"};
  return ids;
}

bool is_suite(std::string_view id) {
  const auto& ids = suite_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::vector<ConnectionField> default_connections(const std::array<double, 4>& lambda) {
  const StatStructure q1 = q1_family(lambda);
  return {levi_civita_connection(Which::g), levi_civita_connection(Which::g_tilde), lichnerowicz_D(),
          with_offset(levi_civita_connection(Which::g), "q1-offset", q1.q)};
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.status != Status::fail; });
}

// ---------------------------------------------------------------- closed forms

Tensor q1_L_closed_form(const PointFrame& f, const std::array<double, 4>& lam, bool printed) {
  const auto [l1, l2, l3, l4] = lam;
  const MetricPair& m = f.values();
  const Tensor t = values(f.theta());
  const Tensor T = values(f.theta_J());
  const double tO = theta_omega(f);
  const double tJO = theta_J_omega(f);
  const Tensor tt = outer(t, t);
  const Tensor TT = outer(T, T);
  const double cx = l1 * l2 + l1 * l3 - l2 * l4 + l3 * l4;
  Tensor s1 = (l1 * l1 - 2 * l2 * l3 + l3 * l3) * tt + (l2 * l2 + 2 * l1 * l4 + l4 * l4) * TT;
  Tensor s2 = (l3 * l3 - l4 * l4) * (tt - TT);
  if (printed) {
    s1 += cx * (tt + TT);
    s2 -= 2 * l3 * l4 * (tt + TT);
  } else {
    s1 += cx * sym_product(t, T);
    s2 += 2 * l3 * l4 * sym_product(t, T);
  }
  const double a1 = (l1 * l1 - l2 * l2) * tO + 2 * l1 * l2 * tJO;
  const double a2 = (l3 * l3 - l4 * l4) * tO + 2 * l3 * l4 * tJO;
  const double a3 = (l1 * l3 - l2 * l4) * tO + (l1 * l4 + l2 * l3) * tJO;
  return psi1(s1, m) + psi2(s2, m) + a1 * pi1(m) + a2 * pi2(m) - a3 * pi3(m);
}

double q2_alpha(const PointFrame& f, const std::array<double, 4>& lam, bool printed) {
  const auto [l1, l2, l3, l4] = lam;
  const double tO = theta_omega(f);
  const double tJO = theta_J_omega(f);
  const double a = (l3 * l3 - l4 * l4 - l1 * l4 + l2 * l3) * tO;
  return printed ? a - (l1 * l2 + l3 * l4) * tJO : a + (l3 * l4 - l1 * l2) * tJO;
}

Tensor q2_L_closed_form(const PointFrame& f, const std::array<double, 4>& lam, bool printed) {
  const int d = f.dim();
  const Tensor t = values(f.theta());
  const Tensor T = values(f.theta_J());
  const double alpha = q2_alpha(f, lam, printed);
  Tensor b = zeros(d, {L, L});
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) b(x, y) = t(x) * T(y) - T(x) * t(y);
  return alpha * outer(b, b);
}

std::vector<CoefficientRow> closed_form_table() {
  return {
      {"S1: theta(X)theta(Y)", "l1^2 + l3^2 - 2 l2 l3", "l1^2 + l3^2 - 2 l2 l3", true},
      {"S1: theta(JX)theta(JY)", "l2^2 + l4^2 + 2 l1 l4", "l2^2 + l4^2 + 2 l1 l4", true},
      {"S1: cross term", "(l1(l2+l3) + l4(l3-l2)) [theta(X)theta(Y) + theta(JX)theta(JY)]",
       "(l1(l2+l3) + l4(l3-l2)) [theta(X)theta(JY) + theta(JX)theta(Y)]", false},
      {"S2: theta(X)theta(Y) - theta(JX)theta(JY)", "l3^2 - l4^2", "l3^2 - l4^2", true},
      {"S2: second term", "-2 l3 l4 [theta(X)theta(Y) + theta(JX)theta(JY)]",
       "+2 l3 l4 [theta(X)theta(JY) + theta(JX)theta(Y)]", false},
      {"pi1", "(l1^2 - l2^2) theta(Omega) + 2 l1 l2 theta(JOmega)",
       "(l1^2 - l2^2) theta(Omega) + 2 l1 l2 theta(JOmega)", true},
      {"pi2", "(l3^2 - l4^2) theta(Omega) + 2 l3 l4 theta(JOmega)",
       "(l3^2 - l4^2) theta(Omega) + 2 l3 l4 theta(JOmega)", true},
      {"pi3", "-[(l1 l3 - l2 l4) theta(Omega) + (l1 l4 + l2 l3) theta(JOmega)]",
       "-[(l1 l3 - l2 l4) theta(Omega) + (l1 l4 + l2 l3) theta(JOmega)]", true},
      {"alpha: theta(Omega)", "l3^2 - l4^2 - l1 l4 + l2 l3", "l3^2 - l4^2 - l1 l4 + l2 l3", true},
      {"alpha: theta(JOmega)", "-(l1 l2 + l3 l4)", "l3 l4 - l1 l2", false},
  };
}

// ---------------------------------------------------------------- Lab

Lab::Lab(Chart chart, LabConfig config) : chart_(std::move(chart)), config_(config) {
  if (config_.points < 1) throw ArgumentError("points must be at least 1");
  if (!(config_.tol > 0.0)) throw ArgumentError("tol must be positive");
  points_ = sample_points(chart_, config_.points, config_.seed);
  frames_.resize(points_.size());
  for (std::size_t k = 0; k < points_.size(); ++k) {
    try {
      frames_[k].emplace(chart_, points_[k], 2, config_.axiom_tol);
    } catch (const ValidationError& e) {
      if (!frame_error_) frame_error_ = "point " + std::to_string(k) + ": " + e.what();
    } catch (const EvalError& e) {
      if (!frame_error_) frame_error_ = "point " + std::to_string(k) + ": " + e.what();
    }
  }
}

std::vector<CheckReport> Lab::chart_failure(std::string_view id) const {
  ReportBuilder b(std::string(id) + ":chart", config_.tol);
  Detail& d = b.add(0, inf);
  d.note = *frame_error_;
  return {b.finish()};
}

std::vector<CheckReport> Lab::run(std::string_view id) const {
  if (id == "all") {
    std::vector<CheckReport> out;
    for (const auto& s : suite_ids()) {
      auto r = run(s);
      out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    return out;
  }
  if (!is_suite(id)) throw ArgumentError("unknown suite '" + std::string(id) + "'");
  if (id == "axioms") return axioms();
  if (frame_error_) return chart_failure(id);

  auto concat = [](std::vector<CheckReport> a, std::vector<CheckReport> b) {
    a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    return a;
  };
  const auto& lam = config_.lambda;
  if (id == "classify") return classify_suite();
  if (id == "prop-2.1") return prop_2_1(default_connections(lam));
  if (id == "cor-2.1") return concat(cor_2_1(q1_family(lam)), cor_2_1(q2_family(lam)));
  if (id == "prop-2.2") return prop_2_2(default_connections(lam));
  if (id == "cor-2.2") return cor_2_2(default_connections(lam));
  if (id == "cor-2.3") return concat(cor_2_3(q1_family(lam)), cor_2_3(q2_family(lam)));
  if (id == "natural") return natural(default_connections(lam));
  if (id == "sec-3") return section_3();
  if (id == "prop-3.2") return prop_3_2();
  if (id == "prop-4.1") return concat(prop_4_1(q1_family(lam)), prop_4_1(q2_family(lam)));
  if (id == "cor-4.1") return concat(cor_4_1(q1_family(lam)), cor_4_1(q2_family(lam)));
  if (id == "prop-4.3") return prop_4_3(lam);
  if (id == "prop-4.4") return prop_4_4(lam);
  if (id == "prop-4.6") return prop_4_6(lam);
  return isotropic_omega(lam);
}

// ---------------------------------------------------------------- axioms

std::vector<CheckReport> Lab::axioms() const {
  const int d = chart_.dim();
  ReportBuilder sym("axioms:g-symmetric", 1e-12);
  ReportBuilder norden("axioms:norden", config_.axiom_tol);
  ReportBuilder nondeg("axioms:nondegenerate", config_.axiom_tol);
  ReportBuilder sig("axioms:signature", 0.0);
  for (std::size_t k = 0; k < size(); ++k) {
    const int pk = static_cast<int>(k);
    Tensor g = zeros(d, {L, L});
    Tensor J = zeros(d, {Variance::upper, L});
    try {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          g(i, j) = chart_.g(i, j).eval(points_[k]);
          J(i, j) = chart_.J(i, j).eval(points_[k]);
        }
    } catch (const EvalError& e) {
      for (ReportBuilder* b : {&sym, &norden, &nondeg, &sig}) b->add(pk, inf).note = e.what();
      continue;
    }
    WorstEntry ws, wj, wc;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        ws.offer(std::abs(g(i, j) - g(j, i)), i, j);
        double jj = i == j ? 1.0 : 0.0;
        double c = g(i, j);
        for (int a = 0; a < d; ++a) {
          jj += J(i, a) * J(a, j);
          for (int b = 0; b < d; ++b) c += J(a, i) * g(a, b) * J(b, j);
        }
        wj.offer(std::abs(jj), i, j);
        wc.offer(std::abs(c), i, j);
      }
    Detail& dsym = sym.add(pk, ws.value);
    if (ws.value > 0.0) dsym.note = "worst g entry " + ws.at();
    Detail& dn = norden.add(pk, std::max(wj.value, wc.value));
    dn.values = {{"J^2+I", wj.value}, {"g(J.,J.)+g", wc.value}};
    if (std::max(wj.value, wc.value) > 0.0)
      dn.note = wj.value >= wc.value ? "worst J^2+I entry " + wj.at() : "worst g(J.,J.)+g entry " + wc.at();
    try {
      const MatrixInverse inv = invert_matrix(g.components(), d);
      double r = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double v = i == j ? -1.0 : 0.0;
          for (int a = 0; a < d; ++a) v += g(i, a) * inv.inverse[static_cast<std::size_t>(a * d + j)];
          r = std::max(r, std::abs(v));
        }
      Detail& dd = nondeg.add(pk, r);
      dd.values = {{"condition", inv.condition}};
    } catch (const ValidationError& e) {
      nondeg.add(pk, inf).note = e.what();
    }
    const auto [pos, neg] = signature(g.components(), d);
    Detail& ds = sig.add(pk, pos == chart_.n() && neg == chart_.n() ? 0.0 : 1.0);
    ds.values = {{"positive", pos}, {"negative", neg}};
  }
  std::vector<CheckReport> out{sym.finish(), norden.finish(), nondeg.finish(), sig.finish()};
  if (frame_error_) {
    auto f = chart_failure("axioms");
    out.push_back(std::move(f.front()));
    return out;
  }

  ReportBuilder twin("axioms:twin-norden", config_.axiom_tol);
  ReportBuilder fsym("axioms:F-symmetry", config_.tol);
  ReportBuilder fdef("axioms:F=nabla0-g~", config_.tol);
  ReportBuilder lc("axioms:nabla0-g", config_.strict_tol());
  ReportBuilder lct("axioms:nabla0~-g~", config_.strict_tol());
  ReportBuilder r0("axioms:R0-curvature-like", config_.tol);
  ReportBuilder jet("axioms:jet-consistency", config_.axiom_tol);
  const ConnectionField lc0 = levi_civita_connection(Which::g);
  const ConnectionField lc1 = levi_civita_connection(Which::g_tilde);
  for (std::size_t k = 0; k < size(); ++k) {
    const int pk = static_cast<int>(k);
    const PointFrame& f = frame(k);
    const MetricPair& m = f.values();
    const Tensor gt = values(f.metric_field(Which::g_tilde));
    double tw = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double c = gt(i, j);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) c += m.J(a, i) * gt(a, b) * m.J(b, j);
        tw = std::max({tw, std::abs(c), std::abs(gt(i, j) - gt(j, i))});
      }
    twin.add(pk, tw);

    const Tensor F = values(f.F());
    double fs = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z) {
          double fj = 0.0;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) fj += F(x, a, b) * m.J(a, y) * m.J(b, z);
          fs = std::max({fs, std::abs(F(x, y, z) - F(x, z, y)), std::abs(fj - F(x, y, z))});
        }
    fsym.add(pk, fs);
    fdef.add(pk, max_abs_diff(F, metric_derivative(lc0, f, Which::g_tilde)));
    lc.add(pk, max_abs(metric_derivative(lc0, f, Which::g)));
    lct.add(pk, max_abs(metric_derivative(lc1, f, Which::g_tilde)));
    r0.add(pk, is_curvature_like(curvature_R0(f), config_.tol).max_residual);

    const JetMetricPair direct = metric_pair_at(chart_, points_[k], 1, config_.axiom_tol);
    const JetMetricPair& full = f.metric();
    double jr = 0.0;
    auto cmp = [&](const JetTensor& a, const JetTensor& b) {
      const JetTensor ta = truncated(a, 1);
      for (std::size_t i = 0; i < ta.size(); ++i) {
        jr = std::max(jr, std::abs(ta.flat(i).value() - b.flat(i).value()));
        for (int c = 0; c < d; ++c) jr = std::max(jr, std::abs(ta.flat(i).grad(c) - b.flat(i).grad(c)));
      }
    };
    cmp(full.g, direct.g);
    cmp(full.J, direct.J);
    cmp(full.g_inv, direct.g_inv);
    cmp(full.g_tilde_inv, direct.g_tilde_inv);
    jet.add(pk, jr);
  }
  for (ReportBuilder* b : {&twin, &fsym, &fdef, &lc, &lct, &r0, &jet}) out.push_back(b->finish());
  return out;
}

// ---------------------------------------------------------------- classify

std::vector<CheckReport> Lab::classify_suite() const {
  const double thr = config_.tol;
  ReportBuilder incl("classify:W0-inclusion", thr);
  ReportBuilder integ("classify:integrable", thr);
  std::vector<double> w0, w12;
  for (std::size_t k = 0; k < size(); ++k) {
    const int pk = static_cast<int>(k);
    const PointFrame& f = frame(k);
    const ClassReport c = classify(f, thr);
    w0.push_back(c.residual_W0);
    w12.push_back(c.residual_W12_cyclic);
    Detail& d = incl.add(pk, std::max({c.residual_W1, c.residual_W2_cyclic, c.residual_theta, c.residual_W3_cyclic,
                                       c.residual_W12_cyclic}));
    d.values = {{"W0", c.residual_W0},         {"W1", c.residual_W1},
                {"W2_cyclic", c.residual_W2_cyclic}, {"theta", c.residual_theta},
                {"W3_cyclic", c.residual_W3_cyclic}, {"W12_cyclic", c.residual_W12_cyclic}};
    Detail& n = integ.add(pk, max_abs(nijenhuis(f)));
    n.values = {{"W12_cyclic", c.residual_W12_cyclic}};
  }
  incl.hypothesis(gate(w0, thr));
  integ.hypothesis(gate(w12, thr));
  return {incl.finish(), integ.finish()};
}

// ---------------------------------------------------------------- section 2

std::vector<CheckReport> Lab::prop_2_1(const std::vector<ConnectionField>& conns) const {
  std::vector<CheckReport> out;
  const int d = chart_.dim();
  const double tol = config_.tol;
  for (const auto& nabla : conns) {
    const std::string tag = "@" + nabla.label();
    const ConnectionField star_g = conjugate_metric(nabla, Which::g);
    const ConnectionField star_gt = conjugate_metric(nabla, Which::g_tilde);
    ReportBuilder ident("prop-2.1:identity" + tag, tol);
    ReportBuilder a("prop-2.1:a" + tag, tol);
    ReportBuilder b("prop-2.1:b" + tag, tol);
    ReportBuilder c("prop-2.1:c" + tag, tol);
    std::vector<double> pa, pb, pc;
    for (std::size_t k = 0; k < size(); ++k) {
      const int pk = static_cast<int>(k);
      const PointFrame& f = frame(k);
      const Tensor G = values(nabla.coefficients(f));
      const Tensor Gs = values(star_g.coefficients(f));
      const Tensor g = values(f.metric_field(Which::g));
      const Tensor gt = values(f.metric_field(Which::g_tilde));
      const JetTensor& gtj = f.metric().g_tilde;
      const Tensor nj = J_derivative(nabla, f);
      // X g~(Y,Z) - g~(nabla_X Y, Z) - g~(Y, nabla*_X Z) - g((nabla_X J) Y, Z)
      double r = 0.0;
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
          for (int z = 0; z < d; ++z) {
            double v = gtj(y, z).grad(x);
            for (int l = 0; l < d; ++l) v -= G(l, x, y) * gt(l, z) + gt(y, l) * Gs(l, x, z) + nj(x, l, y) * g(l, z);
            r = std::max(r, std::abs(v));
          }
      ident.add(pk, r);

      const double nJ = max_abs(nj);
      const double cg = metric_conjugacy_residual(nabla, star_g, f, Which::g);
      const double cgt_of_g = metric_conjugacy_residual(nabla, star_g, f, Which::g_tilde);
      const double cgt = metric_conjugacy_residual(nabla, star_gt, f, Which::g_tilde);
      const double cg_of_gt = metric_conjugacy_residual(nabla, star_gt, f, Which::g);
      pa.push_back(std::max(cg, cgt_of_g));
      pb.push_back(std::max(cg, nJ));
      pc.push_back(std::max(cgt, nJ));
      Detail& da = a.add(pk, nJ);
      da.values = {{"g-conjugate", cg}, {"g~-conjugate", cgt_of_g}};
      Detail& db = b.add(pk, cgt_of_g);
      db.values = {{"g-conjugate", cg}, {"nabla J", nJ}};
      Detail& dc = c.add(pk, cg_of_gt);
      dc.values = {{"g~-conjugate", cgt}, {"nabla J", nJ}};
    }
    a.hypothesis(gate(pa, tol));
    b.hypothesis(gate(pb, tol));
    c.hypothesis(gate(pc, tol));
    out.push_back(ident.finish());
    out.push_back(a.finish());
    out.push_back(b.finish());
    out.push_back(c.finish());
  }
  return out;
}

std::vector<CheckReport> Lab::cor_2_1(const StatStructure& s) const {
  const double tol = config_.tol;
  ReportBuilder b("cor-2.1@" + lambda_tag(s.family), tol);
  for (std::size_t k = 0; k < size(); ++k) {
    const PointFrame& f = frame(k);
    const double codazzi = codazzi_residual(metric_derivative(s.nabla, f, Which::g_tilde));
    const double conj = metric_conjugacy_residual(s.nabla, s.nabla_star, f, Which::g_tilde);
    const double nJ = max_abs(J_derivative(s.nabla, f));
    add_iff(b, static_cast<int>(k), std::max(codazzi, conj), nJ, tol);
  }
  return {b.finish()};
}

std::vector<CheckReport> Lab::prop_2_2(const std::vector<ConnectionField>& conns) const {
  std::vector<CheckReport> out;
  const double tol = config_.tol;
  for (const auto& nabla : conns) {
    ReportBuilder i("prop-2.2:i@" + nabla.label(), tol);
    ReportBuilder ii("prop-2.2:ii@" + nabla.label(), tol);
    const ConnectionField cj = conjugate_complex(nabla);
    const ConnectionField cg = conjugate_metric(nabla, Which::g);
    const ConnectionField cgt = conjugate_metric(nabla, Which::g_tilde);
    for (std::size_t k = 0; k < size(); ++k) {
      const PointFrame& f = frame(k);
      add_iff(i, static_cast<int>(k), coefficient_distance(cg, cj, f),
              max_abs(metric_derivative(nabla, f, Which::g_tilde)), tol);
      add_iff(ii, static_cast<int>(k), coefficient_distance(cgt, cj, f),
              max_abs(metric_derivative(nabla, f, Which::g)), tol);
    }
    out.push_back(i.finish());
    out.push_back(ii.finish());
  }
  return out;
}

std::vector<CheckReport> Lab::cor_2_2(const std::vector<ConnectionField>& conns) const {
  std::vector<CheckReport> out;
  const double tol = config_.tol;
  const double strict = config_.strict_tol();
  const ConnectionField lc = levi_civita_connection(Which::g);
  const ConnectionField lct = levi_civita_connection(Which::g_tilde);
  {
    ReportBuilder i("cor-2.2:i", strict);
    ReportBuilder ii("cor-2.2:ii", strict);
    for (std::size_t k = 0; k < size(); ++k) {
      const PointFrame& f = frame(k);
      const double ai = coefficient_distance(conjugate_metric(lct, Which::g), conjugate_complex(lct), f);
      const double bi = max_abs(metric_derivative(lct, f, Which::g_tilde));
      Detail& di = i.add(static_cast<int>(k), std::max(ai, bi));
      di.values = {{"conjugates", ai}, {"nabla g~", bi}};
      const double aii = coefficient_distance(conjugate_metric(lc, Which::g_tilde), conjugate_complex(lc), f);
      const double bii = max_abs(metric_derivative(lc, f, Which::g));
      Detail& dii = ii.add(static_cast<int>(k), std::max(aii, bii));
      dii.values = {{"conjugates", aii}, {"nabla g", bii}};
    }
    out.push_back(i.finish());
    out.push_back(ii.finish());
  }
  for (const auto& nabla : conns) {
    ReportBuilder i("cor-2.2:i-iff@" + nabla.label(), tol);
    ReportBuilder ii("cor-2.2:ii-iff@" + nabla.label(), tol);
    std::vector<double> tors;
    for (std::size_t k = 0; k < size(); ++k) {
      const PointFrame& f = frame(k);
      tors.push_back(max_abs(torsion(nabla, f)));
      add_iff(i, static_cast<int>(k),
              coefficient_distance(conjugate_metric(nabla, Which::g), conjugate_complex(nabla), f),
              coefficient_distance(nabla, lct, f), tol);
      add_iff(ii, static_cast<int>(k),
              coefficient_distance(conjugate_metric(nabla, Which::g_tilde), conjugate_complex(nabla), f),
              coefficient_distance(nabla, lc, f), tol);
    }
    i.hypothesis(gate(tors, config_.axiom_tol));
    ii.hypothesis(gate(tors, config_.axiom_tol));
    out.push_back(i.finish());
    out.push_back(ii.finish());
  }
  return out;
}

std::vector<CheckReport> Lab::cor_2_3(const StatStructure& s) const {
  const double tol = config_.tol;
  const std::string tag = "@" + lambda_tag(s.family);
  ReportBuilder i("cor-2.3:i" + tag, tol);
  ReportBuilder ii("cor-2.3:ii" + tag, tol);
  std::vector<double> pi, pii;
  for (std::size_t k = 0; k < size(); ++k) {
    const int pk = static_cast<int>(k);
    const PointFrame& f = frame(k);
    const double tors = std::max(max_abs(torsion(s.nabla, f)), max_abs(torsion(s.nabla_star, f)));
    const double jconj = complex_conjugacy_residual(s.nabla, s.nabla_star, f);
    const double stat_g = std::max(
        {tors, codazzi_residual(metric_derivative(s.nabla, f, Which::g)),
         metric_conjugacy_residual(s.nabla, s.nabla_star, f, Which::g)});
    const double stat_gt = std::max(
        {tors, codazzi_residual(metric_derivative(s.nabla, f, Which::g_tilde)),
         metric_conjugacy_residual(s.nabla, s.nabla_star, f, Which::g_tilde)});
    pi.push_back(std::max(stat_g, jconj));
    pii.push_back(std::max(stat_gt, jconj));
    const double kahler = max_abs(values(f.F()));
    Detail& di = i.add(pk, kahler);
    di.values = {{"statistical", stat_g}, {"J-conjugate", jconj}};
    Detail& dii = ii.add(pk, kahler);
    dii.values = {{"statistical", stat_gt}, {"J-conjugate", jconj}};
  }
  if (config_.force_hypothesis) {
    i.hypothesis(Hypothesis::met);
    ii.hypothesis(Hypothesis::met);
  } else {
    i.hypothesis(gate(pi, tol));
    ii.hypothesis(gate(pii, tol));
  }
  return {i.finish(), ii.finish()};
}

std::vector<CheckReport> Lab::natural(const std::vector<ConnectionField>& conns) const {
  std::vector<CheckReport> out;
  const double tol = config_.tol;
  for (const auto& nabla : conns) {
    ReportBuilder b("natural@" + nabla.label(), tol);
    const ConnectionField cg = conjugate_metric(nabla, Which::g);
    const ConnectionField cgt = conjugate_metric(nabla, Which::g_tilde);
    const ConnectionField cj = conjugate_complex(nabla);
    for (std::size_t k = 0; k < size(); ++k) {
      const PointFrame& f = frame(k);
      const double a = std::max(coefficient_distance(cgt, cg, f), coefficient_distance(cj, cg, f));
      const double ng = max_abs(metric_derivative(nabla, f, Which::g));
      const double ngt = max_abs(metric_derivative(nabla, f, Which::g_tilde));
      const double nJ = max_abs(J_derivative(nabla, f));
      add_iff(b, static_cast<int>(k), a, std::max({ng, ngt, nJ}), tol);
    }
    out.push_back(b.finish());
  }
  {
    const ConnectionField D = lichnerowicz_D();
    ReportBuilder b("natural:D", config_.strict_tol());
    const ConnectionField cg = conjugate_metric(D, Which::g);
    const ConnectionField cgt = conjugate_metric(D, Which::g_tilde);
    const ConnectionField cj = conjugate_complex(D);
    for (std::size_t k = 0; k < size(); ++k) {
      const PointFrame& f = frame(k);
      const double sg = coefficient_distance(cg, D, f);
      const double sgt = coefficient_distance(cgt, D, f);
      const double sj = coefficient_distance(cj, D, f);
      const double ng = max_abs(metric_derivative(D, f, Which::g));
      const double ngt = max_abs(metric_derivative(D, f, Which::g_tilde));
      const double nJ = max_abs(J_derivative(D, f));
      Detail& d = b.add(static_cast<int>(k), std::max({sg, sgt, sj, ng, ngt, nJ}));
      d.values = {{"g-self", sg}, {"g~-self", sgt}, {"J-self", sj}, {"Dg", ng}, {"Dg~", ngt}, {"DJ", nJ}};
    }
    out.push_back(b.finish());
  }
  return out;
}

// ---------------------------------------------------------------- section 3

std::vector<CheckReport> Lab::section_3() const {
  const int d = chart_.dim();
  const int n = chart_.n();
  const double tol = config_.tol;
  const double stacked = config_.stacked_tol();
  const ConnectionField lc = levi_civita_connection(Which::g);
  const ConnectionField lct = levi_civita_connection(Which::g_tilde);
  const ConnectionField star = conjugate_complex(lc);
  const ConnectionField star_t = conjugate_complex(lct);
  const ConnectionField D = lichnerowicz_D();
  ReportBuilder jr("sec-3:JR*=R0J", tol);
  ReportBuilder jrt("sec-3:JR~*=R~0J", tol);
  ReportBuilder conj("sec-3:nabla*-conjugate", config_.strict_tol());
  ReportBuilder metric("sec-3:nabla*g=0", config_.strict_tol());
  ReportBuilder pk("sec-3:P-kahler", tol);
  ReportBuilder pe("sec-3:P", tol);
  ReportBuilder dnat("sec-3:D-natural", config_.strict_tol());
  ReportBuilder davg("sec-3:D-average", config_.strict_tol());
  ReportBuilder kd("sec-3:K(D)", tol);
  ReportBuilder kp("sec-3:KP", tol);
  ReportBuilder alt("sec-3:norm-alt", tol);
  ReportBuilder tkp("sec-3:tKP", stacked);
  ReportBuilder w1("sec-3:W1-theta", stacked);
  ReportBuilder c31("sec-3:cor-3.1", stacked);
  std::vector<double> w12, w1res, w1or2;
  for (std::size_t k = 0; k < size(); ++k) {
    const int p = static_cast<int>(k);
    const PointFrame& f = frame(k);
    const MetricPair& m = f.values();
    const Tensor J = m.J;
    const ClassReport cls = classify(f, tol);
    w12.push_back(cls.residual_W12_cyclic);
    w1res.push_back(cls.residual_W1);
    w1or2.push_back(std::min(cls.residual_W1, std::max(cls.residual_W2_cyclic, cls.residual_theta)));

    const Curvature R0 = curvature(lc, f);
    const Curvature Rs = curvature(star, f);
    auto jr_residual = [&](const Tensor& rs13, const Tensor& r013) {
      double w = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int a = 0; a < d; ++a)
            for (int l = 0; l < d; ++l) {
              double lhs = 0.0, rhs = 0.0;
              for (int q = 0; q < d; ++q) {
                lhs += J(l, q) * rs13(i, j, a, q);
                rhs += r013(i, j, q, l) * J(q, a);
              }
              w = std::max(w, std::abs(lhs - rhs));
            }
      return w;
    };
    jr.add(p, jr_residual(Rs.R_1_3, R0.R_1_3));
    jrt.add(p, jr_residual(curvature(star_t, f).R_1_3, curvature(lct, f).R_1_3));
    const double c_gt = metric_conjugacy_residual(lc, star, f, Which::g_tilde);
    const double c_j = complex_conjugacy_residual(lc, star, f);
    Detail& dc = conj.add(p, std::max(c_gt, c_j));
    dc.values = {{"g~", c_gt}, {"J", c_j}};
    metric.add(p, max_abs(metric_derivative(star, f, Which::g)));

    const Tensor P = 0.5 * (R0.R_0_4 + Rs.R_0_4);
    const Tensor Pform = 0.5 * (R0.R_0_4 - jj_twist(R0.R_0_4, J));
    pk.add(p, is_kahler_tensor(P, m, tol).max_residual);
    pe.add(p, max_abs_diff(P, Pform));

    const double ng = max_abs(metric_derivative(D, f, Which::g));
    const double ngt = max_abs(metric_derivative(D, f, Which::g_tilde));
    const double nJ = max_abs(J_derivative(D, f));
    Detail& dn = dnat.add(p, std::max({ng, ngt, nJ}));
    dn.values = {{"Dg", ng}, {"Dg~", ngt}, {"DJ", nJ}};
    davg.add(p, coefficient_distance(D, average(lc, star), f));

    const Tensor K = curvature(D, f).R_0_4;
    const Tensor corr = kp_correction(f);
    kd.add(p, max_abs_diff(K, Pform + corr));
    kp.add(p, max_abs_diff(K, P + corr));

    const Nabla0JNorms norms = nabla0J_norms(f, tol);
    Detail& da = alt.add(p, std::abs(norms.norm_sq - norms.norm_sq_alt));
    da.values = {{"norm_sq", norms.norm_sq}, {"norm_sq_alt", norms.norm_sq_alt}};

    const double tauK = ricci_scalar(K, m).tau;
    const double tauP = ricci_scalar(P, m).tau;
    const double tO = theta_omega(f);
    Detail& dt = tkp.add(p, std::abs(tauK - tauP - (norms.norm_sq - 2.0 * tO) / 8.0));
    dt.values = {{"tau(K)", tauK}, {"tau(P)", tauP}, {"norm_sq", norms.norm_sq}, {"theta(Omega)", tO}};
    Detail& dw = w1.add(p, std::abs(tO - 0.5 * n * norms.norm_sq));
    dw.values = {{"theta(Omega)", tO}, {"norm_sq", norms.norm_sq}};
    add_iff(c31, p, std::abs(norms.norm_sq), std::abs(tauK - tauP), stacked);
  }
  alt.hypothesis(gate(w12, tol));
  tkp.hypothesis(gate(w12, tol));
  w1.hypothesis(gate(w1res, tol));
  c31.hypothesis(d >= 4 ? gate(w1or2, tol) : Hypothesis::not_met);
  std::vector<CheckReport> out;
  for (ReportBuilder* b : {&jr, &jrt, &conj, &metric, &pk, &pe, &dnat, &davg, &kd, &kp, &alt, &tkp, &w1, &c31})
    out.push_back(b->finish());
  return out;
}

std::vector<CheckReport> Lab::prop_3_2() const {
  const int d = chart_.dim();
  const int n = chart_.n();
  const double tol = config_.tol;
  const double stacked = config_.stacked_tol();
  const ConnectionField lc = levi_civita_connection(Which::g);
  const ConnectionField lct = levi_civita_connection(Which::g_tilde);
  const ConnectionField star = conjugate_complex(lc);
  const ConnectionField star_t = conjugate_complex(lct);
  ReportBuilder rs("prop-3.2:R*", stacked);
  ReportBuilder rts("prop-3.2:R~*", stacked);
  ReportBuilder ncl("prop-3.2:not-curvature-like", tol);
  std::vector<double> w1;
  for (std::size_t k = 0; k < size(); ++k) {
    const int p = static_cast<int>(k);
    const PointFrame& f = frame(k);
    const MetricPair& m = f.values();
    w1.push_back(classify(f, tol).residual_W1);
    const Tensor J = m.J;
    const Tensor th = values(f.theta());
    const Tensor dth = covariant_derivative(lc, f.theta(), f);
    Tensor S = zeros(d, {L, L});
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        double v = 0.0;
        for (int a = 0; a < d; ++a) v += dth(x, a) * J(a, y);
        S(x, y) = v + th(x) * th(y) / (2.0 * n);
      }
    Tensor Sh = zeros(d, {L, L});
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        double v = 0.0;
        for (int a = 0; a < d; ++a) v += S(x, a) * J(a, y);
        Sh(x, y) = -v;
      }
    const Tensor pis = pi1(m) + pi2(m);
    const double tO = theta_omega(f);
    const double tJO = theta_J_omega(f);

    const Curvature R0 = curvature(lc, f);
    const Curvature Rs = curvature(star, f);
    const Tensor rhs = R0.R_0_4 - (1.0 / (2.0 * n)) * (psi1(S, m) + psi2(S, m)) - (tO / (4.0 * n * n)) * pis;
    Detail& d1 = rs.add(p, max_abs_diff(Rs.R_0_4, rhs));
    d1.values = {{"theta(Omega)", tO}};

    const Tensor gt = m.g_tilde;
    const Tensor Rt0 = lower_curvature(curvature(lct, f).R_1_3, gt);
    const Tensor Rts = lower_curvature(curvature(star_t, f).R_1_3, gt);
    const Tensor rhs_t = Rt0 - (1.0 / (2.0 * n)) * (psi1(Sh, m) + psi2(Sh, m)) - (tJO / (4.0 * n * n)) * pis;
    Detail& d2 = rts.add(p, max_abs_diff(Rts, rhs_t));
    d2.values = {{"theta(JOmega)", tJO}};

    const double cl = std::max(is_curvature_like(Rs.R_0_4, tol).max_residual, is_curvature_like(Rts, tol).max_residual);
    add_iff(ncl, p, cl, max_abs(values(f.F())), tol);
  }
  rs.hypothesis(gate(w1, tol));
  rts.hypothesis(gate(w1, tol));
  ncl.hypothesis(gate(w1, tol));
  return {rs.finish(), rts.finish(), ncl.finish()};
}

// ---------------------------------------------------------------- section 4

std::vector<CheckReport> Lab::prop_4_1(const StatStructure& s) const {
  const int d = chart_.dim();
  const double tol = config_.tol;
  const double strict = config_.strict_tol();
  const std::string tag = "@" + lambda_tag(s.family);
  const ConnectionField lc = levi_civita_connection(Which::g);
  ReportBuilder sym("prop-4.1:Q-symmetric" + tag, strict);
  ReportBuilder ng("prop-4.1:nabla-g=-2Q" + tag, strict);
  ReportBuilder cod("prop-4.1:codazzi" + tag, strict);
  ReportBuilder tor("prop-4.1:torsion-free" + tag, config_.axiom_tol);
  ReportBuilder conj("prop-4.1:conjugate" + tag, strict);
  ReportBuilder avg("prop-4.1:average=nabla0" + tag, strict);
  ReportBuilder cub("prop-4.1:cubic-form" + tag, strict);
  ReportBuilder cc("prop-4.1:conjugate-curvature" + tag, tol);
  ReportBuilder r3("prop-4.1:R3" + tag, tol);
  ReportBuilder r4("prop-4.1:R4" + tag, config_.axiom_tol);
  ReportBuilder lcl("prop-4.1:L-curvature-like" + tag, config_.axiom_tol);
  ReportBuilder prl("prop-4.1:PRL" + tag, tol);
  ReportBuilder flat("prop-4.1:flat" + tag, tol);
  std::vector<double> flatness;
  for (std::size_t k = 0; k < size(); ++k) {
    const int p = static_cast<int>(k);
    const PointFrame& f = frame(k);
    const Tensor Q = s.q_lowered(f);
    sym.add(p, full_symmetry_residual(Q));
    const Tensor nabla_g = metric_derivative(s.nabla, f, Which::g);
    ng.add(p, max_abs(nabla_g + 2.0 * Q));
    cod.add(p, std::max(codazzi_residual(nabla_g), codazzi_residual(metric_derivative(s.nabla_star, f, Which::g))));
    tor.add(p, std::max(max_abs(torsion(s.nabla, f)), max_abs(torsion(s.nabla_star, f))));
    conj.add(p, metric_conjugacy_residual(s.nabla, s.nabla_star, f, Which::g));
    avg.add(p, coefficient_distance(average(s.nabla, s.nabla_star), lc, f));
    const CubicForm C = cubic_form(s, f);
    Detail& dcub = cub.add(p, std::max(max_abs_diff(C.from_difference, C.from_metric), max_abs(C.from_difference + 2.0 * Q)));
    dcub.values = {{"paths", max_abs_diff(C.from_difference, C.from_metric)}};

    const Curvature R = curvature(s.nabla, f);
    const Curvature Rs = curvature(s.nabla_star, f);
    const Tensor R0 = curvature_R0(f);
    double w = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z)
          for (int v = 0; v < d; ++v) w = std::max(w, std::abs(R.R_0_4(x, y, z, v) + Rs.R_0_4(x, y, v, z)));
    cc.add(p, w);

    // (nabla0_X Q)(Y,Z,W) with Q lowered as a jet field
    const JetTensor qj = s.q(f);
    const JetTensor& gj = f.metric_field(Which::g);
    JetTensor qlj(d, {L, L, L}, Jet::constant(0.0, d, f.field_order()));
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z) {
          Jet acc = Jet::constant(0.0, d, f.field_order());
          for (int a = 0; a < d; ++a) acc += qj(a, x, y) * gj(a, z);
          qlj(x, y, z) = acc;
        }
    const Tensor dQ = covariant_derivative(lc, qlj, f);
    double r3w = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z)
          for (int v = 0; v < d; ++v)
            r3w = std::max(r3w, std::abs(dQ(x, y, z, v) - dQ(y, x, z, v) -
                                         0.5 * (R.R_0_4(x, y, z, v) - Rs.R_0_4(x, y, z, v))));
    r3.add(p, r3w);

    const Tensor Lq = L_from_Q(s, f);
    r4.add(p, max_abs_diff(Lq, L_from_Q_nested(s, f)));
    lcl.add(p, is_curvature_like(Lq, config_.axiom_tol).max_residual);
    const Tensor P = 0.5 * (R.R_0_4 + Rs.R_0_4);
    prl.add(p, max_abs_diff(P, R0 + Lq));
    flatness.push_back(std::max(max_abs(R.R_0_4), max_abs(Rs.R_0_4)));
    Detail& df = flat.add(p, max_abs(R0 + Lq));
    df.values = {{"R", max_abs(R.R_0_4)}, {"R*", max_abs(Rs.R_0_4)}};
  }
  flat.hypothesis(gate(flatness, tol));
  std::vector<CheckReport> out;
  for (ReportBuilder* b : {&sym, &ng, &cod, &tor, &conj, &avg, &cub, &cc, &r3, &r4, &lcl, &prl, &flat})
    out.push_back(b->finish());
  return out;
}

std::vector<CheckReport> Lab::cor_4_1(const StatStructure& s) const {
  const double tol = config_.tol;
  ReportBuilder b("cor-4.1@" + lambda_tag(s.family), tol);
  if (chart_.dim() < 4) {
    b.hypothesis(Hypothesis::not_met);
    return {b.finish()};
  }
  for (std::size_t k = 0; k < size(); ++k) {
    const PointFrame& f = frame(k);
    const MetricPair& m = f.values();
    const Tensor R0 = curvature_R0(f);
    const Tensor P = 0.5 * (curvature(s.nabla, f).R_0_4 + curvature(s.nabla_star, f).R_0_4);
    add_iff(b, static_cast<int>(k), max_abs_diff(weyl(P, m), weyl(R0, m)), max_abs(weyl(L_from_Q(s, f), m)), tol);
  }
  return {b.finish()};
}

std::vector<CheckReport> Lab::prop_4_4(const std::array<double, 4>& lambda) const {
  const std::array<double, 4> lam{lambda[0], lambda[1], 0.0, 0.0};
  const StatStructure s = q1_family(lam);
  ReportBuilder b("prop-4.4", config_.tol);
  for (std::size_t k = 0; k < size(); ++k) {
    const PointFrame& f = frame(k);
    const MetricPair& m = f.values();
    const Tensor P = 0.5 * (curvature(s.nabla, f).R_0_4 + curvature(s.nabla_star, f).R_0_4);
    Detail& d = b.add(static_cast<int>(k), max_abs_diff(weyl(P, m), weyl(curvature_R0(f), m)));
    d.values = {{"lambda1", lam[0]}, {"lambda2", lam[1]}};
  }
  return {b.finish()};
}

std::vector<CheckReport> Lab::prop_4_3(const std::array<double, 4>& lambda) const {
  const StatStructure s = q1_family(lambda);
  ReportBuilder b("prop-4.3", config_.tol);
  for (std::size_t k = 0; k < size(); ++k) {
    const PointFrame& f = frame(k);
    const Tensor oracle = L_from_Q(s, f);
    const double printed = max_abs_diff(oracle, q1_L_closed_form(f, lambda, true));
    Detail& d = b.add(static_cast<int>(k), max_abs_diff(oracle, q1_L_closed_form(f, lambda, false)));
    d.values = {{"printed_residual", printed}};
    if (printed > config_.tol) d.note = "typeset S1 cross term and S2 second term disagree with the oracle";
  }
  return {b.finish()};
}

std::vector<CheckReport> Lab::prop_4_6(const std::array<double, 4>& lambda) const {
  const StatStructure s = q2_family(lambda);
  ReportBuilder b("prop-4.6", config_.tol);
  for (std::size_t k = 0; k < size(); ++k) {
    const PointFrame& f = frame(k);
    const Tensor oracle = L_from_Q(s, f);
    const double printed = max_abs_diff(oracle, q2_L_closed_form(f, lambda, true));
    Detail& d = b.add(static_cast<int>(k), max_abs_diff(oracle, q2_L_closed_form(f, lambda, false)));
    d.values = {{"alpha", q2_alpha(f, lambda, false)},
                {"alpha_printed", q2_alpha(f, lambda, true)},
                {"printed_residual", printed}};
    if (printed > config_.tol) d.note = "typeset alpha has the wrong sign on l3 l4 theta(JOmega)";
  }
  return {b.finish()};
}

std::vector<CheckReport> Lab::isotropic_omega(const std::array<double, 4>& lambda) const {
  const double tol = config_.tol;
  const StatStructure s = q2_family(lambda);
  ReportBuilder b("isotropic-omega", tol);
  std::vector<double> premise;
  for (std::size_t k = 0; k < size(); ++k) {
    const PointFrame& f = frame(k);
    const double tO = theta_omega(f);
    const double tJO = theta_J_omega(f);
    premise.push_back(std::max(std::abs(tO), std::abs(tJO)));
    const Tensor Lq = L_from_Q(s, f);
    const Tensor P = 0.5 * (curvature(s.nabla, f).R_0_4 + curvature(s.nabla_star, f).R_0_4);
    Detail& d = b.add(static_cast<int>(k), std::max(max_abs(Lq), max_abs_diff(P, curvature_R0(f))));
    d.values = {{"theta(Omega)", tO}, {"theta(JOmega)", tJO}};
  }
  b.hypothesis(gate(premise, tol));
  return {b.finish()};
}

}  // namespace norden
