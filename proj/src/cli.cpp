#include "norden/cli.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include <CLI11.hpp>

#include "norden/errors.hpp"
#include "norden/io.hpp"

namespace norden {
namespace {

struct Options {
  std::string file;
  int points = 16;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::string lambda = "0.3,-0.7,0.2,0.5";
  std::string suite = "all";
  bool json = false;
  std::string name;
  int n = 2;
  std::string u = "x1*x2";
};

std::array<double, 4> parse_lambda(const std::string& text) {
  std::array<double, 4> out{};
  std::size_t pos = 0;
  for (int k = 0; k < 4; ++k) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string part = text.substr(pos, end - pos);
    const char* b = part.data();
    const char* e = b + part.size();
    while (b < e && *b == ' ') ++b;
    if (b < e && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, out[static_cast<std::size_t>(k)]);
    if (ec != std::errc() || ptr != e) throw InputError("--lambda: '" + part + "' is not a number");
    if (k < 3 && end == text.size()) throw InputError("--lambda: expected four comma-separated numbers");
    pos = end + 1;
  }
  if (pos <= text.size()) throw InputError("--lambda: expected four comma-separated numbers");
  return out;
}

LabConfig lab_config(const Options& o) {
  if (o.points < 1) throw InputError("--points must be at least 1");
  if (!(o.tol > 0.0)) throw InputError("--tol must be positive");
  LabConfig c;
  c.points = o.points;
  c.seed = o.seed;
  c.tol = o.tol;
  c.lambda = parse_lambda(o.lambda);
  return c;
}

Chart load_chart(const std::string& path) { return to_chart(load_manifold_file(path), path); }

void emit(const Options& o, std::ostream& out, const std::vector<CheckReport>& reports) {
  if (o.json) out << reports_to_json(reports);
  else print_reports(out, reports);
}

int cmd_validate(const Options& o, std::ostream& out) {
  const LabConfig cfg = lab_config(o);
  const Lab lab(load_chart(o.file), cfg);
  const auto reports = lab.run("axioms");
  emit(o, out, reports);
  return all_passed(reports) ? 0 : 1;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  const LabConfig cfg = lab_config(o);
  const Chart chart = load_chart(o.file);
  std::vector<ClassReport> reports;
  for (const auto& p : sample_points(chart, cfg.points, cfg.seed)) {
    try {
      reports.push_back(classify(PointFrame(chart, p, 2, cfg.axiom_tol), cfg.tol));
    } catch (const ValidationError& e) {
      err << "classify: " << e.what() << "\n";
      return 1;
    } catch (const EvalError& e) {
      err << "classify: " << e.what() << "\n";
      return 1;
    }
  }
  if (o.json) out << class_reports_to_json(reports);
  else print_class_reports(out, reports);
  return 0;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.suite != "all" && !is_suite(o.suite)) {
    err << "unknown suite '" << o.suite << "'; valid ids: all";
    for (const auto& s : suite_ids()) err << ", " << s;
    err << "\n";
    return 2;
  }
  const LabConfig cfg = lab_config(o);
  const Lab lab(load_chart(o.file), cfg);
  const auto reports = lab.run(o.suite);
  emit(o, out, reports);
  return all_passed(reports) ? 0 : 1;
}

int cmd_builtin(const Options& o, std::ostream& out) {
  if (o.n != 2 && o.n != 3) throw InputError("--n must be 2 or 3");
  if (o.name == "flat-kahler") {
    out << manifold_to_json(to_manifold_file(flat_kahler(o.n)));
    return 0;
  }
  if (o.name == "conformal-flat") {
    try {
      (void)parse(o.u, 2 * o.n);
    } catch (const ParseError& e) {
      throw InputError(std::string("--u: ") + e.what());
    }
    out << manifold_to_json(to_manifold_file(conformal_flat(o.n, o.u)));
    return 0;
  }
  throw InputError("unknown builtin '" + o.name + "'; expected flat-kahler or conformal-flat");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for almost Norden manifolds", "nordenlab"};
  app.require_subcommand(1);
  Options o;

  auto add_sampling = [&o](CLI::App* c) {
    c->add_option("--points", o.points, "sample points")->capture_default_str();
    c->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
    c->add_option("--tol", o.tol, "base tolerance")->capture_default_str();
    c->add_flag("--json", o.json, "machine-readable output on stdout");
  };
  auto* validate = app.add_subcommand("validate", "check the almost Norden axioms of a manifold file");
  validate->add_option("file", o.file, "manifold JSON file")->required();
  add_sampling(validate);

  auto* classify_cmd = app.add_subcommand("classify", "class residuals at every sample point");
  classify_cmd->add_option("file", o.file, "manifold JSON file")->required();
  add_sampling(classify_cmd);

  auto* check = app.add_subcommand("check", "run verification suites");
  check->add_option("file", o.file, "manifold JSON file")->required();
  add_sampling(check);
  check->add_option("--suite", o.suite, "suite id or all")->capture_default_str();
  check->add_option("--lambda", o.lambda, "a,b,c,d")->capture_default_str()->allow_extra_args(false);

  auto* builtin = app.add_subcommand("builtin", "print a builtin chart as a manifold file");
  builtin->add_option("name", o.name, "flat-kahler or conformal-flat")->required();
  builtin->add_option("--n", o.n, "half dimension (2 or 3)")->capture_default_str();
  builtin->add_option("--u", o.u, "conformal exponent u(x)")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (classify_cmd->parsed()) return cmd_classify(o, out, err);
    if (check->parsed()) return cmd_check(o, out, err);
    return cmd_builtin(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace norden
