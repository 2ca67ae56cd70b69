#include "norden/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "norden/errors.hpp"

namespace norden {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void fail(std::string_view source, const std::string& where, const std::string& what) {
  std::string msg(source);
  if (!where.empty()) msg += ": " + where;
  throw InputError(msg + ": " + what);
}

std::vector<std::vector<std::string>> read_matrix(const nlohmann::json& j, const char* key, int dim,
                                                  std::string_view source) {
  if (!j.contains(key)) fail(source, key, "missing");
  const auto& m = j.at(key);
  if (!m.is_array() || static_cast<int>(m.size()) != dim)
    fail(source, key, "expected an array of " + std::to_string(dim) + " rows");
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < dim; ++i) {
    const auto& row = m[static_cast<std::size_t>(i)];
    const std::string at = std::string(key) + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(source, at, "expected an array of " + std::to_string(dim) + " entries");
    std::vector<std::string> r;
    for (int k = 0; k < dim; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      if (e.is_string()) r.push_back(e.get<std::string>());
      else if (e.is_number()) r.push_back(e.dump());
      else fail(source, at + "[" + std::to_string(k) + "]", "expected an expression string");
    }
    out.push_back(std::move(r));
  }
  return out;
}

ordered_json number(double v) {
  // JSON has no infinity or NaN
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

ManifoldFile parse_manifold_json(std::string_view text, std::string_view source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(source, line_col(text, e.byte > 0 ? e.byte - 1 : 0), "invalid JSON");
  }
  if (!j.is_object()) fail(source, "", "top level must be an object");
  ManifoldFile f;
  if (!j.contains("name") || !j["name"].is_string()) fail(source, "name", "expected a string");
  f.name = j["name"].get<std::string>();
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    fail(source, "dimension", "expected an integer");
  f.dimension = j["dimension"].get<int>();
  if (f.dimension < 4 || f.dimension % 2 != 0) fail(source, "dimension", "must be an even integer >= 4");
  if (!j.contains("domain") || !j["domain"].is_array() || static_cast<int>(j["domain"].size()) != f.dimension)
    fail(source, "domain", "expected " + std::to_string(f.dimension) + " [lo, hi] pairs");
  for (std::size_t i = 0; i < j["domain"].size(); ++i) {
    const auto& iv = j["domain"][i];
    const std::string at = "domain[" + std::to_string(i) + "]";
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      fail(source, at, "expected [lo, hi]");
    const double lo = iv[0].get<double>(), hi = iv[1].get<double>();
    if (!(lo < hi)) fail(source, at, "lo must be below hi");
    f.domain.push_back({lo, hi});
  }
  f.g = read_matrix(j, "g", f.dimension, source);
  f.J = read_matrix(j, "J", f.dimension, source);
  return f;
}

ManifoldFile load_manifold_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifold_json(ss.str(), path.string());
}

Chart to_chart(const ManifoldFile& file, std::string_view source) {
  const int d = file.dimension;
  std::vector<Expression> g, J;
  auto parse_entry = [&](const std::string& text, const char* key, int i, int k) {
    try {
      return parse(text, d);
    } catch (const ParseError& e) {
      fail(source.empty() ? std::string_view(file.name) : source, std::string(key) + "[" + std::to_string(i) + "][" + std::to_string(k) + "]",
           std::string(e.what()) + " in '" + text + "'");
    }
  };
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      g.push_back(parse_entry(file.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], "g", i, k));
      J.push_back(parse_entry(file.J[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], "J", i, k));
    }
  return Chart(file.name, d / 2, file.domain, std::move(g), std::move(J));
}

ManifoldFile to_manifold_file(const Chart& chart) {
  ManifoldFile f;
  f.name = chart.name();
  f.dimension = chart.dim();
  f.domain = chart.domain();
  for (int i = 0; i < chart.dim(); ++i) {
    std::vector<std::string> gr, jr;
    for (int k = 0; k < chart.dim(); ++k) {
      gr.push_back(chart.g(i, k).source());
      jr.push_back(chart.J(i, k).source());
    }
    f.g.push_back(std::move(gr));
    f.J.push_back(std::move(jr));
  }
  return f;
}

std::string manifold_to_json(const ManifoldFile& file) {
  // one matrix row per line
  auto rows = [](const auto& m) {
    std::string s = "[\n";
    for (std::size_t i = 0; i < m.size(); ++i)
      s += "    " + ordered_json(m[i]).dump() + (i + 1 < m.size() ? ",\n" : "\n");
    return s + "  ]";
  };
  std::vector<std::vector<double>> domain;
  for (const auto& iv : file.domain) domain.push_back({iv[0], iv[1]});
  std::string out = "{\n";
  out += "  \"name\": " + ordered_json(file.name).dump() + ",\n";
  out += "  \"dimension\": " + std::to_string(file.dimension) + ",\n";
  out += "  \"domain\": " + rows(domain) + ",\n";
  out += "  \"g\": " + rows(file.g) + ",\n";
  out += "  \"J\": " + rows(file.J) + "\n}\n";
  return out;
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["check"] = r.check;
    j["hypothesis"] = std::string(to_string(r.hypothesis));
    j["points_tested"] = r.points_tested;
    j["max_residual"] = number(r.max_residual);
    j["tolerance"] = r.tolerance;
    j["status"] = std::string(to_string(r.status));
    ordered_json details = ordered_json::array();
    for (const auto& d : r.details) {
      ordered_json e;
      e["point"] = d.point;
      e["residual"] = number(d.residual);
      if (!d.values.empty()) {
        ordered_json v = ordered_json::object();
        for (const auto& [k, x] : d.values) v[k] = number(x);
        e["values"] = std::move(v);
      }
      if (!d.note.empty()) e["note"] = d.note;
      details.push_back(std::move(e));
    }
    j["details"] = std::move(details);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

ClassReport aggregate(const std::vector<ClassReport>& reports) {
  ClassReport a;
  a.W0 = a.W1 = a.W2 = a.W3 = a.W12 = !reports.empty();
  for (const auto& c : reports) {
    a.threshold = c.threshold;
    a.residual_W0 = std::max(a.residual_W0, c.residual_W0);
    a.residual_W1 = std::max(a.residual_W1, c.residual_W1);
    a.residual_W2_cyclic = std::max(a.residual_W2_cyclic, c.residual_W2_cyclic);
    a.residual_theta = std::max(a.residual_theta, c.residual_theta);
    a.residual_W3_cyclic = std::max(a.residual_W3_cyclic, c.residual_W3_cyclic);
    a.residual_W12_cyclic = std::max(a.residual_W12_cyclic, c.residual_W12_cyclic);
    a.W0 = a.W0 && c.W0;
    a.W1 = a.W1 && c.W1;
    a.W2 = a.W2 && c.W2;
    a.W3 = a.W3 && c.W3;
    a.W12 = a.W12 && c.W12;
  }
  return a;
}

namespace {

ordered_json class_json(const ClassReport& c) {
  ordered_json j;
  j["threshold"] = c.threshold;
  j["residuals"] = {{"W0", c.residual_W0},
                    {"W1", c.residual_W1},
                    {"W2_cyclic", c.residual_W2_cyclic},
                    {"theta", c.residual_theta},
                    {"W3_cyclic", c.residual_W3_cyclic},
                    {"W12_cyclic", c.residual_W12_cyclic}};
  j["member"] = {{"W0", c.W0}, {"W1", c.W1}, {"W2", c.W2}, {"W3", c.W3}, {"W1+W2", c.W12}};
  return j;
}

}  // namespace

std::string class_reports_to_json(const std::vector<ClassReport>& reports) {
  ordered_json out;
  out["points"] = ordered_json::array();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    ordered_json j;
    j["point"] = static_cast<int>(k);
    j.update(class_json(reports[k]));
    out["points"].push_back(std::move(j));
  }
  out["aggregate"] = class_json(aggregate(reports));
  return out.dump(2) + "\n";
}

void print_reports(std::ostream& out, const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    out << r.check << "  [" << to_string(r.status) << "]  hypothesis " << to_string(r.hypothesis) << ", max "
        << fmt(r.max_residual) << ", tol " << fmt(r.tolerance) << "\n";
    for (const auto& d : r.details) {
      const char* verdict = r.status == Status::skipped ? "skip" : (d.residual <= r.tolerance ? "ok" : "FAIL");
      out << "  " << d.point << "\t" << fmt(d.residual) << "\t" << verdict;
      if (!d.note.empty()) out << "\t" << d.note;
      out << "\n";
    }
  }
}

void print_class_reports(std::ostream& out, const std::vector<ClassReport>& reports) {
  auto row = [&out](const std::string& label, const ClassReport& c) {
    std::string classes;
    if (c.W0) classes += " W0";
    if (c.W1) classes += " W1";
    if (c.W2) classes += " W2";
    if (c.W3) classes += " W3";
    if (c.W12) classes += " W1+W2";
    out << label << "\t" << fmt(c.residual_W0) << "\t" << fmt(c.residual_W1) << "\t" << fmt(c.residual_W2_cyclic)
        << "\t" << fmt(c.residual_theta) << "\t" << fmt(c.residual_W3_cyclic) << "\t" << fmt(c.residual_W12_cyclic)
        << "\t" << (classes.empty() ? " -" : classes) << "\n";
  };
  out << "point\tW0\t\tW1\t\tW2cyc\t\ttheta\t\tW3cyc\t\tW12cyc\t\tclasses\n";
  for (std::size_t k = 0; k < reports.size(); ++k) row(std::to_string(k), reports[k]);
  row("all", aggregate(reports));
}

}  // namespace norden
