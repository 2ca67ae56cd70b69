#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "norden/lab.hpp"

namespace norden {

/// On-disk manifold description: JSON object with keys
/// name, dimension, domain ([lo, hi] per coordinate), g and J (dimension x
/// dimension arrays of expression strings, J[i][j] = J^i_j).
struct ManifoldFile {
  std::string name;
  int dimension = 0;
  std::vector<std::array<double, 2>> domain;
  std::vector<std::vector<std::string>> g;
  std::vector<std::vector<std::string>> J;
};

/// Throws InputError with a "source: key[i][j]: ..." location on any schema problem.
ManifoldFile parse_manifold_json(std::string_view text, std::string_view source = "<input>");
ManifoldFile load_manifold_file(const std::filesystem::path& path);

/// Parses every expression; parse errors become InputError naming the entry and offset.
Chart to_chart(const ManifoldFile& file, std::string_view source = {});
ManifoldFile to_manifold_file(const Chart& chart);

std::string manifold_to_json(const ManifoldFile& file);

/// Stable field order: check, hypothesis, points_tested, max_residual, tolerance, status, details.
std::string reports_to_json(const std::vector<CheckReport>& reports);
/// Worst residual per condition; a class flag holds only if it holds at every point.
ClassReport aggregate(const std::vector<ClassReport>& reports);
/// {"points": [...], "aggregate": {...}}
std::string class_reports_to_json(const std::vector<ClassReport>& reports);

/// One table per check: point index, residual, verdict.
void print_reports(std::ostream& out, const std::vector<CheckReport>& reports);
void print_class_reports(std::ostream& out, const std::vector<ClassReport>& reports);

}  // namespace norden
