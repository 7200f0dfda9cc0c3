#pragma once

// CSV, SVG and JSON writers. All output is deterministic: numbers in CSV use
// 17 significant digits, SVG coordinates 3 decimals.

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "zeromode/dirac.hpp"
#include "zeromode/verify.hpp"

namespace zeromode::output {

/// Round-trip decimal ("%.17g").
std::string format_double(double v);

/// Columns of equal length under a comma-separated header.
void write_csv(std::ostream& os, std::span<const std::string> header, std::span<const std::vector<double>> columns);

/// Columns x, Re psi_A, Im psi_A, Re psi_B, Im psi_B.
void write_spinor_csv(std::ostream& os, const dirac::SpinorState& state);

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "V(x)";
  /// Dashed vertical lines, e.g. period boundaries.
  std::vector<double> markers;
  std::string marker_label;
};

/// SVG 1.1 line plot with axes, ticks and a legend.
std::string render_svg(std::span<const Series> series, const PlotOptions& options);

nlohmann::json to_json(const dirac::ZeroModeReport& report);
nlohmann::json to_json(const dirac::MonodromyResult& result);
nlohmann::json to_json(const verify::ResidualReport& report);

/// Throws std::runtime_error naming the path when it cannot be written.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace zeromode::output
