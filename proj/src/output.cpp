#include "zeromode/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "zeromode/potential_json.hpp"

namespace zeromode::output {

namespace {

using nlohmann::json;

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Step of 1, 2 or 5 times a power of ten giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr const char* kDash[] = {"", "8,4", "2,3", "8,3,2,3"};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, std::span<const std::string> header, std::span<const std::vector<double>> columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("CSV header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw std::invalid_argument("CSV columns have different lengths");
  }
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
  os << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << format_double(columns[j][i]);
    os << '\n';
  }
}

void write_spinor_csv(std::ostream& os, const dirac::SpinorState& state) {
  const std::size_t n = state.xs.size();
  std::vector<std::vector<double>> cols(5, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    cols[0][i] = state.xs[i];
    cols[1][i] = state.psi_a[i].real();
    cols[2][i] = state.psi_a[i].imag();
    cols[3][i] = state.psi_b[i].real();
    cols[4][i] = state.psi_b[i].imag();
  }
  const std::string header[] = {"x", "Re psi_A", "Im psi_A", "Re psi_B", "Im psi_B"};
  write_csv(os, header, cols);
}

std::string render_svg(std::span<const Series> series, const PlotOptions& options) {
  constexpr double width = 800.0;
  constexpr double height = 500.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      x_lo = std::min(x_lo, s.xs[i]);
      x_hi = std::max(x_hi, s.xs[i]);
      y_lo = std::min(y_lo, s.ys[i]);
      y_hi = std::max(y_hi, s.ys[i]);
    }
  }
  if (!(x_hi > x_lo)) {
    x_lo = std::isfinite(x_lo) ? x_lo - 1.0 : -1.0;
    x_hi = x_lo + 2.0;
  }
  if (!(y_hi > y_lo)) {
    y_lo = std::isfinite(y_lo) ? y_lo - 1.0 : -1.0;
    y_hi = y_lo + 2.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(options.title)
        << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = nice_step(x_hi - x_lo, 8);
  for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9 * xs; t += xs) {
    const std::string p = fixed3(px(t));
    svg << "<line x1=\"" << p << "\" y1=\"" << top + plot_h << "\" x2=\"" << p << "\" y2=\"" << top + plot_h + 5
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << p << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << tick_label(t)
        << "</text>\n";
  }
  const double ys = nice_step(y_hi - y_lo, 6);
  for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-9 * ys; t += ys) {
    const std::string p = fixed3(py(t));
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << p << "\" x2=\"" << left << "\" y2=\"" << p
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << p << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
        << tick_label(t) << "</text>\n";
  }
  if (y_lo < 0.0 && y_hi > 0.0) {
    svg << "<line x1=\"" << left << "\" y1=\"" << fixed3(py(0.0)) << "\" x2=\"" << left + plot_w << "\" y2=\""
        << fixed3(py(0.0)) << "\" stroke=\"#bbbbbb\"/>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
      << escape(options.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\">" << escape(options.y_label) << "</text>\n";

  for (const double m : options.markers) {
    if (m < x_lo || m > x_hi) continue;
    svg << "<line x1=\"" << fixed3(px(m)) << "\" y1=\"" << top << "\" x2=\"" << fixed3(px(m)) << "\" y2=\""
        << top + plot_h << "\" stroke=\"#888888\" stroke-dasharray=\"4,4\"/>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[k % 6] << "\" stroke-width=\"1.5\"";
    if (*kDash[k % 4]) svg << " stroke-dasharray=\"" << kDash[k % 4] << '"';
    svg << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      svg << (first ? "" : " ") << fixed3(px(s.xs[i])) << ',' << fixed3(py(s.ys[i]));
      first = false;
    }
    svg << "\"/>\n";
  }

  // Legend, top right inside the frame.
  std::size_t entries = series.size() + (options.markers.empty() || options.marker_label.empty() ? 0 : 1);
  if (entries > 0) {
    const double lx = left + plot_w - 230;
    const double ly = top + 10;
    svg << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"220\" height=\"" << 18 * entries + 8
        << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#888888\"/>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double y = ly + 14 + 18 * static_cast<double>(k);
      svg << "<line x1=\"" << lx + 8 << "\" y1=\"" << y << "\" x2=\"" << lx + 38 << "\" y2=\"" << y << "\" stroke=\""
          << kPalette[k % 6] << "\" stroke-width=\"1.5\"";
      if (*kDash[k % 4]) svg << " stroke-dasharray=\"" << kDash[k % 4] << '"';
      svg << "/>\n<text x=\"" << lx + 46 << "\" y=\"" << y + 4 << "\">" << escape(series[k].label) << "</text>\n";
    }
    if (entries > series.size()) {
      const double y = ly + 14 + 18 * static_cast<double>(series.size());
      svg << "<line x1=\"" << lx + 8 << "\" y1=\"" << y << "\" x2=\"" << lx + 38 << "\" y2=\"" << y
          << "\" stroke=\"#888888\" stroke-dasharray=\"4,4\"/>\n<text x=\"" << lx + 46 << "\" y=\"" << y + 4 << "\">"
          << escape(options.marker_label) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

json to_json(const dirac::MonodromyResult& r) {
  return {{"ky", r.ky},
          {"trace", finite_or_null(r.trace)},
          {"trace_imag", finite_or_null(r.trace_imag)},
          {"allowed", r.allowed},
          {"band_edge", r.band_edge}};
}

json to_json(const dirac::ZeroModeReport& r) {
  json found = json::array();
  for (const auto& f : r.found) {
    found.push_back({{"ky", f.ky}, {"error", f.error}, {"bracket", {f.bracket_lo, f.bracket_hi}}});
  }
  json residuals = json::array();
  for (const double v : r.residuals) residuals.push_back(finite_or_null(v));
  json out = {{"spec", zeromode::to_json(r.spec)},
              {"periodic", r.periodic},
              {"predicted_ky", r.predicted_ky},
              {"found_ky", found},
              {"ky_grid", r.ky_grid},
              {"residuals", residuals},
              {"warnings", r.warnings}};
  if (r.periodic) {
    json checks = json::array();
    for (const auto& c : r.predicted_checks) checks.push_back(to_json(c));
    out["predicted_checks"] = checks;
  }
  return out;
}

json to_json(const verify::ResidualReport& r) {
  json out = {{"grid_h", r.grid_h}, {"time_samples", r.time_samples}, {"residual_norm", finite_or_null(r.residual_norm)}};
  out["residual_half_h"] = r.residual_half_h ? finite_or_null(*r.residual_half_h) : json(nullptr);
  out["convergence_order"] = r.convergence_order ? finite_or_null(*r.convergence_order) : json(nullptr);
  if (r.fitted_speed) out["fitted_speed"] = finite_or_null(*r.fitted_speed);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << contents;
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace zeromode::output
