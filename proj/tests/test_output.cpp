#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "zeromode/output.hpp"

using namespace zeromode;
using namespace zeromode::output;

namespace {

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("doubles round-trip through CSV formatting", "[output]") {
  for (const double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 2.0}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(-1.0) == "-1");
}

TEST_CASE("CSV layout", "[output]") {
  std::ostringstream os;
  const std::string header[] = {"x", "V"};
  const std::vector<double> cols[] = {{0.0, 0.5}, {-1.0, 0.25}};
  write_csv(os, header, cols);
  CHECK(os.str() == "x,V\n0,-1\n0.5,0.25\n");

  const std::vector<double> uneven[] = {{0.0, 0.5}, {1.0}};
  CHECK_THROWS(write_csv(os, header, uneven));
}

TEST_CASE("spinor CSV columns", "[output]") {
  dirac::SpinorState s;
  s.xs = {0.0, 1.0};
  s.psi_a = {{1.0, 2.0}, {3.0, 4.0}};
  s.psi_b = {{5.0, 6.0}, {7.0, 8.0}};
  std::ostringstream os;
  write_spinor_csv(os, s);
  CHECK(os.str() == "x,Re psi_A,Im psi_A,Re psi_B,Im psi_B\n0,1,2,5,6\n1,3,4,7,8\n");
}

TEST_CASE("SVG has one polyline per series, legend and markers", "[output]") {
  const std::vector<Series> series = {{"a", {0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}}, {"b & c", {0.0, 2.0}, {-1.0, 1.0}}};
  PlotOptions opts;
  opts.title = "test";
  opts.markers = {1.0, 5.0};
  opts.marker_label = "period";
  const std::string svg = render_svg(series, opts);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(count(svg, "<polyline") == 2);
  CHECK(count(svg, "stroke-dasharray=\"4,4\"") == 2);  // one marker in range, one legend entry
  CHECK(svg.find("b &amp; c") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(render_svg(series, opts) == svg);
}

TEST_CASE("SVG copes with flat and empty data", "[output]") {
  const std::vector<Series> flat = {{"flat", {0.0, 1.0}, {2.0, 2.0}}};
  CHECK_NOTHROW(render_svg(flat, {}));
  CHECK_NOTHROW(render_svg({}, {}));
}

TEST_CASE("report JSON", "[output]") {
  verify::ResidualReport r;
  r.grid_h = 0.01;
  r.residual_norm = 2e-5;
  r.residual_half_h = 5e-6;
  r.convergence_order = 2.0;
  const auto j = to_json(r);
  CHECK(j["grid_h"] == 0.01);
  CHECK(j["convergence_order"] == 2.0);
  CHECK_FALSE(j.contains("fitted_speed"));

  dirac::MonodromyResult m{1.0, std::nan(""), 0.0, false, false};
  CHECK(to_json(m)["trace"].is_null());
}

TEST_CASE("unwritable paths are reported", "[output]") {
  CHECK_THROWS_AS(write_file("/nonexistent-dir/x.csv", "x"), std::runtime_error);
}
