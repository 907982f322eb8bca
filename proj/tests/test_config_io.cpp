#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "sapg/config.hpp"
#include "sapg/trace_io.hpp"

using sapg::ExperimentConfig;
using sapg::GapSeries;
using sapg::IterateTrace;
using sapg::TraceRow;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return sapg::parse_experiment_config(in, "test.ini");
}

int error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    sapg::parse_experiment_config(in, "test.ini");
  } catch (const sapg::ConfigError& err) {
    return err.line();
  }
  return -1;
}

constexpr const char* kMinimal = "[instance]\nvolume_budget = 0.1\nx_min = 1e-8\n";

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("format_double prints shortest round-trip forms") {
  CHECK(sapg::format_double(0.0) == "0");
  CHECK(sapg::format_double(1.0) == "1");
  CHECK(sapg::format_double(0.5) == "0.5");
  CHECK(sapg::format_double(-2.25) == "-2.25");
  CHECK(sapg::format_double(0.1) == "0.1");
}

TEST_CASE("format_double round-trips every value bit-exactly") {
  const double values[] = {0.0, -0.0, 1.0, -1.0, 0.1, 1e300, -1e300, 1e-300,
                           5e-324, 87.25483399593898, 0.0011460683084292408,
                           3.141592653589793, 1e22, 123456789.123456789};
  for (const double v : values) {
    const std::string s = sapg::format_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(std::memcmp(&back, &v, sizeof(double)) == 0);
  }
}

TEST_CASE("trace csv uses the fixed column order") {
  IterateTrace trace;
  TraceRow r0;
  r0.k = 0;
  r0.f_x = 0.5;
  r0.f_mu_x = 0.25;
  r0.mu_k = 1.0;
  r0.L_k = 2.0;
  r0.a_k = 0.0;
  r0.feas_residual_box = -0.5;
  r0.feas_residual_budget = -1.0;
  r0.step_norm = 0.0;
  r0.time_s = 0.0;
  TraceRow r1 = r0;
  r1.k = 1;
  r1.f_x = 0.25;
  r1.a_k = 1.0;
  r1.step_norm = 0.125;
  trace.rows = {r0, r1};

  std::ostringstream out;
  sapg::write_trace_csv(out, trace);
  CHECK(out.str() ==
        "k,f_x,f_mu_x,mu_k,L_k,a_k,feas_residual_box,feas_residual_budget,"
        "step_norm,time_s\n"
        "0,0.5,0.25,1,2,0,-0.5,-1,0,0\n"
        "1,0.25,0.25,1,2,1,-0.5,-1,0.125,0\n");
}

TEST_CASE("trace csv appends lyapunov columns when annotated") {
  IterateTrace trace;
  TraceRow r0;
  r0.k = 0;
  r0.f_x = 1.0;
  r0.f_mu_x = 1.0;
  r0.mu_k = 1.0;
  r0.L_k = 1.0;
  r0.e_k = 2.0;
  r0.etilde_k = 2.0;
  TraceRow r1 = r0;
  r1.k = 1;
  r1.e_k = 1.5;
  r1.etilde_k = 1.25;
  r1.bound_rhs = 8.0;
  trace.rows = {r0, r1};

  std::ostringstream out;
  sapg::write_trace_csv(out, trace);
  CHECK(out.str() ==
        "k,f_x,f_mu_x,mu_k,L_k,a_k,feas_residual_box,feas_residual_budget,"
        "step_norm,time_s,e_k,etilde_k,bound_rhs\n"
        "0,1,1,1,1,0,0,0,0,0,2,2,\n"
        "1,1,1,1,1,0,0,0,0,0,1.5,1.25,8\n");
}

TEST_CASE("gap series divides by the reference magnitude") {
  IterateTrace trace;
  TraceRow r;
  r.k = 0;
  r.f_x = 3.0;
  trace.rows.push_back(r);
  r.k = 2;
  r.f_x = 2.5;
  trace.rows.push_back(r);

  const GapSeries s = sapg::relative_gap_series("sapg", trace, 2.0);
  CHECK(s.name == "sapg");
  CHECK(s.ks == std::vector<int>{0, 2});
  CHECK(s.gaps[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.gaps[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("gap csv aligns series on the union of iterations") {
  GapSeries a{"sapg", {0, 2}, {1.0, 0.5}};
  GapSeries b{"spg", {1, 2}, {0.75, 0.5}};
  std::ostringstream out;
  sapg::write_gap_csv(out, {a, b});
  CHECK(out.str() ==
        "k,gap_sapg,gap_spg\n"
        "0,1,\n"
        "1,,0.75\n"
        "2,0.5,0.5\n");
}

TEST_CASE("gap svg draws one polyline per series") {
  GapSeries a{"sapg", {1, 10, 100}, {1.0, 0.1, 0.01}};
  GapSeries b{"spg", {1, 10, 100}, {1.0, 0.5, 0.25}};
  std::ostringstream out;
  sapg::write_gap_svg(out, {a, b});
  const std::string svg = out.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1)) {
    ++polylines;
  }
  CHECK(polylines == 2);
  CHECK(svg.find(">sapg</text>") != std::string::npos);
  CHECK(svg.find(">spg</text>") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("full config parses into the expected fields") {
  const ExperimentConfig cfg = parse(
      "# benchmark configuration\n"
      "[instance]\n"
      "cols = 5\n"
      "rows = 4\n"
      "spacing = 0.5\n"
      "connectivity = 2\n"
      "support = right\n"
      "loaded_nodes = 6, 7, 11\n"
      "ellipse_horizontal = 1e5\n"
      "ellipse_vertical = 1.39e5\n"
      "ellipse_interpretation = semi_axis\n"
      "young_modulus = 2.1e11\n"
      "volume_budget = 0.2   ; trailing comment\n"
      "x_min = 1e-7\n"
      "\n"
      "[sapg]\n"
      "mu0 = 2\n"
      "L = 5e4\n"
      "Lprime = 1.5\n"
      "[spg]\n"
      "mu0 = 0.5\n"
      "L = 2e6\n"
      "mu_exponent = -0.4\n"
      "[subgrad]\n"
      "step_c = 1e-5\n"
      "[run]\n"
      "iters = 123\n"
      "stride = 4\n"
      "seed = 99\n"
      "out = results\n"
      "timing = wall\n"
      "lyapunov = true\n"
      "svg = yes\n"
      "reference_f = 12.5\n"
      "reference_factor = 7\n"
      "polish_iters = 55\n"
      "polish_mu = 1e-9\n");

  CHECK(cfg.instance.cols == 5);
  CHECK(cfg.instance.rows == 4);
  CHECK(cfg.instance.spacing == 0.5);
  CHECK(cfg.instance.connectivity == 2);
  CHECK(cfg.instance.support == sapg::SupportPattern::RightEdge);
  CHECK(cfg.instance.loaded_nodes == std::vector<int>{6, 7, 11});
  CHECK(cfg.instance.ellipse_horizontal == 1e5);
  CHECK(cfg.instance.ellipse_vertical == 1.39e5);
  CHECK_FALSE(cfg.instance.ellipse_full_axis);
  CHECK(cfg.instance.young_modulus == 2.1e11);
  CHECK(cfg.instance.volume_budget == 0.2);
  CHECK(cfg.instance.x_min == 1e-7);

  CHECK(cfg.sapg_mu0 == 2.0);
  CHECK(cfg.sapg_L == 5e4);
  CHECK(cfg.sapg_Lprime == 1.5);
  CHECK(cfg.spg_mu0 == 0.5);
  CHECK(cfg.spg_L == 2e6);
  CHECK(cfg.spg_mu_exponent == -0.4);
  CHECK(cfg.subgrad_step_c == 1e-5);

  CHECK(cfg.run.iters == 123);
  CHECK(cfg.run.stride == 4);
  CHECK(cfg.run.seed == 99);
  CHECK(cfg.run.out_dir == "results");
  CHECK(cfg.run.record_wall_time);
  CHECK(cfg.run.lyapunov);
  CHECK(cfg.run.svg);
  REQUIRE(cfg.run.reference_f.has_value());
  CHECK(*cfg.run.reference_f == 12.5);
  CHECK(cfg.run.reference_factor == 7);
  CHECK(cfg.run.polish_iters == 55);
  CHECK(cfg.run.polish_mu == 1e-9);

  CHECK(cfg.has_section("instance"));
  CHECK(cfg.has_section("spg"));
  CHECK_FALSE(cfg.has_section("extra"));
}

TEST_CASE("minimal config keeps the benchmark defaults") {
  const ExperimentConfig cfg = parse(kMinimal);
  CHECK(cfg.instance.cols == 9);
  CHECK(cfg.instance.rows == 3);
  CHECK(cfg.instance.support == sapg::SupportPattern::LeftEdge);
  CHECK(cfg.instance.loaded_nodes.empty());
  CHECK(cfg.instance.ellipse_full_axis);
  CHECK(cfg.sapg_mu0 == 1.0);
  CHECK(cfg.sapg_L == 1e5);
  CHECK(cfg.spg_L == 1e6);
  CHECK(cfg.spg_mu_exponent == -0.5);
  CHECK(cfg.subgrad_step_c == 1e-6);
  CHECK(cfg.run.iters == 4000);
  CHECK(cfg.run.stride == 1);
  CHECK_FALSE(cfg.run.record_wall_time);
  CHECK_FALSE(cfg.run.reference_f.has_value());
}

TEST_CASE("solver assembly picks the right section") {
  const ExperimentConfig cfg = parse(
      "[instance]\nvolume_budget = 0.1\nx_min = 1e-8\n"
      "[sapg]\nmu0 = 2\nL = 5e4\n"
      "[spg]\nmu0 = 3\nL = 7e5\nmu_exponent = -0.6\n"
      "[subgrad]\nstep_c = 1e-4\n"
      "[run]\niters = 77\nstride = 11\n");

  const sapg::SolverConfig sapg_cfg = cfg.solver(sapg::Algorithm::Sapg);
  CHECK(sapg_cfg.algorithm == sapg::Algorithm::Sapg);
  CHECK(sapg_cfg.mu0 == 2.0);
  CHECK(sapg_cfg.L == 5e4);
  CHECK(sapg_cfg.max_iters == 77);
  CHECK(sapg_cfg.trace_every == 11);

  const sapg::SolverConfig spg_cfg = cfg.solver(sapg::Algorithm::Spg);
  CHECK(spg_cfg.mu0 == 3.0);
  CHECK(spg_cfg.L == 7e5);
  CHECK(spg_cfg.spg_mu_exponent == -0.6);

  const sapg::SolverConfig sub_cfg = cfg.solver(sapg::Algorithm::Subgrad);
  CHECK(sub_cfg.subgrad_step_c == 1e-4);
}

TEST_CASE("parse errors name the offending line") {
  CHECK(error_line("[bogus]\n") == 1);
  CHECK(error_line("[instance]\nnope = 3\n") == 2);
  CHECK(error_line("[instance]\nvolume_budget 0.1\n") == 2);
  CHECK(error_line("[instance]\nvolume_budget = abc\n") == 2);
  CHECK(error_line("[instance]\ncols = 1.5\n") == 2);
  CHECK(error_line("key = 1\n") == 1);  // key before any section
  CHECK(error_line("[instance\n") == 1);
  CHECK(error_line("[run]\ntiming = cpu\n") == 2);
  CHECK(error_line("[instance]\nsupport = middle\n") == 2);
  CHECK(error_line("[run]\nlyapunov = maybe\n") == 2);

  // Missing required keys fail without a specific line.
  CHECK(error_line("[instance]\nx_min = 1e-8\n") == 0);
  CHECK(error_line("[instance]\nvolume_budget = 0.1\n") == 0);

  try {
    parse("[instance]\nwhat = 1\nvolume_budget = 0.1\nx_min = 1e-8\n");
    FAIL("expected ConfigError");
  } catch (const sapg::ConfigError& err) {
    const std::string what = err.what();
    CHECK(what.find("what") != std::string::npos);
    CHECK(what.find("instance") != std::string::npos);
    CHECK(what.find("test.ini:2") != std::string::npos);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig cfg = parse(
      "; leading comment\n"
      "\n"
      "[instance]  # section comment\n"
      "volume_budget = 0.1  # inline\n"
      "x_min = 1e-8\n"
      "   \n"
      "# done\n");
  CHECK(cfg.instance.volume_budget == 0.1);
}

TEST_CASE("missing config file raises a config error") {
  CHECK_THROWS_AS(sapg::load_experiment_config("/nonexistent/sapg.ini"),
                  sapg::ConfigError);
}

}  // TEST_SUITE
