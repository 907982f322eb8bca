#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sapg/solvers.hpp"

namespace sapg {

/// Shortest decimal representation that round-trips to the same double;
/// used everywhere a number ends up in a file so outputs are byte-stable.
std::string format_double(double value);

/// Writes the trace as CSV with the fixed column order
///   k, f_x, f_mu_x, mu_k, L_k, a_k, feas_residual_box, feas_residual_budget,
///   step_norm, time_s
/// plus e_k, etilde_k, bound_rhs when any row carries Lyapunov annotations
/// (cells without a value stay empty).
void write_trace_csv(std::ostream& out, const IterateTrace& trace);
void write_trace_csv(const std::string& path, const IterateTrace& trace);

/// One gap curve: relative objective gaps (f(x^k) - f_star) / denom by k.
struct GapSeries {
  std::string name;
  std::vector<int> ks;
  std::vector<double> gaps;
};

GapSeries relative_gap_series(const std::string& name, const IterateTrace& trace,
                              double f_star);

/// CSV with column "k" plus one gap column per series, aligned on the union
/// of recorded ks (missing cells stay empty).
void write_gap_csv(std::ostream& out, const std::vector<GapSeries>& series);
void write_gap_csv(const std::string& path, const std::vector<GapSeries>& series);

/// Minimal log-log SVG line chart of the gap curves (points with k >= 1 and
/// gap > 0 only).
void write_gap_svg(std::ostream& out, const std::vector<GapSeries>& series);
void write_gap_svg(const std::string& path, const std::vector<GapSeries>& series);

}  // namespace sapg
