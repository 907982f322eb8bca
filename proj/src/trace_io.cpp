#include "sapg/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace sapg {

namespace {

void open_or_throw(std::ofstream& out, const std::string& path) {
  out.open(path, std::ios::binary);  // binary keeps line endings byte-stable
  if (!out) {
    throw Error("cannot open '" + path + "' for writing");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const IterateTrace& trace) {
  const bool lyapunov = std::any_of(trace.rows.begin(), trace.rows.end(),
                                    [](const TraceRow& r) {
                                      return r.e_k || r.etilde_k || r.bound_rhs;
                                    });
  out << "k,f_x,f_mu_x,mu_k,L_k,a_k,feas_residual_box,feas_residual_budget,"
         "step_norm,time_s";
  if (lyapunov) {
    out << ",e_k,etilde_k,bound_rhs";
  }
  out << "\n";
  for (const TraceRow& r : trace.rows) {
    out << r.k << ',' << format_double(r.f_x) << ',' << format_double(r.f_mu_x) << ','
        << format_double(r.mu_k) << ',' << format_double(r.L_k) << ','
        << format_double(r.a_k) << ',' << format_double(r.feas_residual_box) << ','
        << format_double(r.feas_residual_budget) << ',' << format_double(r.step_norm)
        << ',' << format_double(r.time_s);
    if (lyapunov) {
      out << ',' << (r.e_k ? format_double(*r.e_k) : "") << ','
          << (r.etilde_k ? format_double(*r.etilde_k) : "") << ','
          << (r.bound_rhs ? format_double(*r.bound_rhs) : "");
    }
    out << "\n";
  }
}

void write_trace_csv(const std::string& path, const IterateTrace& trace) {
  std::ofstream out;
  open_or_throw(out, path);
  write_trace_csv(out, trace);
}

GapSeries relative_gap_series(const std::string& name, const IterateTrace& trace,
                              double f_star) {
  GapSeries s;
  s.name = name;
  const double denom = std::max(std::abs(f_star), 1e-300);
  s.ks.reserve(trace.rows.size());
  s.gaps.reserve(trace.rows.size());
  for (const TraceRow& r : trace.rows) {
    s.ks.push_back(r.k);
    s.gaps.push_back((r.f_x - f_star) / denom);
  }
  return s;
}

void write_gap_csv(std::ostream& out, const std::vector<GapSeries>& series) {
  std::map<int, std::vector<const double*>> rows;
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = 0; j < series[i].ks.size(); ++j) {
      auto& cells = rows[series[i].ks[j]];
      cells.resize(series.size(), nullptr);
      cells[i] = &series[i].gaps[j];
    }
  }
  out << "k";
  for (const GapSeries& s : series) {
    out << ",gap_" << s.name;
  }
  out << "\n";
  for (const auto& [k, cells] : rows) {
    out << k;
    for (std::size_t i = 0; i < series.size(); ++i) {
      out << ',';
      if (i < cells.size() && cells[i]) {
        out << format_double(*cells[i]);
      }
    }
    out << "\n";
  }
}

void write_gap_csv(const std::string& path, const std::vector<GapSeries>& series) {
  std::ofstream out;
  open_or_throw(out, path);
  write_gap_csv(out, series);
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 50.0;

const char* series_color(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  return colors[i % 4];
}

}  // namespace

void write_gap_svg(std::ostream& out, const std::vector<GapSeries>& series) {
  double x_lo = 0.0, x_hi = 1.0, y_lo = -1.0, y_hi = 0.0;
  bool any = false;
  for (const GapSeries& s : series) {
    for (std::size_t j = 0; j < s.ks.size(); ++j) {
      if (s.ks[j] < 1 || !(s.gaps[j] > 0.0) || !std::isfinite(s.gaps[j])) {
        continue;
      }
      const double lx = std::log10(static_cast<double>(s.ks[j]));
      const double ly = std::log10(s.gaps[j]);
      if (!any) {
        x_lo = x_hi = lx;
        y_lo = y_hi = ly;
        any = true;
      } else {
        x_lo = std::min(x_lo, lx);
        x_hi = std::max(x_hi, lx);
        y_lo = std::min(y_lo, ly);
        y_hi = std::max(y_hi, ly);
      }
    }
  }
  if (x_hi - x_lo < 1e-9) {
    x_hi = x_lo + 1.0;
  }
  if (y_hi - y_lo < 1e-9) {
    y_hi = y_lo + 1.0;
  }

  const auto sx = [&](double lx) {
    return kMarginLeft + (lx - x_lo) / (x_hi - x_lo) * (kWidth - kMarginLeft - kMarginRight);
  };
  const auto sy = [&](double ly) {
    return kHeight - kMarginBottom -
           (ly - y_lo) / (y_hi - y_lo) * (kHeight - kMarginTop - kMarginBottom);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << kWidth - kMarginLeft - kMarginRight << "\" height=\""
      << kHeight - kMarginTop - kMarginBottom
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  // Decade grid lines and labels.
  for (int d = static_cast<int>(std::ceil(x_lo)); d <= static_cast<int>(std::floor(x_hi));
       ++d) {
    const double x = sx(d);
    out << "<line x1=\"" << format_double(x) << "\" y1=\"" << kMarginTop << "\" x2=\""
        << format_double(x) << "\" y2=\"" << kHeight - kMarginBottom
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << format_double(x) << "\" y=\"" << kHeight - kMarginBottom + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y_lo)); d <= static_cast<int>(std::floor(y_hi));
       ++d) {
    const double y = sy(d);
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << format_double(y) << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << format_double(y)
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << format_double(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  out << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
      << kHeight - 12 << "\" font-size=\"13\" text-anchor=\"middle\">iteration k</text>\n";
  out << "<text x=\"16\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (kMarginTop + kHeight - kMarginBottom) / 2 << ")\">relative gap</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const GapSeries& s = series[i];
    out << "<polyline fill=\"none\" stroke=\"" << series_color(i)
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t j = 0; j < s.ks.size(); ++j) {
      if (s.ks[j] < 1 || !(s.gaps[j] > 0.0) || !std::isfinite(s.gaps[j])) {
        continue;
      }
      if (!first) {
        out << ' ';
      }
      first = false;
      out << format_double(sx(std::log10(static_cast<double>(s.ks[j])))) << ','
          << format_double(sy(std::log10(s.gaps[j])));
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMarginRight - 8 << "\" y=\""
        << kMarginTop + 18 + 16 * static_cast<double>(i) << "\" font-size=\"12\" fill=\""
        << series_color(i) << "\" text-anchor=\"end\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

void write_gap_svg(const std::string& path, const std::vector<GapSeries>& series) {
  std::ofstream out;
  open_or_throw(out, path);
  write_gap_svg(out, series);
}

}  // namespace sapg
