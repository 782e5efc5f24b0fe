#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "error.hpp"

namespace lapbel {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 72, kRight = 608, kTop = 46, kBottom = 420;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string pow10_label(int e) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "1e%d", e);
  return buf;
}

struct LogRange {
  double lo = 0.0, hi = 1.0;
  double map(double v, double a, double b) const {
    return a + (std::log10(v) - lo) / (hi - lo) * (b - a);
  }
};

} // namespace

void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::vector<PlotSeries>& series,
                      const std::vector<GuideLine>& guides) {
  double hmin = std::numeric_limits<double>::infinity(), hmax = 0;
  double emin = std::numeric_limits<double>::infinity(), emax = 0;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.h.size() && i < s.err.size(); ++i) {
      if (!(s.h[i] > 0) || !(s.err[i] > 0)) continue;
      hmin = std::min(hmin, s.h[i]);
      hmax = std::max(hmax, s.h[i]);
      emin = std::min(emin, s.err[i]);
      emax = std::max(emax, s.err[i]);
    }
  }
  require(hmax > 0 && emax > 0, errc::insufficient_data,
          "svg plot needs at least one positive data point");

  LogRange xr{std::log10(hmin) - 0.05, std::log10(hmax) + 0.05};
  // leave headroom below for guide lines that fan out beneath the data
  LogRange yr{std::log10(emin) - 0.6, std::log10(emax) + 0.3};

  auto X = [&](double h) { return xr.map(h, kLeft, kRight); };
  auto Y = [&](double e) { return yr.map(e, kBottom, kTop); };

  std::ofstream out(path);
  require(bool(out), errc::io_error, "cannot write " + path.string());

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // frame
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(kRight - kLeft) << "\" height=\"" << num(kBottom - kTop)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade ticks
  for (int e = (int)std::ceil(xr.lo); e <= (int)std::floor(xr.hi); ++e) {
    const double x = xr.map(std::pow(10.0, e), kLeft, kRight);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(kBottom) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kBottom + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << pow10_label(e) << "</text>\n";
  }
  for (int e = (int)std::ceil(yr.lo); e <= (int)std::floor(yr.hi); ++e) {
    const double y = yr.map(std::pow(10.0, e), kBottom, kTop);
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kRight)
        << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << pow10_label(e) << "</text>\n";
  }
  out << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">h</text>\n";
  out << "<text x=\"18\" y=\"" << num((kTop + kBottom) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << num((kTop + kBottom) / 2) << ")\">error</text>\n";

  // guide slopes through (hmax, emax), dashed, fanned out by a fixed offset
  for (size_t g = 0; g < guides.size(); ++g) {
    const double c = emax * 0.5 / std::pow(hmax, guides[g].order);
    const double e0 = c * std::pow(hmax, guides[g].order);
    const double e1 = c * std::pow(hmin, guides[g].order);
    out << "<line x1=\"" << num(X(hmax)) << "\" y1=\"" << num(Y(e0)) << "\" x2=\""
        << num(X(hmin)) << "\" y2=\"" << num(Y(e1))
        << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << num(X(hmax) + 4) << "\" y=\"" << num(Y(e0) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">" << guides[g].label
        << "</text>\n";
  }

  // data series
  int color = 0;
  double legend_y = kTop + 18;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % 6];
    std::string points;
    for (size_t i = 0; i < s.h.size() && i < s.err.size(); ++i) {
      if (!(s.h[i] > 0) || !(s.err[i] > 0)) continue;
      if (!points.empty()) points += " ";
      points += num(X(s.h[i])) + "," + num(Y(s.err[i]));
    }
    if (points.empty()) continue;
    out << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.6\"/>\n";
    for (size_t i = 0; i < s.h.size() && i < s.err.size(); ++i) {
      if (!(s.h[i] > 0) || !(s.err[i] > 0)) continue;
      out << "<circle cx=\"" << num(X(s.h[i])) << "\" cy=\"" << num(Y(s.err[i]))
          << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
    }
    out << "<line x1=\"" << num(kRight - 150) << "\" y1=\"" << num(legend_y) << "\" x2=\""
        << num(kRight - 126) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"1.6\"/>\n";
    out << "<text x=\"" << num(kRight - 120) << "\" y=\"" << num(legend_y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 18;
    ++color;
  }

  out << "</svg>\n";
  require(bool(out), errc::io_error, "write failure on " + path.string());
}

} // namespace lapbel
