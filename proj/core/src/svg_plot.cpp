#include "driftflow/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace driftflow {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 62.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 48.0;

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.0) nice = 1.0;
  else if (frac <= 2.0) nice = 2.0;
  else if (frac <= 5.0) nice = 5.0;
  return nice * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_line(std::span<const double> x, std::span<const double> y,
                       const std::string& color, double stroke_width, bool dashed) {
  if (x.size() != y.size()) throw std::invalid_argument("SvgPlot: x/y size mismatch");
  series_.push_back({Series::Kind::Line, {x.begin(), x.end()}, {y.begin(), y.end()}, color,
                     stroke_width, dashed});
}

void SvgPlot::add_stems(std::span<const double> x, std::span<const double> heights,
                        const std::string& color, double stroke_width) {
  if (x.size() != heights.size()) throw std::invalid_argument("SvgPlot: x/h size mismatch");
  series_.push_back({Series::Kind::Stems, {x.begin(), x.end()},
                     {heights.begin(), heights.end()}, color, stroke_width, false});
}

void SvgPlot::add_points(std::span<const double> x, std::span<const double> y,
                         const std::string& color, double radius) {
  if (x.size() != y.size()) throw std::invalid_argument("SvgPlot: x/y size mismatch");
  series_.push_back({Series::Kind::Points, {x.begin(), x.end()}, {y.begin(), y.end()}, color,
                     radius, false});
}

void SvgPlot::add_legend(const std::string& label, const std::string& color) {
  legend_.emplace_back(label, color);
}

void SvgPlot::write(std::ostream& out) const {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      const double ylo = s.kind == Series::Kind::Stems ? std::min(0.0, y) : y;
      const double yhi = s.kind == Series::Kind::Stems ? std::max(0.0, y) : y;
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ylo;
        ymax = yhi;
        first = false;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, ylo);
        ymax = std::max(ymax, yhi);
      }
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double xpad = 0.04 * (xmax - xmin);
  const double ypad = 0.06 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double v) { return kMarginLeft + (v - xmin) / (xmax - xmin) * plot_w; };
  const auto sy = [&](double v) { return kMarginTop + (ymax - v) / (ymax - ymin) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << escape(title_) << "</text>\n";

  // Grid and ticks.
  const double xstep = nice_step(xmax - xmin, 8);
  const double ystep = nice_step(ymax - ymin, 6);
  out << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#444\">\n";
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    const double px = sx(t);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kMarginTop) << "\" x2=\"" << fmt(px)
        << "\" y2=\"" << fmt(kMarginTop + plot_h) << "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kMarginTop + plot_h + 14)
        << "\" text-anchor=\"middle\">" << fmt(t, "%g") << "</text>\n";
  }
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
    const double py = sy(t);
    out << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(py) << "\" x2=\""
        << fmt(kMarginLeft + plot_w) << "\" y2=\"" << fmt(py)
        << "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n";
    out << "<text x=\"" << fmt(kMarginLeft - 6) << "\" y=\"" << fmt(py + 3)
        << "\" text-anchor=\"end\">" << fmt(t, "%g") << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  for (const auto& s : series_) {
    if (s.kind == Series::Kind::Line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\""
          << s.stroke_width << "\"";
      if (s.dashed) out << " stroke-dasharray=\"6 4\"";
      out << " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << fmt(sx(s.x[i])) << "," << fmt(sy(s.y[i])) << " ";
      }
      out << "\"/>\n";
    } else if (s.kind == Series::Kind::Stems) {
      const double base = sy(std::max(0.0, ymin));
      out << "<g stroke=\"" << s.color << "\" stroke-width=\"" << s.stroke_width << "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double px = sx(s.x[i]);
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(base) << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << fmt(sy(s.y[i])) << "\"/>\n";
      }
      out << "</g>\n";
    } else {
      out << "<g fill=\"" << s.color << "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << "<circle cx=\"" << fmt(sx(s.x[i])) << "\" cy=\"" << fmt(sy(s.y[i])) << "\" r=\""
            << s.stroke_width << "\"/>\n";
      }
      out << "</g>\n";
    }
  }

  // Axis labels and legend.
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(x_label_) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << escape(y_label_)
      << "</text>\n";
  double ly = kMarginTop + 8;
  for (const auto& [label, color] : legend_) {
    const double lx = kMarginLeft + plot_w - 150;
    out << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 8)
        << "\" width=\"14\" height=\"4\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << fmt(lx + 20) << "\" y=\"" << fmt(ly - 2)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">" << escape(label)
        << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
}

void SvgPlot::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("SvgPlot: cannot open " + path);
  write(out);
}

}  // namespace driftflow
