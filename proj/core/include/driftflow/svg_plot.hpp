#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace driftflow {

// Minimal SVG line/stem plotting: enough for density curves, particle stems,
// and map overlays without a plotting dependency. Output is deterministic
// (fixed-precision coordinates).
class SvgPlot {
public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_line(std::span<const double> x, std::span<const double> y,
                const std::string& color, double stroke_width = 1.5,
                bool dashed = false);
  // Vertical stems from y=0 to the given heights.
  void add_stems(std::span<const double> x, std::span<const double> heights,
                 const std::string& color, double stroke_width = 1.0);
  void add_points(std::span<const double> x, std::span<const double> y,
                  const std::string& color, double radius = 2.0);
  // Legend entry (swatch + text); purely cosmetic.
  void add_legend(const std::string& label, const std::string& color);

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

private:
  struct Series {
    enum class Kind { Line, Stems, Points } kind;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    double stroke_width;
    bool dashed;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

}  // namespace driftflow
