#ifndef SEQTEST_SVG_HPP
#define SEQTEST_SVG_HPP

#include <string>
#include <vector>

namespace seqtest {

/// Minimal line/scatter/band renderer, enough for the experiment plots.
/// Coordinates are data-space; ranges are fitted to the added elements.
class SvgPlot {
public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_line(const std::vector<double>& x, const std::vector<double>& y,
                const std::string& color, const std::string& name = "");
  void add_points(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, const std::string& name = "");
  void add_band(const std::vector<double>& x, const std::vector<double>& lo,
                const std::vector<double>& hi, const std::string& color);
  /// Vertical error bars, e.g. binomial confidence intervals.
  void add_error_bars(const std::vector<double>& x, const std::vector<double>& lo,
                      const std::vector<double>& hi, const std::string& color);

  std::string render() const;
  void save(const std::string& path) const;

private:
  struct Element {
    enum class Kind { line, points, band, error_bars } kind;
    std::vector<double> x, y, y2;
    std::string color, name;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Element> elements_;
};

}  // namespace seqtest

#endif
