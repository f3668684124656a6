#include "seqtest/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace seqtest {

namespace {
constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  if (span <= 0) return {lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
    out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return out;
}
}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_line(const std::vector<double>& x, const std::vector<double>& y,
                       const std::string& color, const std::string& name) {
  elements_.push_back({Element::Kind::line, x, y, {}, color, name});
}

void SvgPlot::add_points(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& color, const std::string& name) {
  elements_.push_back({Element::Kind::points, x, y, {}, color, name});
}

void SvgPlot::add_band(const std::vector<double>& x, const std::vector<double>& lo,
                       const std::vector<double>& hi, const std::string& color) {
  elements_.push_back({Element::Kind::band, x, lo, hi, color, ""});
}

void SvgPlot::add_error_bars(const std::vector<double>& x, const std::vector<double>& lo,
                             const std::vector<double>& hi, const std::string& color) {
  elements_.push_back({Element::Kind::error_bars, x, lo, hi, color, ""});
}

std::string SvgPlot::render() const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& e : elements_) {
    for (double v : e.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (const auto* ys : {&e.y, &e.y2})
      for (double v : *ys) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin))
    throw std::logic_error("SvgPlot: nothing to draw");
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const auto px = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
  };
  const auto py = [&](double y) {
    return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom);
  };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "' viewBox='0 0 " << kWidth << ' ' << kHeight << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";

  for (const auto& e : elements_) {
    if (e.kind == Element::Kind::band) {
      svg << "<polygon fill='" << e.color << "' fill-opacity='0.35' stroke='none' points='";
      for (std::size_t i = 0; i < e.x.size(); ++i) svg << px(e.x[i]) << ',' << py(e.y[i]) << ' ';
      for (std::size_t i = e.x.size(); i > 0; --i)
        svg << px(e.x[i - 1]) << ',' << py(e.y2[i - 1]) << ' ';
      svg << "'/>\n";
    }
  }
  for (const auto& e : elements_) {
    switch (e.kind) {
      case Element::Kind::line: {
        svg << "<polyline fill='none' stroke='" << e.color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < e.x.size(); ++i) svg << px(e.x[i]) << ',' << py(e.y[i]) << ' ';
        svg << "'/>\n";
        break;
      }
      case Element::Kind::points: {
        for (std::size_t i = 0; i < e.x.size(); ++i)
          svg << "<circle cx='" << px(e.x[i]) << "' cy='" << py(e.y[i]) << "' r='3' fill='"
              << e.color << "'/>\n";
        break;
      }
      case Element::Kind::error_bars: {
        for (std::size_t i = 0; i < e.x.size(); ++i) {
          const double cx = px(e.x[i]);
          svg << "<line x1='" << cx << "' y1='" << py(e.y[i]) << "' x2='" << cx << "' y2='"
              << py(e.y2[i]) << "' stroke='" << e.color << "' stroke-width='1'/>\n";
        }
        break;
      }
      case Element::Kind::band: break;
    }
  }

  // axes
  svg << "<line x1='" << kLeft << "' y1='" << kHeight - kBottom << "' x2='" << kWidth - kRight
      << "' y2='" << kHeight - kBottom << "' stroke='black'/>\n"
      << "<line x1='" << kLeft << "' y1='" << kTop << "' x2='" << kLeft << "' y2='"
      << kHeight - kBottom << "' stroke='black'/>\n";
  for (double t : ticks(xmin, xmax)) {
    const double x = px(t);
    svg << "<line x1='" << x << "' y1='" << kHeight - kBottom << "' x2='" << x << "' y2='"
        << kHeight - kBottom + 5 << "' stroke='black'/>\n"
        << "<text x='" << x << "' y='" << kHeight - kBottom + 18
        << "' font-size='11' text-anchor='middle'>" << fmt(t) << "</text>\n";
  }
  for (double t : ticks(ymin, ymax)) {
    const double y = py(t);
    svg << "<line x1='" << kLeft - 5 << "' y1='" << y << "' x2='" << kLeft << "' y2='" << y
        << "' stroke='black'/>\n"
        << "<text x='" << kLeft - 8 << "' y='" << y + 4
        << "' font-size='11' text-anchor='end'>" << fmt(t) << "</text>\n";
  }
  svg << "<text x='" << (kLeft + kWidth - kRight) / 2 << "' y='20' font-size='14' "
      << "text-anchor='middle'>" << title_ << "</text>\n"
      << "<text x='" << (kLeft + kWidth - kRight) / 2 << "' y='" << kHeight - 12
      << "' font-size='12' text-anchor='middle'>" << x_label_ << "</text>\n"
      << "<text x='16' y='" << (kTop + kHeight - kBottom) / 2
      << "' font-size='12' text-anchor='middle' transform='rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")'>" << y_label_ << "</text>\n";

  // legend
  double ly = kTop + 8;
  for (const auto& e : elements_) {
    if (e.name.empty()) continue;
    svg << "<line x1='" << kWidth - kRight - 150 << "' y1='" << ly << "' x2='"
        << kWidth - kRight - 125 << "' y2='" << ly << "' stroke='" << e.color
        << "' stroke-width='2'/>\n"
        << "<text x='" << kWidth - kRight - 120 << "' y='" << ly + 4 << "' font-size='11'>"
        << e.name << "</text>\n";
    ly += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << render();
}

}  // namespace seqtest
