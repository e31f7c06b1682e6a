#include "ensemble_lens/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ensemble_lens {

namespace {

constexpr double kMargin = 40.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string boxplot_svg(const AugmentedEnsemble& e, const Analysis& a, int width, int height) {
  const auto& t = e.time.values;
  const auto& box = a.boxplot;

  double lo = *std::min_element(box.outer_band.lower.begin(), box.outer_band.lower.end());
  double hi = *std::max_element(box.outer_band.upper.begin(), box.outer_band.upper.end());
  for (auto i : box.outliers) {
    const auto c = e.curves.row(i);
    lo = std::min(lo, *std::min_element(c.begin(), c.end()));
    hi = std::max(hi, *std::max_element(c.begin(), c.end()));
  }
  if (hi <= lo) hi = lo + 1.0;
  const double w = width - 2 * kMargin;
  const double h = height - 2 * kMargin;
  auto sx = [&](std::size_t k) { return kMargin + w * (t[k] - t.front()) / (t.back() - t.front()); };
  auto sy = [&](double v) { return kMargin + h * (hi - v) / (hi - lo); };

  auto polyline = [&](std::span<const double> c) {
    std::string pts;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) pts.push_back(' ');
      pts += fmt(sx(k)) + "," + fmt(sy(c[k]));
    }
    return pts;
  };
  auto area = [&](const FunctionalBand& b) {
    std::string pts = polyline(b.upper);
    for (std::size_t k = b.lower.size(); k-- > 0;) pts += " " + fmt(sx(k)) + "," + fmt(sy(b.lower[k]));
    return pts;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<polygon points=\"" << area(box.outer_band) << "\" fill=\"#b2182b\" fill-opacity=\"0.85\"/>\n";
  svg << "<polygon points=\"" << area(box.inner_band) << "\" fill=\"#f4a582\" fill-opacity=\"0.95\"/>\n";
  for (auto i : box.outliers) {
    svg << "<polyline points=\"" << polyline(e.curves.row(i))
        << "\" fill=\"none\" stroke=\"#2166ac\" stroke-width=\"1\" stroke-dasharray=\"4 2\"/>\n";
  }
  svg << "<polyline points=\"" << polyline(box.median_curve)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 12 << "\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(e.name) << "  explained variance " << fmt(100.0 * a.plane.explained_variance) << "%</text>\n";
  svg << "<text x=\"" << kMargin << "\" y=\"" << height - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">t = "
      << fmt(t.front()) << " .. " << fmt(t.back()) << ", y = " << fmt(lo) << " .. " << fmt(hi) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ensemble_lens
