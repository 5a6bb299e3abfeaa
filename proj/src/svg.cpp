#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ellmap/cli.hpp"

namespace ellmap::cli {
namespace {

constexpr int kOutline = 720;
constexpr int kEllipseSegments = 64;
constexpr double kCanvas = 600.0;
const char* const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

std::vector<Vector> body_outline(const ConvexBody& k) {
  std::vector<Vector> pts;
  for (int i = 0; i < kOutline; ++i) {
    const double t = 2.0 * std::numbers::pi * i / kOutline;
    Vector d(2);
    d << std::cos(t), std::sin(t);
    pts.push_back(boundary_point(k, d));
  }
  return pts;
}

std::vector<Vector> ellipse_outline(const Ellipsoid& e) {
  const SymMatrix root = spectral_apply(e.form(), [](double l) { return 1.0 / std::sqrt(l); });
  std::vector<Vector> pts;
  for (int i = 0; i < kEllipseSegments; ++i) {
    const double t = 2.0 * std::numbers::pi * i / kEllipseSegments;
    Vector d(2);
    d << std::cos(t), std::sin(t);
    pts.push_back(root.matrix() * d);
  }
  return pts;
}

}  // namespace

std::string render_svg(const ConvexBody& k, const std::vector<Ellipsoid>& ellipsoids,
                       const std::vector<Vector>& contacts) {
  const std::vector<Vector> outline = body_outline(k);
  std::vector<std::vector<Vector>> curves;
  for (const auto& e : ellipsoids) curves.push_back(ellipse_outline(e));

  double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
  auto grow = [&](const Vector& p) {
    lo_x = std::min(lo_x, p(0));
    hi_x = std::max(hi_x, p(0));
    lo_y = std::min(lo_y, p(1));
    hi_y = std::max(hi_y, p(1));
  };
  for (const auto& p : outline) grow(p);
  for (const auto& c : curves) {
    for (const auto& p : c) grow(p);
  }
  for (const auto& p : contacts) grow(p);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double margin = 0.1 * span;
  const double scale = kCanvas / (span + 2.0 * margin);
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  auto px = [&](const Vector& p) {
    std::ostringstream s;
    s.precision(6);
    s << std::fixed << kCanvas / 2 + (p(0) - cx) * scale << "," << kCanvas / 2 - (p(1) - cy) * scale;
    return s.str();
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kCanvas
      << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <polygon class=\"body\" fill=\"#eeeeee\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < outline.size(); ++i) svg << (i ? " " : "") << px(outline[i]);
  svg << "\"/>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    svg << "  <polyline class=\"ellipsoid\" fill=\"none\" stroke=\"" << kPalette[c % 5]
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : curves[c]) svg << px(p) << " ";
    svg << px(curves[c].front()) << "\"/>\n";
  }
  for (const auto& p : contacts) {
    const std::string xy = px(p);
    const auto comma = xy.find(',');
    svg << "  <circle class=\"contact\" cx=\"" << xy.substr(0, comma) << "\" cy=\""
        << xy.substr(comma + 1) << "\" r=\"4\" fill=\"black\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ellmap::cli
