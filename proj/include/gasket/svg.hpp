#pragma once

#include "gasket/gasket_core.hpp"
#include "gasket/harmonic.hpp"
#include "gasket/model_io.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace gasket::svg {

/// One <line> per straight edge; harmonic edges become <polyline>s through
/// Φ of the 2^depth + 1 dyadic points, projected onto (q_1, q'_1).
inline std::string render(const GasketModel& m, int depth = 3, double width = 800.0) {
  std::vector<std::vector<Vec2>> curves;
  curves.reserve(m.edges.size());
  if (m.variant.kind == VariantKind::Harmonic) {
    const harmonic::HarmonicCoordinates coords(m.level + depth);
    const auto& st = harmonic::structure();
    for (const auto& e : m.edges) {
      const AffineMap2 cell = compose_word(Variant::sg(), e.word);
      const auto& local = kTriangleEdges[e.id % 3];
      const Vec2 a = cell(corner(local[0])), b = cell(corner(local[1]));
      std::vector<Vec2> pts;
      const int n = 1 << depth;
      for (int i = 0; i <= n; ++i) pts.push_back(st.to_plane(coords.at(a + (b - a) * (double(i) / n))));
      curves.push_back(std::move(pts));
    }
  } else {
    for (const auto& e : m.edges) curves.push_back({e.p.head<2>(), e.q.head<2>()});
  }

  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!curves.empty()) {
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -std::numeric_limits<double>::infinity();
    for (const auto& c : curves)
      for (const auto& p : c) {
        x0 = std::min(x0, p.x());
        x1 = std::max(x1, p.x());
        y0 = std::min(y0, p.y());
        y1 = std::max(y1, p.y());
      }
  }
  const double margin = 10.0;
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double k = (width - 2 * margin) / span;
  const double height = (y1 - y0) * k + 2 * margin;
  auto px = [&](const Vec2& p) {
    return Vec2{margin + (p.x() - x0) * k, height - margin - (p.y() - y0) * k};
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
     << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n"
     << "<g stroke=\"black\" stroke-width=\"0.5\" fill=\"none\">\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const bool joining = m.edges[i].kind == EdgeKind::StretchedJoining;
    const char* style = joining ? " stroke=\"#c03030\"" : "";
    if (c.size() == 2) {
      const Vec2 a = px(c[0]), b = px(c[1]);
      os << "<line x1=\"" << num(a.x()) << "\" y1=\"" << num(a.y()) << "\" x2=\"" << num(b.x()) << "\" y2=\""
         << num(b.y()) << "\"" << style << "/>\n";
    } else {
      os << "<polyline points=\"";
      for (std::size_t j = 0; j < c.size(); ++j) {
        const Vec2 a = px(c[j]);
        os << (j ? " " : "") << num(a.x()) << "," << num(a.y());
      }
      os << "\"/>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

inline void emit_svg(const GasketModel& m, const std::string& path, int depth = 3) {
  io::write_file(path, render(m, depth));
}

}  // namespace gasket::svg
