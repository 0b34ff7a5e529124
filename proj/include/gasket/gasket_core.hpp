#pragma once

#include "gasket/affine_map.hpp"
#include "gasket/errors.hpp"
#include "gasket/geometry.hpp"
#include "gasket/word.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gasket {

enum class VariantKind { SG, Stretched, Harmonic };

/// One of the three gasket variants. `alpha` is only meaningful for Stretched.
struct Variant {
  VariantKind kind = VariantKind::SG;
  double alpha = 0.0;

  static Variant sg() { return {VariantKind::SG, 0.0}; }
  static Variant harmonic() { return {VariantKind::Harmonic, 0.0}; }
  static Variant stretched(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0 / 3.0))
      throw std::invalid_argument("stretched gasket requires alpha in (0, 1/3), got " +
                                  std::to_string(alpha));
    return {VariantKind::Stretched, alpha};
  }

  int generator_count() const { return kind == VariantKind::Stretched ? 6 : 3; }

  /// Similarity ratio of the three corner maps.
  double ratio() const { return kind == VariantKind::Stretched ? (1.0 - alpha) / 2.0 : 0.5; }

  std::string name() const {
    switch (kind) {
      case VariantKind::SG: return "sg";
      case VariantKind::Stretched: return "stretched";
      case VariantKind::Harmonic: return "harmonic";
    }
    return "?";
  }

  static Variant from_name(const std::string& name, std::optional<double> alpha) {
    if (name == "sg") return sg();
    if (name == "harmonic") return harmonic();
    if (name == "stretched") {
      if (!alpha) throw std::invalid_argument("stretched variant requires alpha");
      return stretched(*alpha);
    }
    throw std::invalid_argument("unknown variant '" + name + "'");
  }
};

enum class EdgeKind { SgTriangle, StretchedTriangle, StretchedJoining, HarmonicImage };

inline std::string edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::SgTriangle: return "sg-triangle";
    case EdgeKind::StretchedTriangle: return "stretched-triangle";
    case EdgeKind::StretchedJoining: return "stretched-joining";
    case EdgeKind::HarmonicImage: return "harmonic-image";
  }
  return "?";
}

inline EdgeKind edge_kind_from_name(const std::string& s) {
  if (s == "sg-triangle") return EdgeKind::SgTriangle;
  if (s == "stretched-triangle") return EdgeKind::StretchedTriangle;
  if (s == "stretched-joining") return EdgeKind::StretchedJoining;
  if (s == "harmonic-image") return EdgeKind::HarmonicImage;
  throw std::invalid_argument("unknown edge kind '" + s + "'");
}

inline bool is_triangle_kind(EdgeKind k) { return k != EdgeKind::StretchedJoining; }

/// One curve of the direct-sum triple.
struct EdgeCurve {
  std::size_t id = 0;
  EdgeKind kind = EdgeKind::SgTriangle;
  int generation = 0;
  Vec3 p = Vec3::Zero();  // e-
  Vec3 q = Vec3::Zero();  // e+
  double length = 0.0;
  Word word;
  // harmonic-image only: bracket on the arclength of the image curve
  std::optional<double> length_lo;
  std::optional<double> length_hi;
};

struct GasketModel {
  Variant variant;
  int level = 0;
  std::vector<EdgeCurve> edges;
  std::vector<Vec3> vertices;

  int dim() const { return variant.kind == VariantKind::Harmonic && realized ? 3 : 2; }

  /// Harmonic models start as the SG skeleton; set once the Φ-images are filled in.
  bool realized = false;
};

/// Default cap 3^13 on the number of edges, overridable through GASKET_MAX_EDGES.
inline std::size_t edge_cap() {
  if (const char* env = std::getenv("GASKET_MAX_EDGES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1594323;
}

inline double ipow(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

inline std::size_t pow3(int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

/// Number of edges build_model would produce.
inline std::size_t expected_edge_count(const Variant& v, int n) {
  const std::size_t tri = pow3(n + 1);
  if (v.kind != VariantKind::Stretched) return tri;
  return tri + (tri - 3) / 2;  // sum_{m<n} 3^{m+1}
}

/// Generator j of the variant, in fixed-point form x -> A_j (x - p_j) + p_j.
inline AffineMap2 generator_map(const Variant& v, int j) {
  if (j < 1 || j > v.generator_count())
    throw std::out_of_range("generator index " + std::to_string(j) + " outside 1.." +
                            std::to_string(v.generator_count()));
  if (v.kind != VariantKind::Stretched)
    return AffineMap2::about_fixed_point(0.5 * Mat2::Identity(), corner(j));

  const double a = v.alpha;
  if (!(a > 0.0 && a < 1.0 / 3.0)) throw std::invalid_argument("alpha outside (0, 1/3)");
  Mat2 m;
  switch (j) {
    case 1:
    case 2:
    case 3: m = (1.0 - a) / 2.0 * Mat2::Identity(); break;
    case 4: m << 1.0, -kSqrt3, -kSqrt3, 3.0; m *= a / 4.0; break;
    case 5: m << 1.0, 0.0, 0.0, 0.0; m *= a; break;
    default: m << 1.0, kSqrt3, kSqrt3, 3.0; m *= a / 4.0; break;
  }
  return AffineMap2::about_fixed_point(m, corner(j));
}

/// f_w = f_{w_n} ∘ ... ∘ f_{w_1}; the first letter is applied first.
inline AffineMap2 compose_word(const Variant& v, const Word& w) {
  AffineMap2 out = AffineMap2::identity();
  for (std::size_t i = 0; i < w.size(); ++i) out = generator_map(v, w[i]).after(out);
  return out;
}

/// Calls fn(word, f_word) for every word of length n over {1,2,3} in
/// lexicographic order.
inline void for_each_cell(const Variant& v, int n,
                          const std::function<void(const Word&, const AffineMap2&)>& fn) {
  std::array<AffineMap2, 3> gens{generator_map(v, 1), generator_map(v, 2), generator_map(v, 3)};
  std::function<void(const Word&, const AffineMap2&)> rec = [&](const Word& w, const AffineMap2& f) {
    if (static_cast<int>(w.size()) == n) {
      fn(w, f);
      return;
    }
    for (int j = 1; j <= 3; ++j) rec(w.appended(j), gens[static_cast<std::size_t>(j - 1)].after(f));
  };
  rec(Word{}, AffineMap2::identity());
}

/// Local triangle edges, counterclockwise from the p_1 image.
inline constexpr std::array<std::array<int, 2>, 3> kTriangleEdges{{{1, 3}, {3, 2}, {2, 1}}};

/// Endpoints (e-, e+) of the three initial joining edges e^1, e^2, e^3 of K_alpha.
inline std::array<std::array<Vec2, 2>, 3> base_joining_edges(const Variant& v) {
  const auto f4 = generator_map(v, 4), f5 = generator_map(v, 5), f6 = generator_map(v, 6);
  return {{{f4(corner(3)), f4(corner(2))},
           {f5(corner(1)), f5(corner(3))},
           {f6(corner(2)), f6(corner(1))}}};
}

/// Distinct triangle-edge endpoints in edge order.
inline std::vector<Vec3> vertices(const GasketModel& model) {
  PointIndex<3> index;
  for (const auto& e : model.edges) {
    if (!is_triangle_kind(e.kind)) continue;
    index.insert(e.p);
    index.insert(e.q);
  }
  return index.points();
}

/// Edge list of the level-n approximation. Edges are ordered by
/// (generation, address, local index); for Stretched the joining edges of
/// generations 0..n-1 precede the level-n triangle edges.
inline GasketModel build_model(const Variant& v, int n, std::size_t cap = edge_cap()) {
  if (n < 0) throw std::invalid_argument("level must be non-negative");
  if (n > 40 || expected_edge_count(v, n) > cap)
    throw ResourceError("level " + std::to_string(n) + " needs " +
                        std::to_string(expected_edge_count(v, n)) + " edges, cap is " +
                        std::to_string(cap));
  GasketModel model;
  model.variant = v;
  model.level = n;
  model.edges.reserve(expected_edge_count(v, n));

  const double r = v.ratio();
  if (v.kind == VariantKind::Stretched) {
    const auto base = base_joining_edges(v);
    for (int m = 0; m < n; ++m) {
      const double len = v.alpha * ipow(r, m);
      for_each_cell(v, m, [&](const Word& w, const AffineMap2& f) {
        for (const auto& seg : base) {
          EdgeCurve e;
          e.kind = EdgeKind::StretchedJoining;
          e.generation = m;
          e.p = lift(f(seg[0]));
          e.q = lift(f(seg[1]));
          e.length = len;
          e.word = w;
          model.edges.push_back(std::move(e));
        }
      });
    }
  }

  const EdgeKind tri_kind = v.kind == VariantKind::SG          ? EdgeKind::SgTriangle
                            : v.kind == VariantKind::Stretched ? EdgeKind::StretchedTriangle
                                                               : EdgeKind::HarmonicImage;
  const double tri_len = ipow(r, n);
  for_each_cell(v, n, [&](const Word& w, const AffineMap2& f) {
    for (const auto& [a, b] : kTriangleEdges) {
      EdgeCurve e;
      e.kind = tri_kind;
      e.generation = n;
      e.p = lift(f(corner(a)));
      e.q = lift(f(corner(b)));
      e.length = tri_len;  // harmonic: SG chord, replaced once realized
      e.word = w;
      model.edges.push_back(std::move(e));
    }
  });

  for (std::size_t i = 0; i < model.edges.size(); ++i) model.edges[i].id = i;
  model.vertices = vertices(model);
  return model;
}

}  // namespace gasket
