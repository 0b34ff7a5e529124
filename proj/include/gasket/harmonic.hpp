#pragma once

#include "gasket/gasket_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace gasket::harmonic {

/// Vertices and cells of SG_n. Vertex order matches gasket::vertices() on
/// the SG model of the same level.
struct SgMesh {
  int level = 0;
  PointIndex<2> index;
  std::vector<std::array<std::size_t, 3>> cells;  // images of p_1, p_2, p_3
  std::vector<Word> words;

  static SgMesh build(int n) {
    if (n < 0) throw std::invalid_argument("level must be non-negative");
    if (pow3(n + 1) > edge_cap()) throw ResourceError("SG mesh level exceeds the edge cap");
    SgMesh mesh;
    mesh.level = n;
    for_each_cell(Variant::sg(), n, [&](const Word& w, const AffineMap2& f) {
      const std::size_t c1 = mesh.index.insert(f(corner(1)));
      const std::size_t c3 = mesh.index.insert(f(corner(3)));
      const std::size_t c2 = mesh.index.insert(f(corner(2)));
      mesh.cells.push_back({c1, c2, c3});
      mesh.words.push_back(w);
    });
    return mesh;
  }

  std::size_t vertex_count() const { return index.size(); }
  const Vec2& point(std::size_t i) const { return index.points()[i]; }

  std::size_t require(const Vec2& x) const {
    auto hit = index.find(x);
    if (!hit)
      throw std::invalid_argument("point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                                  ") is not a vertex of V_" + std::to_string(level));
    return *hit;
  }
};

/// Real function on the vertex set V_n, indexed like SgMesh::build(n).
struct VertexFunction {
  int level = 0;
  std::vector<double> values;
};

namespace detail {

inline void check_size(const SgMesh& mesh, std::size_t n) {
  if (n != mesh.vertex_count())
    throw std::invalid_argument("vertex function has " + std::to_string(n) + " values, V_" +
                                std::to_string(mesh.level) + " has " +
                                std::to_string(mesh.vertex_count()));
}

/// Harmonic extension of vertex data from `coarse` to `fine` (one level finer).
/// Each new midpoint gets (2a + 2b + c)/5 from the two corners it joins (a, b)
/// and the opposite corner (c).
template <typename T>
std::vector<T> extend(const SgMesh& coarse, const SgMesh& fine, std::span<const T> v) {
  check_size(coarse, v.size());
  std::vector<T> out(fine.vertex_count(), T{});
  std::vector<char> set(fine.vertex_count(), 0);
  for (const auto& cell : coarse.cells) {
    const Vec2& p1 = coarse.point(cell[0]);
    const Vec2& p2 = coarse.point(cell[1]);
    const Vec2& p3 = coarse.point(cell[2]);
    const T& v1 = v[cell[0]];
    const T& v2 = v[cell[1]];
    const T& v3 = v[cell[2]];
    auto put = [&](const Vec2& x, const T& val) {
      const std::size_t i = fine.require(x);
      out[i] = val;
      set[i] = 1;
    };
    put(p1, v1);
    put(p2, v2);
    put(p3, v3);
    put((p1 + p2) / 2.0, T((2.0 * v1 + 2.0 * v2 + v3) / 5.0));
    put((p1 + p3) / 2.0, T((2.0 * v1 + 2.0 * v3 + v2) / 5.0));
    put((p2 + p3) / 2.0, T((2.0 * v2 + 2.0 * v3 + v1) / 5.0));
  }
  for (char s : set)
    if (!s) throw std::logic_error("harmonic extension left a vertex unset");
  return out;
}

}  // namespace detail

/// E_n(f) = sum over n-edges of (f(x) - f(y))^2, each edge counted once.
inline double energy(const VertexFunction& f) {
  const SgMesh mesh = SgMesh::build(f.level);
  detail::check_size(mesh, f.values.size());
  double e = 0.0;
  for (const auto& c : mesh.cells) {
    const double a = f.values[c[0]], b = f.values[c[1]], d = f.values[c[2]];
    e += (a - b) * (a - b) + (b - d) * (b - d) + (d - a) * (d - a);
  }
  return e;
}

inline VertexFunction harmonic_extend(const VertexFunction& f) {
  const SgMesh coarse = SgMesh::build(f.level);
  const SgMesh fine = SgMesh::build(f.level + 1);
  return {f.level + 1, detail::extend<double>(coarse, fine, f.values)};
}

/// (5/3)^n E_n(f)
inline double renormalized_energy(const VertexFunction& f) {
  return std::pow(5.0 / 3.0, f.level) * energy(f);
}

/// Projection P, the fixed points q_j, the maps M_j and H_j of K_H.
struct HarmonicStructure {
  Mat3 projection;
  std::array<Vec3, 3> q;
  std::array<Vec3, 3> q_perp;
  std::array<Mat3, 3> m;
  std::array<AffineMap3, 3> h;
  Vec3 normal;

  /// q'_j is n × q_j (counterclockwise about n = (1,1,1)/√3); `flip` negates it.
  static HarmonicStructure build(bool flip = false) {
    HarmonicStructure s;
    s.projection << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    s.projection /= 3.0;
    s.normal = Vec3::Ones().normalized();
    for (int j = 0; j < 3; ++j) {
      const Vec3 b = Vec3::Unit(j);
      s.q[j] = 3.0 * s.projection * b / std::sqrt(6.0);
      s.q_perp[j] = s.normal.cross(s.q[j]) * (flip ? -1.0 : 1.0);
      s.m[j] = 0.6 * s.q[j] * s.q[j].transpose() + 0.2 * s.q_perp[j] * s.q_perp[j].transpose();
      s.h[j] = AffineMap3::about_fixed_point(s.m[j], s.q[j]);
    }
    return s;
  }

  /// Coordinates of a point of Z in the basis (q_1, q'_1).
  Vec2 to_plane(const Vec3& x) const { return {x.dot(q[0]), x.dot(q_perp[0])}; }

  /// M_j written in the basis (q_1, q'_1) of Z.
  Mat2 m_plane(int j) const {
    Eigen::Matrix<double, 3, 2> basis;
    basis.col(0) = q[0];
    basis.col(1) = q_perp[0];
    return basis.transpose() * m[j - 1] * basis;
  }
};

inline const HarmonicStructure& structure() {
  static const HarmonicStructure s = HarmonicStructure::build();
  return s;
}

/// H_j(x) = M_j (x - q_j) + q_j
inline AffineMap3 h_map(int j) {
  if (j < 1 || j > 3) throw std::out_of_range("harmonic map index must be 1..3");
  return structure().h[static_cast<std::size_t>(j - 1)];
}

/// H_w = H_{w_n} ∘ ... ∘ H_{w_1}, matching compose_word.
inline AffineMap3 compose_h(const Word& w) {
  AffineMap3 out = AffineMap3::identity();
  for (std::size_t i = 0; i < w.size(); ++i) out = h_map(w[i]).after(out);
  return out;
}

/// ‖M_{w_1} ⋯ M_{w_k}‖. The M_j are symmetric, so the reversed product has
/// the same norm.
inline double m_word_norm(const Word& w, const HarmonicStructure& s = structure()) {
  Mat3 prod = Mat3::Identity();
  if (w.empty()) return 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) prod = prod * s.m[static_cast<std::size_t>(w[i] - 1)];
  Eigen::JacobiSVD<Mat3> svd(prod);
  return svd.singularValues()(0);
}

/// The products M_w, as 2x2 matrices on Z, for every word of length L in
/// lexicographic order.
inline std::vector<Mat2> m_word_products(int length) {
  const auto& s = structure();
  const std::array<Mat2, 3> mj{s.m_plane(1), s.m_plane(2), s.m_plane(3)};
  std::vector<Mat2> out;
  out.reserve(pow3(length));
  std::function<void(int, const Mat2&)> rec = [&](int depth, const Mat2& prod) {
    if (depth == length) {
      out.push_back(prod);
      return;
    }
    for (int j = 0; j < 3; ++j) rec(depth + 1, prod * mj[static_cast<std::size_t>(j)]);
  };
  rec(0, Mat2::Identity());
  return out;
}

inline double spectral_norm(const Mat2& a) {
  // largest singular value from the 2x2 Gram matrix
  const Mat2 g = a.transpose() * a;
  const double tr = g.trace();
  const double det = g.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return std::sqrt(tr / 2.0 + disc);
}

/// sqrt(3/2): makes Φ(p_j) = q_j, so that Φ ∘ f_j = H_j ∘ Φ.
inline const double kPhiScale = std::sqrt(1.5);

/// Φ on every vertex of V_N, from N harmonic extensions of the boundary data
/// h_j(p_k) = δ_jk.
class HarmonicCoordinates {
 public:
  explicit HarmonicCoordinates(int level) : mesh_(SgMesh::build(0)) {
    if (level < 0) throw std::invalid_argument("level must be non-negative");
    std::vector<Vec3> h(3);
    // V_0 order is p1, p3, p2
    h[mesh_.require(corner(1))] = Vec3::Unit(0);
    h[mesh_.require(corner(2))] = Vec3::Unit(1);
    h[mesh_.require(corner(3))] = Vec3::Unit(2);
    for (int n = 0; n < level; ++n) {
      SgMesh fine = SgMesh::build(n + 1);
      h = detail::extend<Vec3>(mesh_, fine, h);
      mesh_ = std::move(fine);
    }
    phi_.reserve(h.size());
    const Vec3 third = Vec3::Constant(1.0 / 3.0);
    for (const auto& hv : h) phi_.push_back(kPhiScale * (hv - third));
    harmonic_ = std::move(h);
  }

  int level() const { return mesh_.level; }
  const SgMesh& mesh() const { return mesh_; }
  const std::vector<Vec3>& values() const { return phi_; }

  /// (h_1, h_2, h_3) at vertex i.
  const Vec3& harmonic_values(std::size_t i) const { return harmonic_[i]; }

  const Vec3& at(const Vec2& x) const { return phi_[mesh_.require(x)]; }

 private:
  SgMesh mesh_;
  std::vector<Vec3> harmonic_;
  std::vector<Vec3> phi_;
};

/// Φ(x) for a vertex x of V_n.
inline Vec3 phi(const Vec2& x, int n) { return HarmonicCoordinates(n).at(x); }

/// Polyline bracket on the arclength of Φ(R) for one SG edge R.
struct HarmonicEdgeEstimate {
  std::vector<Vec3> samples;  // Φ at the 2^k + 1 dyadic points of the edge
  double lower = 0.0;         // polyline length L_k
  double tail = 0.0;          // min over levels of sum 2 diam(cell), minus lower
  double upper() const { return lower + tail; }
};

/// Brackets L(Φ(R)) for the SG edge `edge` (an sg-triangle or harmonic-image
/// skeleton edge of generation m) at subdivision depth k. Each sub-segment
/// of the edge is an edge of a level m+k cell; its Φ-arc lies between the
/// chord and twice the diameter of that cell's image, and the image of a
/// cell lies in the triangle spanned by its corner images, so the diameter
/// is the longest corner-to-corner distance.
inline HarmonicEdgeEstimate estimate_edge_length(const HarmonicCoordinates& coords,
                                                 const EdgeCurve& edge, int depth) {
  if (depth < 1) throw std::invalid_argument("subdivision depth must be >= 1");
  if (depth > 20) throw ResourceError("subdivision depth exceeds cap");
  if (edge.generation + depth > coords.level())
    throw std::invalid_argument("harmonic coordinates too coarse for requested depth");

  const Vec2 a = edge.p.head<2>();
  const Vec2 b = edge.q.head<2>();
  // third corner of the owning cell decides which side the sub-cells lie on
  const AffineMap2 cell = compose_word(Variant::sg(), edge.word);
  Vec2 c = cell(corner(1));
  for (int k = 1; k <= 3; ++k) {
    const Vec2 ck = cell(corner(k));
    if ((ck - a).norm() > 1e-12 && (ck - b).norm() > 1e-12) c = ck;
  }
  const Vec2 d = b - a;
  const double side = d.x() * (c - a).y() - d.y() * (c - a).x() > 0 ? 1.0 : -1.0;
  const double cs = 0.5, sn = side * kSqrt3 / 2.0;

  HarmonicEdgeEstimate est;
  const int segments = 1 << depth;
  est.samples.reserve(static_cast<std::size_t>(segments) + 1);
  for (int i = 0; i <= segments; ++i) est.samples.push_back(coords.at(a + d * (double(i) / segments)));
  for (int i = 0; i < segments; ++i)
    est.lower += (est.samples[static_cast<std::size_t>(i) + 1] - est.samples[static_cast<std::size_t>(i)]).norm();
  // every level k' <= depth gives a valid bound; keep the smallest
  double upper = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= depth; ++k) {
    const int n = 1 << k, stride = segments / n;
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec2 u = a + d * (double(i) / n);
      const Vec2 step = d / double(n);
      const Vec2 w = u + Vec2{cs * step.x() - sn * step.y(), sn * step.x() + cs * step.y()};
      const Vec3& pu = est.samples[static_cast<std::size_t>(i * stride)];
      const Vec3& pv = est.samples[static_cast<std::size_t>((i + 1) * stride)];
      const Vec3& pw = coords.at(w);
      bound += 2.0 * std::max({(pv - pu).norm(), (pw - pu).norm(), (pw - pv).norm()});
    }
    upper = std::min(upper, bound);
  }
  est.tail = upper - est.lower;
  return est;
}

/// Fills a harmonic skeleton from build_model with Φ-images: endpoints in Z,
/// length = polyline lower bound, and [length_lo, length_hi].
inline GasketModel realize_model(const GasketModel& skeleton, int depth) {
  if (skeleton.variant.kind != VariantKind::Harmonic)
    throw std::invalid_argument("realize_model expects a harmonic skeleton");
  if (skeleton.realized) return skeleton;
  const HarmonicCoordinates coords(skeleton.level + depth);
  GasketModel out = skeleton;
  for (auto& e : out.edges) {
    const auto est = estimate_edge_length(coords, e, depth);
    e.p = est.samples.front();
    e.q = est.samples.back();
    e.length = est.lower;
    e.length_lo = est.lower;
    e.length_hi = est.upper();
  }
  out.realized = true;
  out.vertices = vertices(out);
  return out;
}

}  // namespace gasket::harmonic
