#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace gasket {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline const double kSqrt3 = std::sqrt(3.0);

/// Corners of the unit equilateral triangle T.
inline Vec2 corner(int j) {
  switch (j) {
    case 1: return {0.0, 0.0};
    case 2: return {0.5, kSqrt3 / 2.0};
    case 3: return {1.0, 0.0};
    default: break;
  }
  // midpoints p_4..p_6 of the sides opposite p_1..p_3
  switch (j) {
    case 4: return (corner(2) + corner(3)) / 2.0;
    case 5: return (corner(1) + corner(3)) / 2.0;
    case 6: return (corner(1) + corner(2)) / 2.0;
    default: break;
  }
  return {std::nan(""), std::nan("")};
}

inline Vec3 lift(const Vec2& p) { return {p.x(), p.y(), 0.0}; }

/// Tolerance-based point deduplication backed by a bucket hash.
///
/// Buckets are much coarser than the tolerance, and lookups scan the
/// neighbouring buckets, so two points closer than `tol` always meet.
template <int Dim>
class PointIndex {
 public:
  using Point = Eigen::Matrix<double, Dim, 1>;

  explicit PointIndex(double tol = 1e-12, double bucket = 1e-9)
      : tol_(tol), bucket_(bucket) {}

  /// Index of `p`, inserting it if no stored point lies within tolerance.
  std::size_t insert(const Point& p) {
    if (auto hit = find(p)) return *hit;
    const std::size_t id = points_.size();
    points_.push_back(p);
    table_[key(cell_of(p))].push_back(id);
    return id;
  }

  std::optional<std::size_t> find(const Point& p) const {
    const auto c = cell_of(p);
    std::array<std::int64_t, Dim> probe{};
    std::optional<std::size_t> best;
    double best_d = tol_;
    const int total = ipow3(Dim);
    for (int code = 0; code < total; ++code) {
      int rem = code;
      for (int d = 0; d < Dim; ++d) {
        probe[d] = c[d] + (rem % 3) - 1;
        rem /= 3;
      }
      auto it = table_.find(key(probe));
      if (it == table_.end()) continue;
      for (std::size_t id : it->second) {
        const double dist = (points_[id] - p).norm();
        if (dist <= best_d) {
          best_d = dist;
          best = id;
        }
      }
    }
    return best;
  }

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  static constexpr int ipow3(int n) { return n == 0 ? 1 : 3 * ipow3(n - 1); }

  std::array<std::int64_t, Dim> cell_of(const Point& p) const {
    std::array<std::int64_t, Dim> c{};
    for (int d = 0; d < Dim; ++d)
      c[d] = static_cast<std::int64_t>(std::floor(p[d] / bucket_));
    return c;
  }

  static std::uint64_t key(const std::array<std::int64_t, Dim>& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

  double tol_;
  double bucket_;
  std::vector<Point> points_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> table_;
};

}  // namespace gasket
