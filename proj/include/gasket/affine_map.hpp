#pragma once

#include <Eigen/Dense>

namespace gasket {

/// Affine map x -> A x + b in dimension Dim.
template <int Dim>
struct AffineMap {
  using Matrix = Eigen::Matrix<double, Dim, Dim>;
  using Vector = Eigen::Matrix<double, Dim, 1>;

  Matrix linear = Matrix::Identity();
  Vector offset = Vector::Zero();

  static AffineMap identity() { return {}; }

  /// x -> A (x - p) + p
  static AffineMap about_fixed_point(const Matrix& a, const Vector& p) {
    return {a, p - a * p};
  }

  Vector operator()(const Vector& x) const { return linear * x + offset; }

  /// this ∘ inner
  AffineMap after(const AffineMap& inner) const {
    return {linear * inner.linear, linear * inner.offset + offset};
  }

  /// Largest singular value of the linear part.
  double norm() const {
    Eigen::JacobiSVD<Matrix> svd(linear);
    return svd.singularValues()(0);
  }
};

using AffineMap2 = AffineMap<2>;
using AffineMap3 = AffineMap<3>;

}  // namespace gasket
