#pragma once

#include "gasket/affine_map.hpp"
#include "gasket/geometry.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gasket {

/// Sparse real polynomial in (x, y, z).
class Polynomial {
 public:
  using Exponent = std::array<int, 3>;

  Polynomial() = default;
  static Polynomial constant(double c) {
    Polynomial p;
    if (c != 0.0) p.terms_[{0, 0, 0}] = c;
    return p;
  }
  static Polynomial variable(int i) {
    Polynomial p;
    Exponent e{0, 0, 0};
    e[static_cast<std::size_t>(i)] = 1;
    p.terms_[e] = 1.0;
    return p;
  }

  const std::map<Exponent, double>& terms() const { return terms_; }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }

  bool is_constant() const { return degree() == 0; }
  double constant_term() const {
    auto it = terms_.find({0, 0, 0});
    return it == terms_.end() ? 0.0 : it->second;
  }

  double coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  double operator()(const Vec3& x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_)
      s += c * std::pow(x[0], e[0]) * std::pow(x[1], e[1]) * std::pow(x[2], e[2]);
    return s;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    for (const auto& [e, c] : b.terms_) a.terms_[e] += c;
    a.prune();
    return a;
  }
  friend Polynomial operator*(double k, Polynomial a) {
    for (auto& [e, c] : a.terms_) c *= k;
    a.prune();
    return a;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_)
        r.terms_[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
    r.prune();
    return r;
  }

  Polynomial pow(int n) const {
    if (n < 0) throw std::domain_error("negative power of a polynomial");
    Polynomial r = constant(1.0), base = *this;
    while (n > 0) {
      if (n & 1) r = r * base;
      base = base * base;
      n >>= 1;
    }
    return r;
  }

  /// p ∘ F for a planar affine map F (z is left alone).
  Polynomial compose(const AffineMap2& f) const {
    const std::array<Polynomial, 3> sub{
        Polynomial::constant(f.offset[0]) + f.linear(0, 0) * variable(0) + f.linear(0, 1) * variable(1),
        Polynomial::constant(f.offset[1]) + f.linear(1, 0) * variable(0) + f.linear(1, 1) * variable(1),
        variable(2)};
    Polynomial r;
    for (const auto& [e, c] : terms_) r = r + c * (sub[0].pow(e[0]) * sub[1].pow(e[1]) * sub[2].pow(e[2]));
    return r;
  }

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }

  std::map<Exponent, double> terms_;
};

}  // namespace gasket
