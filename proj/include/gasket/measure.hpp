#pragma once

#include "gasket/expr.hpp"
#include "gasket/gasket_core.hpp"
#include "gasket/harmonic.hpp"
#include "gasket/polynomial.hpp"
#include "gasket/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace gasket::measure {

using TestFunction = std::function<double(const Vec3&)>;

inline TestFunction from_expr(const expr::Expr& e) {
  return [e](const Vec3& x) { return expr::evaluate(e, x); };
}

enum class Family { Sg, Harmonic, Stretched };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::Sg: return "sg";
    case Family::Harmonic: return "harmonic";
    case Family::Stretched: return "stretched";
  }
  return "?";
}

/// Weighted point set representing a ψ-type functional.
struct FunctionalSample {
  std::string tag;
  int level = 0;
  std::vector<Vec3> points;
  std::vector<double> weights;

  bool uniform = true;  // every weight is 1 / points.size()

  double operator()(const TestFunction& f) const {
    long double s = 0.0L;
    if (uniform) {
      for (const auto& x : points) s += f(x);
      return static_cast<double>(s / static_cast<long double>(points.size()));
    }
    for (std::size_t i = 0; i < points.size(); ++i) s += static_cast<long double>(weights[i]) * f(points[i]);
    return static_cast<double>(s);
  }

  double total_weight() const {
    long double s = 0.0L;
    for (double w : weights) s += w;
    return static_cast<double>(s);
  }
};

namespace detail {

inline void guard(int n, std::size_t points) {
  if (n < 0) throw std::invalid_argument("functional level must be non-negative");
  if (n > 30 || points > 3 * edge_cap()) throw ResourceError("functional level " + std::to_string(n) + " exceeds the cap");
}

}  // namespace detail

/// Edge midpoints of the 3^n cells of SG_n, weight 1/3^{n+1} each.
inline FunctionalSample sg_midpoints(int n) {
  detail::guard(n, pow3(n + 1));
  FunctionalSample s{"sg-midpoints(" + std::to_string(n) + ")", n, {}, {}, true};
  const double w = 1.0 / static_cast<double>(pow3(n + 1));
  for_each_cell(Variant::sg(), n, [&](const Word&, const AffineMap2& f) {
    for (int j = 4; j <= 6; ++j) {
      s.points.push_back(lift(f(corner(j))));
      s.weights.push_back(w);
    }
  });
  return s;
}

/// Φ-images of the SG_n edge midpoints, formed as H_w(Φ(x)) for the three
/// level-1 midpoints x.
inline FunctionalSample harmonic_midpoints(int n) {
  detail::guard(n, pow3(n + 1));
  FunctionalSample s{"harmonic-midpoints(" + std::to_string(n) + ")", n, {}, {}, true};
  const harmonic::HarmonicCoordinates base(1);
  std::array<Vec3, 3> mids;
  for (int j = 4; j <= 6; ++j) mids[static_cast<std::size_t>(j - 4)] = base.at(corner(j));
  const double w = 1.0 / static_cast<double>(pow3(n + 1));
  const auto& st = harmonic::structure();
  std::function<void(int, const AffineMap3&)> rec = [&](int depth, const AffineMap3& h) {
    if (depth == n) {
      for (const auto& m : mids) {
        s.points.push_back(h(m));
        s.weights.push_back(w);
      }
      return;
    }
    for (int j = 0; j < 3; ++j) rec(depth + 1, st.h[static_cast<std::size_t>(j)].after(h));
  };
  rec(0, AffineMap3::identity());
  return s;
}

/// Endpoints of the joining edges of generation n-1 (the set J_n minus J_{n-1}),
/// weight 2^{-1} 3^{-n} each.
inline FunctionalSample stretched_joining(double alpha, int n) {
  if (n < 1) throw std::invalid_argument("stretched functional needs n >= 1");
  detail::guard(n, 2 * pow3(n));
  const Variant v = Variant::stretched(alpha);
  FunctionalSample s{"stretched-joining(" + std::to_string(n) + ")", n, {}, {}, true};
  const double w = 0.5 / static_cast<double>(pow3(n));
  const auto base = base_joining_edges(v);
  for_each_cell(v, n - 1, [&](const Word&, const AffineMap2& f) {
    for (const auto& seg : base) {
      for (const auto& x : seg) {
        s.points.push_back(lift(f(x)));
        s.weights.push_back(w);
      }
    }
  });
  return s;
}

inline double psi_sg(int n, const TestFunction& f) { return sg_midpoints(n)(f); }
inline double psi_harmonic(int n, const TestFunction& f) { return harmonic_midpoints(n)(f); }
inline double psi_alpha(double alpha, int n, const TestFunction& f) { return stretched_joining(alpha, n)(f); }

/// ψ_n(h∘Φ), computed from the harmonic-extension coordinates.
inline double psi_sg_of_phi(int n, const TestFunction& h) {
  const harmonic::HarmonicCoordinates coords(n + 1);
  const auto mids = sg_midpoints(n);
  double s = 0.0;
  for (std::size_t i = 0; i < mids.points.size(); ++i)
    s += mids.weights[i] * h(coords.at(mids.points[i].head<2>()));
  return s;
}

/// |ψ_{n+1}(f) - (1/3) Σ_j ψ_n(f ∘ G_j)|
inline double self_affinity_residual(Family family, int n, const TestFunction& f, double alpha = 0.2) {
  double lhs = 0.0, rhs = 0.0;
  switch (family) {
    case Family::Sg: {
      lhs = psi_sg(n + 1, f);
      for (int j = 1; j <= 3; ++j) {
        const auto g = generator_map(Variant::sg(), j);
        rhs += psi_sg(n, [&](const Vec3& x) { return f(lift(g(x.head<2>()))); });
      }
      break;
    }
    case Family::Harmonic: {
      lhs = psi_harmonic(n + 1, f);
      for (int j = 1; j <= 3; ++j) {
        const auto g = harmonic::h_map(j);
        rhs += psi_harmonic(n, [&](const Vec3& x) { return f(g(x)); });
      }
      break;
    }
    case Family::Stretched: {
      if (n < 1) throw std::invalid_argument("stretched functional needs n >= 1");
      const Variant v = Variant::stretched(alpha);
      lhs = psi_alpha(alpha, n + 1, f);
      for (int j = 1; j <= 3; ++j) {
        const auto g = generator_map(v, j);
        rhs += psi_alpha(alpha, n, [&](const Vec3& x) { return f(lift(g(x.head<2>()))); });
      }
      break;
    }
  }
  return std::abs(lhs - rhs / 3.0);
}

// ---------------------------------------------------------------------------
// Dixmier functional on K_alpha

namespace detail {

/// Monomials x^i y^j with i + j <= degree.
inline std::vector<std::array<int, 2>> monomials(int degree) {
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= degree; ++d)
    for (int i = d; i >= 0; --i) out.push_back({i, d - i});
  return out;
}

/// Σ_j ℓ_j^p f̄_j summed over the curves of K_alpha, for planar polynomial f:
/// with T g = Σ_{j=1..3} g ∘ F_j acting on polynomials of bounded degree, the
/// generation-m contribution is r^{mp} v_p(T^m f), where v_p sums the three
/// corners (each corner closes two triangle edges, each edge carries half of
/// each endpoint) and α^p times the endpoint mean over the three joining edges.
class MomentSeries {
 public:
  MomentSeries(double alpha, int degree) : variant_(Variant::stretched(alpha)), basis_(monomials(degree)) {
    const std::size_t n = basis_.size();
    for (std::size_t k = 0; k < n; ++k) index_[basis_[k]] = k;
    t_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (int j = 1; j <= 3; ++j) {
      const auto f = generator_map(variant_, j);
      for (std::size_t k = 0; k < n; ++k) {
        const Polynomial mono = Polynomial::variable(0).pow(basis_[k][0]) * Polynomial::variable(1).pow(basis_[k][1]);
        const Polynomial image = mono.compose(f);
        for (const auto& [e, c] : image.terms())
          t_(static_cast<Eigen::Index>(index_.at({e[0], e[1]})), static_cast<Eigen::Index>(k)) += c;
      }
    }
    tri_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    join_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const auto edges = base_joining_edges(variant_);
    for (std::size_t k = 0; k < n; ++k) {
      auto mono = [&](const Vec2& x) { return std::pow(x.x(), basis_[k][0]) * std::pow(x.y(), basis_[k][1]); };
      for (int c = 1; c <= 3; ++c) tri_[static_cast<Eigen::Index>(k)] += mono(corner(c));
      for (const auto& seg : edges) join_[static_cast<Eigen::Index>(k)] += 0.5 * (mono(seg[0]) + mono(seg[1]));
    }
  }

  Eigen::VectorXd coefficients(const Polynomial& f) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_.size()));
    for (const auto& [e, v] : f.terms()) {
      if (e[2] != 0) throw std::invalid_argument("test functions on K_alpha use x and y only");
      c[static_cast<Eigen::Index>(index_.at({e[0], e[1]}))] += v;
    }
    return c;
  }

  double operator()(const Eigen::VectorXd& c, double p) const {
    const double r = variant_.ratio();
    const Eigen::Index n = t_.rows();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - std::pow(r, p) * t_;
    const Eigen::VectorXd g = a.partialPivLu().solve(c);
    return tri_.dot(g) + std::pow(variant_.alpha, p) * join_.dot(g);
  }

 private:
  Variant variant_;
  std::vector<std::array<int, 2>> basis_;
  std::map<std::array<int, 2>, std::size_t> index_;
  Eigen::MatrixXd t_;
  Eigen::VectorXd tri_, join_;
};

}  // namespace detail

struct DixmierResult {
  double value = 0.0;
  bool converged = false;
  spectrum::ResidueEstimate residue;
};

/// lim_{s→1+} (s-1) Σ_j f̄_j β_p ℓ_j^p, p = d_α s, over every curve of K_alpha.
/// Polynomial f is summed exactly by moment recursion. Any other f is
/// replaced, on each cell of generation `cells`, by its affine interpolant at
/// the cell corners; the finitely many coarser curves do not affect the residue.
inline DixmierResult dixmier_functional(double alpha, const expr::Expr& f,
                                        const std::vector<double>& ladder = spectrum::default_ladder(),
                                        int cells = 6) {
  const Variant v = Variant::stretched(alpha);
  const double ds = spectrum::stretched_dimension(alpha);
  const double r = v.ratio();

  std::function<double(double)> series;
  if (auto poly = expr::to_polynomial(f)) {
    if (poly->degree() > 12) throw ResourceError("test polynomial degree above 12");
    auto ms = std::make_shared<detail::MomentSeries>(alpha, std::max(1, poly->degree()));
    const Eigen::VectorXd c = ms->coefficients(*poly);
    series = [ms, c](double p) { return (*ms)(c, p); };
  } else {
    auto ms = std::make_shared<detail::MomentSeries>(alpha, 1);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(3);
    // affine g with g(p_k) = f(F_w(p_k)): g = a + b x + c y
    Mat3 interp;
    for (int k = 1; k <= 3; ++k) interp.row(k - 1) << 1.0, corner(k).x(), corner(k).y();
    const Mat3 inv = interp.inverse();
    for_each_cell(v, cells, [&](const Word&, const AffineMap2& fw) {
      Vec3 vals;
      for (int k = 1; k <= 3; ++k) vals[k - 1] = expr::evaluate(f, fw(corner(k)));
      total += inv * vals;  // basis order 1, x, y
    });
    series = [ms, total, r, cells](double p) { return std::pow(r, cells * p) * (*ms)(total, p); };
  }

  std::vector<double> raw;
  for (double e : ladder) {
    const double p = ds * (1.0 + e);
    raw.push_back(e * spectrum::beta(p) * series(p));
  }
  DixmierResult out;
  out.residue = spectrum::richardson(ladder, raw);
  out.value = out.residue.value;
  out.converged = out.residue.converged;
  return out;
}

struct SpreadReport {
  int length = 0;
  double d = 0.0;
  double min = 0.0;
  double max = 0.0;
  double ratio = 1.0;
  double mu_mass_min = 1.0;  // 3^L μ(H_w(K_H)) over |w| = L
  double mu_mass_max = 1.0;
};

/// r_w = 3^L ‖M_w‖^d over |w| = L, against the self-affine mass 3^L 3^{-L}.
inline SpreadReport hausdorff_vs_selfaffine(double d, int length) {
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  if (length < 0 || length > 8) throw std::invalid_argument("word length must be 0..8");
  SpreadReport rep;
  rep.length = length;
  rep.d = d;
  rep.min = std::numeric_limits<double>::infinity();
  rep.max = 0.0;
  const double scale = static_cast<double>(pow3(length));
  rep.mu_mass_min = std::numeric_limits<double>::infinity();
  rep.mu_mass_max = 0.0;
  const auto products = harmonic::m_word_products(length);
  // each level-L cell carries mass 1 / (number of words)
  const double mu = scale / static_cast<double>(products.size());
  for (const auto& m : products) {
    const double r = scale * std::pow(harmonic::spectral_norm(m), d);
    rep.min = std::min(rep.min, r);
    rep.max = std::max(rep.max, r);
    rep.mu_mass_min = std::min(rep.mu_mass_min, mu);
    rep.mu_mass_max = std::max(rep.mu_mass_max, mu);
  }
  rep.ratio = rep.max / rep.min;
  return rep;
}

}  // namespace gasket::measure
