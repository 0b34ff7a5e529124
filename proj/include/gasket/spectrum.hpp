#pragma once

#include "gasket/errors.hpp"
#include "gasket/gasket_core.hpp"
#include "gasket/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gasket::spectrum {

/// Riemann zeta for real p > 1 (Euler-Maclaurin, N = 16, ten Bernoulli terms).
inline double zeta(double p) {
  if (!(p > 1.0 + 1e-9)) throw std::domain_error("zeta requires p > 1, got " + std::to_string(p));
  // B_2k / (2k)!
  static constexpr long double kB[] = {
      1.0L / 12.0L,
      -1.0L / 720.0L,
      1.0L / 30240.0L,
      -1.0L / 1209600.0L,
      1.0L / 47900160.0L,
      -691.0L / 1307674368000.0L,
      1.0L / 74724249600.0L,
      -3617.0L / 10670622842880000.0L,
      43867.0L / 5109094217170944000.0L,
      -174611.0L / 802857662698291200000.0L,
  };
  const long double s = p;
  const int n = 16;
  long double sum = 0.0L;
  for (int k = n - 1; k >= 1; --k) sum += std::pow(static_cast<long double>(k), -s);
  const long double nn = n;
  sum += std::pow(nn, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(nn, -s);
  // rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}
  long double rising = s;
  long double power = std::pow(nn, -s - 1.0L);
  for (int k = 0; k < 10; ++k) {
    sum += kB[k] * rising * power;
    rising *= (s + 2 * k + 1) * (s + 2 * k + 2);
    power /= nn * nn;
  }
  return static_cast<double>(sum);
}

/// β_p = 2^{p+1} (1 - 2^{-p}) ζ(p) / π^p
inline double beta(double p) {
  return std::pow(2.0, p + 1.0) * (1.0 - std::pow(2.0, -p)) * zeta(p) / std::pow(std::numbers::pi, p);
}

/// tr |D_ℓ|^{-p} for one curve of length ℓ.
inline double curve_trace(double length, double p) {
  if (!(length > 0.0)) throw std::invalid_argument("curve length must be positive");
  return beta(p) * std::pow(length, p);
}

/// Lengths ℓ0 r^n with multiplicity m0 q^n, n >= 0.
struct GeometricFamily {
  double length0 = 1.0;
  double ratio = 0.5;
  double mult0 = 1.0;
  double mult_ratio = 1.0;

  double abscissa() const { return std::log(mult_ratio) / -std::log(ratio); }

  double sum(double p) const {
    const double q = mult_ratio * std::pow(ratio, p);
    if (!(q < 1.0)) throw DivergenceError("geometric length family diverges at p = " + std::to_string(p));
    return mult0 * std::pow(length0, p) / (1.0 - q);
  }

  /// Contribution of generations n > last.
  double tail(double p, int last) const {
    const double q = mult_ratio * std::pow(ratio, p);
    if (!(q < 1.0)) return std::numeric_limits<double>::infinity();
    return mult0 * std::pow(length0, p) * std::pow(q, last + 1) / (1.0 - q);
  }
};

struct LengthEntry {
  double length = 1.0;
  double multiplicity = 1.0;
  int generation = 0;
};

/// Multiset of curve lengths. Finite entries plus symbolic geometric families.
struct LengthSpectrum {
  std::vector<LengthEntry> entries;
  std::vector<GeometricFamily> families;
  std::optional<double> stretched_alpha;  // set when the families are exactly K_alpha's
  double scale = 1.0;                     // applies to the stretched closed form only

  /// Triangle lengths ((1-α)/2)^n and joining lengths α((1-α)/2)^n, both with multiplicity 3^{n+1}.
  static LengthSpectrum stretched(double alpha) {
    const Variant v = Variant::stretched(alpha);
    LengthSpectrum s;
    s.families.push_back({1.0, v.ratio(), 3.0, 3.0});
    s.families.push_back({alpha, v.ratio(), 3.0, 3.0});
    s.stretched_alpha = alpha;
    return s;
  }

  /// Triangle edges of SG: lengths 2^{-n}, multiplicity 3^{n+1}.
  static LengthSpectrum sg() {
    LengthSpectrum s;
    s.families.push_back({1.0, 0.5, 3.0, 3.0});
    return s;
  }

  static LengthSpectrum single(double length) {
    LengthSpectrum s;
    s.entries.push_back({length, 1.0, 0});
    return s;
  }

  LengthSpectrum scaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
    LengthSpectrum s = *this;
    for (auto& e : s.entries) e.length *= lambda;
    for (auto& f : s.families) f.length0 *= lambda;
    s.scale *= lambda;
    return s;
  }

  /// Disjoint union.
  LengthSpectrum merged(const LengthSpectrum& other) const {
    LengthSpectrum s = *this;
    s.entries.insert(s.entries.end(), other.entries.begin(), other.entries.end());
    s.families.insert(s.families.end(), other.families.begin(), other.families.end());
    s.stretched_alpha.reset();
    s.scale = 1.0;
    return s;
  }

  bool empty() const { return entries.empty() && families.empty(); }

  /// Abscissa of convergence of Σ ℓ^p. Finite spectra have abscissa 0.
  double abscissa() const {
    double a = 0.0;
    for (const auto& f : families) a = std::max(a, f.abscissa());
    return a;
  }

  /// Σ mult ℓ^p over the entries of one generation.
  double generation_sum(int generation, double p) const {
    double s = 0.0;
    for (const auto& e : entries)
      if (e.generation == generation) s += e.multiplicity * std::pow(e.length, p);
    return s;
  }

  int max_generation() const {
    int g = -1;
    for (const auto& e : entries) g = std::max(g, e.generation);
    return g;
  }
};

/// d_α = log 3 / (log 2 - log(1 - α))
inline double stretched_dimension(double alpha) {
  Variant::stretched(alpha);
  return std::log(3.0) / (std::log(2.0) - std::log(1.0 - alpha));
}

/// β_p 2^p (3 + 3α^p) / (2^p - 3(1-α)^p)
inline double stretched_trace(double alpha, double p) {
  Variant::stretched(alpha);
  const double denom = std::pow(2.0, p) - 3.0 * std::pow(1.0 - alpha, p);
  if (!(p > 1.0) || !(denom > 0.0))
    throw DivergenceError("trace of K_alpha diverges at p = " + std::to_string(p));
  return beta(p) * std::pow(2.0, p) * (3.0 + 3.0 * std::pow(alpha, p)) / denom;
}

/// tr |D|^{-p} = β_p Σ ℓ_j^p
inline double model_trace(const LengthSpectrum& s, double p) {
  if (s.empty()) return 0.0;
  if (!(p > 1.0)) throw DivergenceError("curve traces need p > 1, got " + std::to_string(p));
  if (!s.families.empty() && !(p > s.abscissa()))
    throw DivergenceError("p = " + std::to_string(p) + " is at or below the abscissa " +
                          std::to_string(s.abscissa()));
  if (s.stretched_alpha && s.entries.empty())
    return std::pow(s.scale, p) * stretched_trace(*s.stretched_alpha, p);
  double sum = 0.0;
  for (const auto& e : s.entries) sum += e.multiplicity * std::pow(e.length, p);
  for (const auto& f : s.families) sum += f.sum(p);
  return beta(p) * sum;
}

/// Finite spectrum of a variant, one entry per generation and curve kind:
/// triangle curves of every generation 0..G and, for K_alpha, the joining
/// curves of generations 0..G. Multiplicities are from the built models.
inline LengthSpectrum spectrum_from_models(const Variant& v, int generations) {
  if (v.kind == VariantKind::Harmonic)
    throw std::invalid_argument("harmonic lengths come from the harmonic length table");
  LengthSpectrum s;
  auto add = [&](const GasketModel& m, bool joining) {
    std::map<std::pair<int, long long>, LengthEntry> groups;
    for (const auto& e : m.edges) {
      if ((e.kind == EdgeKind::StretchedJoining) != joining) continue;
      const auto key = std::make_pair(e.generation, std::llround(e.length * 1e12));
      auto [it, fresh] = groups.try_emplace(key, LengthEntry{e.length, 0.0, e.generation});
      it->second.multiplicity += 1.0;
    }
    for (const auto& [k, g] : groups) s.entries.push_back(g);
  };
  for (int m = 0; m <= generations; ++m) add(build_model(v, m), false);
  if (v.kind == VariantKind::Stretched) add(build_model(v, generations + 1), true);
  return s;
}

enum class DimensionMethod { ClosedForm, TruncationTail };

struct DimensionEstimate {
  double lower = 0.0;
  double upper = 0.0;
  DimensionMethod method = DimensionMethod::ClosedForm;
  double width() const { return upper - lower; }
  double mid() const { return 0.5 * (lower + upper); }
};

/// Brackets the abscissa of a truncated spectrum by bisection on the growth
/// ratio of the last two generations: Σ_G ℓ^s / Σ_{G-1} ℓ^s crosses 1 there.
inline DimensionEstimate truncated_dimension(const LengthSpectrum& s, double tol = 1e-6) {
  const int g = s.max_generation();
  if (g < 1) throw std::invalid_argument("truncated dimension needs at least two generations");
  auto growth = [&](double p) { return s.generation_sum(g, p) / s.generation_sum(g - 1, p); };
  double lo = 1e-6, hi = 1.0;
  while (growth(hi) >= 1.0) {
    hi *= 2.0;
    if (hi > 1e3) throw ConvergenceError("truncated series does not settle below growth 1");
  }
  if (growth(lo) < 1.0) return {0.0, lo, DimensionMethod::TruncationTail};
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (growth(mid) >= 1.0 ? lo : hi) = mid;
  }
  return {lo, hi, DimensionMethod::TruncationTail};
}

/// Spectral dimension. Closed form for symbolic families, growth bisection for
/// finite truncations with at least two generations, 0 for a finite spectrum.
inline DimensionEstimate spectral_dimension(const LengthSpectrum& s, double tol = 1e-6) {
  if (s.empty()) throw std::invalid_argument("spectral dimension of an empty spectrum");
  if (s.stretched_alpha) {
    const double d = stretched_dimension(*s.stretched_alpha);
    return {d, d, DimensionMethod::ClosedForm};
  }
  if (!s.families.empty()) {
    const double d = s.abscissa();
    return {d, d, DimensionMethod::ClosedForm};
  }
  if (s.max_generation() >= 1) return truncated_dimension(s, tol);
  return {0.0, 0.0, DimensionMethod::ClosedForm};
}

/// 2^{d+1}(2^d - 1)ζ(d)(3 + 3α^d) / (d π^d (2^d log 2 - 3(1-α)^d log(1-α))), d = d_α
inline double dixmier_constant(double alpha) {
  const double d = stretched_dimension(alpha);
  const double num = std::pow(2.0, d + 1.0) * (std::pow(2.0, d) - 1.0) * zeta(d) *
                     (3.0 + 3.0 * std::pow(alpha, d));
  const double den = d * std::pow(std::numbers::pi, d) *
                     (std::pow(2.0, d) * std::log(2.0) - 3.0 * std::pow(1.0 - alpha, d) * std::log(1.0 - alpha));
  return num / den;
}

struct ResidueEstimate {
  double value = 0.0;
  bool converged = false;
  std::vector<double> eps;
  std::vector<double> raw;          // (s-1) tr at s = 1 + eps
  std::vector<double> extrapolated; // second Richardson level
};

inline std::vector<double> default_ladder(int levels = 8, double eps0 = 0.1) {
  std::vector<double> out;
  for (int i = 0; i < levels; ++i) out.push_back(eps0 * std::ldexp(1.0, -i));
  return out;
}

/// Extrapolates raw(ε) -> ε → 0 on a halving ladder; two Richardson levels
/// remove the O(ε) and O(ε²) terms.
inline ResidueEstimate richardson(const std::vector<double>& eps, const std::vector<double>& raw,
                                  double rel_tol = 1e-3) {
  if (eps.size() < 3) throw std::invalid_argument("Richardson needs at least three ladder steps");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (std::abs(eps[i] - eps[i - 1] / 2.0) > 1e-15 * eps[0])
      throw std::invalid_argument("epsilon ladder must halve at each step");
  ResidueEstimate r;
  r.eps = eps;
  r.raw = raw;
  std::vector<double> first;
  for (std::size_t i = 1; i < raw.size(); ++i) first.push_back(2.0 * raw[i] - raw[i - 1]);
  for (std::size_t i = 1; i < first.size(); ++i) r.extrapolated.push_back((4.0 * first[i] - first[i - 1]) / 3.0);
  r.value = r.extrapolated.back();
  if (r.extrapolated.size() >= 2) {
    const double prev = r.extrapolated[r.extrapolated.size() - 2];
    const double scale = std::max(std::abs(r.value), std::abs(prev));
    r.converged = scale == 0.0 || std::abs(r.value - prev) <= rel_tol * scale;
  } else {
    r.converged = true;
  }
  return r;
}

/// lim_{s→1+} (s - 1) tr |D|^{-ds·s}
inline ResidueEstimate residue_estimate(const LengthSpectrum& s, double ds,
                                        const std::vector<double>& ladder = default_ladder()) {
  std::vector<double> raw;
  for (double e : ladder) raw.push_back(e * model_trace(s, ds * (1.0 + e)));
  auto r = richardson(ladder, raw);
  if (std::abs(r.value) < 1e-300) r.value = 0.0;
  return r;
}

/// One row of a series scan at s = 1 + ε.
struct ScanRow {
  double s;
  double trace;
  double tail_bound;
  double residue_running;
};

inline std::vector<ScanRow> scan(const LengthSpectrum& spec, double ds,
                                 const std::vector<double>& ladder = default_ladder()) {
  std::vector<ScanRow> rows;
  for (double e : ladder) {
    const double tr = model_trace(spec, ds * (1.0 + e));
    rows.push_back({1.0 + e, tr, 0.0, e * tr});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// K_H

/// Brackets [length_lo, length_hi] of every triangle curve of K_H, per generation.
struct HarmonicLengthTable {
  int generations = 0;
  int depth = 0;
  std::vector<std::vector<double>> lo;
  std::vector<std::vector<double>> hi;

  static HarmonicLengthTable build(int generations, int depth) {
    if (generations < 0 || depth < 1) throw std::invalid_argument("bad harmonic length table size");
    HarmonicLengthTable t;
    t.generations = generations;
    t.depth = depth;
    const harmonic::HarmonicCoordinates coords(generations + depth);
    for (int m = 0; m <= generations; ++m) {
      const GasketModel skel = build_model(Variant::harmonic(), m);
      std::vector<double> l, h;
      for (const auto& e : skel.edges) {
        const auto est = harmonic::estimate_edge_length(coords, e, depth);
        l.push_back(est.lower);
        h.push_back(est.upper());
      }
      t.lo.push_back(std::move(l));
      t.hi.push_back(std::move(h));
    }
    return t;
  }

  static double power_sum(const std::vector<double>& v, double p) {
    double s = 0.0;
    for (double x : v) s += std::pow(x, p);
    return s;
  }
};

/// Σ_{|w|=G} ‖M_w‖^s
class WordNormSum {
 public:
  explicit WordNormSum(int length) : length_(length) {
    for (const auto& m : harmonic::m_word_products(length)) norms_.push_back(harmonic::spectral_norm(m));
  }
  int length() const { return length_; }
  double operator()(double s) const {
    double sum = 0.0;
    for (double n : norms_) sum += std::pow(n, s);
    return sum;
  }

 private:
  int length_;
  std::vector<double> norms_;
};

struct TraceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Interval for tr |D_H|^{-p}: the finished generations 0..G from the length
/// brackets, plus generations > G bounded by N_G/(1 - N_G) Σ_{k=1..G} S_k^hi,
/// where N_G = Σ_{|w|=G} ‖M_w‖^p. The upper end is infinite when N_G >= 1.
inline TraceInterval harmonic_trace(const HarmonicLengthTable& t, double p) {
  if (!(p > 1.0)) throw DivergenceError("curve traces need p > 1");
  if (t.generations < 1) throw std::invalid_argument("harmonic trace needs generations >= 1");
  const double b = beta(p);
  double lo = 0.0, hi = 0.0, block = 0.0;
  for (int m = 0; m <= t.generations; ++m) {
    lo += HarmonicLengthTable::power_sum(t.lo[static_cast<std::size_t>(m)], p);
    const double h = HarmonicLengthTable::power_sum(t.hi[static_cast<std::size_t>(m)], p);
    hi += h;
    if (m >= 1) block += h;
  }
  const double n = WordNormSum(t.generations)(p);
  const double tail = n < 1.0 ? n / (1.0 - n) * block : std::numeric_limits<double>::infinity();
  return {b * lo, b * (hi + tail)};
}

/// log 3 / (log 5 - log 3)
inline double harmonic_dimension_upper_bound() { return std::log(3.0) / (std::log(5.0) - std::log(3.0)); }

namespace detail {

/// Works with the Gram matrices of all M_w, |w| = G, on a grid of directions
/// over one 60° period of θ -> Σ_w |M_w x(θ)|^s.
class DirectionalSums {
 public:
  DirectionalSums(int length, int grid) : grid_(grid), norms_(length) {
    for (const auto& m : harmonic::m_word_products(length)) {
      const Mat2 g = m.transpose() * m;
      gram_.push_back({g(0, 0), g(0, 1), g(1, 1)});
    }
    step_ = std::numbers::pi / 3.0 / grid;
  }

  /// Certified lower bound on min_θ Σ_w |M_w x(θ)|^s for s >= 1: the grid
  /// minimum less Lipschitz constant times half the spacing. The derivative
  /// in θ is at most s Σ |M_w x|^{s-1} ‖M_w‖ <= s N_G(s).
  double min_lower(double s) const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid_; ++i) {
      const double th = i * step_;
      const double c = std::cos(th), sn = std::sin(th);
      double sum = 0.0;
      for (const auto& [a, b, d] : gram_) sum += std::pow(a * c * c + 2.0 * b * c * sn + d * sn * sn, s / 2.0);
      best = std::min(best, sum);
    }
    return best - s * norms_(s) * step_ / 2.0;
  }

  double norm_sum(double s) const { return norms_(s); }

 private:
  int grid_;
  double step_;
  WordNormSum norms_;
  std::vector<std::array<double, 3>> gram_;
};

}  // namespace detail

/// Interval for ds_H from word length G = depth: the root of Σ‖M_w‖^s = 1 is
/// an upper bound (submultiplicativity), the root of min_x Σ|M_w x|^s = 1 a
/// lower bound (supermultiplicativity along the orbit of x). Running
/// intersection over word lengths 1..depth, clipped to [1, log3/(log5-log3)].
inline std::vector<DimensionEstimate> harmonic_dimension_ladder(int depth, double tol = 1e-6, int grid = 360) {
  if (depth < 1 || depth > 9) throw std::invalid_argument("harmonic dimension depth must be 1..9");
  std::vector<DimensionEstimate> out;
  double lower = 1.0;
  double upper = harmonic_dimension_upper_bound();
  for (int g = 1; g <= depth; ++g) {
    const detail::DirectionalSums sums(g, grid);
    // upper: N_G decreasing in s
    double a = 1.0, b = 3.0;
    if (sums.norm_sum(a) > 1.0) {
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        (sums.norm_sum(mid) > 1.0 ? a : b) = mid;
      }
      upper = std::min(upper, b);
    } else {
      upper = std::min(upper, 1.0);
    }
    // lower: keep the end where the certified minimum is still >= 1
    a = 1.0;
    b = upper;
    if (sums.min_lower(a) >= 1.0) {
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        (sums.min_lower(mid) >= 1.0 ? a : b) = mid;
      }
      lower = std::max(lower, a);
    }
    out.push_back({lower, upper, DimensionMethod::TruncationTail});
  }
  return out;
}

inline DimensionEstimate harmonic_dimension(int depth, double tol = 1e-6) {
  return harmonic_dimension_ladder(depth, tol).back();
}

}  // namespace gasket::spectrum
