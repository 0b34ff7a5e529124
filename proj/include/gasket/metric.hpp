#pragma once

#include "gasket/errors.hpp"
#include "gasket/gasket_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gasket::metric {

struct Arc {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
  bool joining = false;
  int generation = 0;
};

/// Weighted graph on the vertices of a K_alpha or SG approximation.
class MetricGraph {
 public:
  int level = 0;
  Variant variant;

  std::size_t add_node(const Vec2& x) { return index_.insert(x); }

  void add_arc(std::size_t u, std::size_t v, double w, bool joining, int generation) {
    if (!(w > 0.0)) throw std::invalid_argument("arc weight must be positive");
    arcs_.push_back({u, v, w, joining, generation});
    if (adj_.size() < index_.size()) adj_.resize(index_.size());
    adj_[u].push_back(arcs_.size() - 1);
    adj_[v].push_back(arcs_.size() - 1);
  }

  std::size_t node_count() const { return index_.size(); }
  const Vec2& node(std::size_t i) const { return index_.points()[i]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::size_t>& incident(std::size_t i) const {
    static const std::vector<std::size_t> none;
    return i < adj_.size() ? adj_[i] : none;
  }
  std::optional<std::size_t> find(const Vec2& x, double tol) const {
    auto hit = index_.find(x);
    if (hit) return hit;
    // fall back to a scan when tol exceeds the index tolerance
    std::optional<std::size_t> best;
    double bd = tol;
    for (std::size_t i = 0; i < node_count(); ++i) {
      const double d = (node(i) - x).norm();
      if (d <= bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  }

  std::size_t degree(std::size_t i) const { return incident(i).size(); }

  bool connected() const {
    if (node_count() == 0) return true;
    std::vector<char> seen(node_count(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t a : incident(u)) {
        const std::size_t w = arcs_[a].u == u ? arcs_[a].v : arcs_[a].u;
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == node_count();
  }

  void finish() { adj_.resize(index_.size()); }

 private:
  PointIndex<2> index_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adj_;
};

/// Finest-level triangle edges plus every joining edge up to `level`.
inline MetricGraph to_metric_graph(const GasketModel& model, int level) {
  if (model.variant.kind == VariantKind::Harmonic)
    throw std::invalid_argument("geodesics on the harmonic gasket are not supported");
  if (level < 0 || level > model.level)
    throw std::invalid_argument("graph level " + std::to_string(level) + " outside 0.." + std::to_string(model.level));
  const GasketModel m = level == model.level ? model : build_model(model.variant, level);
  MetricGraph g;
  g.level = level;
  g.variant = m.variant;
  for (const auto& e : m.edges) {
    const std::size_t u = g.add_node(e.p.head<2>());
    const std::size_t v = g.add_node(e.q.head<2>());
    g.add_arc(u, v, e.length, e.kind == EdgeKind::StretchedJoining, e.generation);
  }
  g.finish();
  if (!g.connected()) throw std::logic_error("metric graph is disconnected");
  return g;
}

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<std::size_t> pred;
};

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Dijkstra with a binary heap; equal distances resolve to the smaller node id.
inline ShortestPaths dijkstra(const MetricGraph& g, std::size_t source) {
  ShortestPaths sp;
  sp.dist.assign(g.node_count(), std::numeric_limits<double>::infinity());
  sp.pred.assign(g.node_count(), kNone);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  sp.dist[source] = 0.0;
  heap.push({0.0, source});
  std::vector<char> done(g.node_count(), 0);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (std::size_t a : g.incident(u)) {
      const Arc& arc = g.arcs()[a];
      const std::size_t v = arc.u == u ? arc.v : arc.u;
      if (done[v]) continue;
      const double nd = d + arc.weight;
      if (nd < sp.dist[v] || (nd == sp.dist[v] && u < sp.pred[v])) {
        sp.dist[v] = nd;
        sp.pred[v] = u;
        heap.push({nd, v});
      }
    }
  }
  return sp;
}

struct GeodesicResult {
  double distance = 0.0;
  std::vector<std::size_t> path;  // node ids of the (possibly split) graph
  int level = 0;
  double error_bar = 0.0;
};

namespace detail {

struct Located {
  std::optional<std::size_t> node;
  std::size_t arc = 0;
  double t = 0.0;  // parameter along the arc from u
  double error_bar = 0.0;
};

inline Located locate(const MetricGraph& g, const Vec2& x, double tol) {
  if (auto n = g.find(x, tol)) return {n, 0, 0.0, 0.0};
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_arc = 0;
  double best_t = 0.0;
  for (std::size_t i = 0; i < g.arcs().size(); ++i) {
    const Arc& a = g.arcs()[i];
    const Vec2 p = g.node(a.u), d = g.node(a.v) - p;
    const double t = std::clamp((x - p).dot(d) / d.squaredNorm(), 0.0, 1.0);
    const double dist = (p + t * d - x).norm();
    if (dist < best) {
      best = dist;
      best_arc = i;
      best_t = t;
    }
  }
  if (best > tol)
    throw std::invalid_argument("point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                                ") is not on the structure");
  const Arc& a = g.arcs()[best_arc];
  if (a.joining) return {std::nullopt, best_arc, best_t, 0.0};
  // triangle-edge interior: snap to the closer endpoint
  return {best_t <= 0.5 ? a.u : a.v, best_arc, best_t, a.weight};
}

}  // namespace detail

/// Geodesic distance between two points of the level-`level` structure.
/// Points within 1e-9 of a node use the node; points inside a joining edge
/// split it; points inside a finest triangle edge snap to its nearer end and
/// the edge length is reported as the error bar.
inline GeodesicResult geodesic(const MetricGraph& base, const Vec2& p, const Vec2& q, double tol = 1e-9) {
  MetricGraph g = base;
  const auto lp = detail::locate(base, p, tol);
  const auto lq = detail::locate(base, q, tol);

  // split joining arcs at interior points, both on one arc if needed
  auto split_node = [&](const detail::Located& l, const Vec2& x) -> std::size_t {
    const Arc& a = base.arcs()[l.arc];
    const std::size_t id = g.add_node(x);
    g.finish();
    g.add_arc(a.u, id, std::max(l.t * a.weight, 1e-300), true, a.generation);
    g.add_arc(id, a.v, std::max((1.0 - l.t) * a.weight, 1e-300), true, a.generation);
    return id;
  };
  std::size_t s, t;
  double direct = std::numeric_limits<double>::infinity();
  if (!lp.node && !lq.node && lp.arc == lq.arc)
    direct = std::abs(lp.t - lq.t) * base.arcs()[lp.arc].weight;
  s = lp.node ? *lp.node : split_node(lp, p);
  t = lq.node ? *lq.node : split_node(lq, q);

  GeodesicResult r;
  r.level = base.level;
  r.error_bar = lp.error_bar + lq.error_bar;
  if (s == t) {
    r.distance = 0.0;
    r.path = {s};
    return r;
  }
  const auto sp = dijkstra(g, s);
  r.distance = std::min(sp.dist[t], direct);
  if (direct < sp.dist[t]) {
    r.path = {s, t};
  } else {
    for (std::size_t v = t; v != kNone; v = sp.pred[v]) r.path.push_back(v);
    std::reverse(r.path.begin(), r.path.end());
  }
  return r;
}

inline GeodesicResult geodesic(const GasketModel& model, const Vec2& p, const Vec2& q, int level) {
  return geodesic(to_metric_graph(model, level), p, q);
}

struct LipschitzReport {
  std::size_t arcs_checked = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;  // max over arcs of |f(u) - f(v)| - ℓ_uv
  std::size_t witnesses = 0;
  std::size_t attained = 0;
  bool passed() const { return violations == 0 && attained == witnesses; }
};

/// Edgewise Lipschitz-1 test of node values f.
inline LipschitzReport check_lipschitz(const MetricGraph& g, const std::vector<double>& f, double tol = 1e-12) {
  if (f.size() != g.node_count()) throw std::invalid_argument("function size does not match the graph");
  LipschitzReport rep;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& a : g.arcs()) {
    const double excess = std::abs(f[a.u] - f[a.v]) - a.weight;
    rep.max_excess = std::max(rep.max_excess, excess);
    if (excess > tol) ++rep.violations;
    ++rep.arcs_checked;
  }
  return rep;
}

/// Checks f = d(·, q) is Lipschitz-1 on every arc and that |f(p) - f(q)|
/// equals an independently computed d(p, q) for `samples` random nodes p.
inline LipschitzReport lipschitz_witness_check(const MetricGraph& g, std::size_t q, int samples = 20,
                                               std::uint64_t seed = 1, double tol = 1e-12) {
  if (q >= g.node_count()) throw std::out_of_range("witness target is not a node");
  const auto f = dijkstra(g, q).dist;
  LipschitzReport rep = check_lipschitz(g, f, tol);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
  for (int i = 0; i < samples; ++i) {
    const std::size_t p = pick(rng);
    const double d = dijkstra(g, p).dist[q];
    ++rep.witnesses;
    if (std::abs(std::abs(f[p] - f[q]) - d) <= tol * std::max(1.0, d)) ++rep.attained;
  }
  return rep;
}

inline LipschitzReport lipschitz_witness_check(const GasketModel& model, const Vec2& q, int level,
                                               int samples = 20, std::uint64_t seed = 1) {
  const MetricGraph g = to_metric_graph(model, level);
  auto node = g.find(q, 1e-9);
  if (!node) throw std::invalid_argument("witness target is not a node");
  return lipschitz_witness_check(g, *node, samples, seed);
}

}  // namespace gasket::metric
