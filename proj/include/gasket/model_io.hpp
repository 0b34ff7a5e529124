#pragma once

#include "gasket/gasket_core.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gasket::io {

/// %.17g, with ".0" appended to integral values.
inline std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (std::isfinite(v) && s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

/// Fixed field order: variant, alpha, level, edges; per edge id, kind, gen,
/// p, q, length, word, then length_lo/length_hi for harmonic images.
inline std::string to_json(const GasketModel& m) {
  std::ostringstream os;
  os << "{\"variant\": " << json_string(m.variant.name());
  if (m.variant.kind == VariantKind::Stretched) os << ", \"alpha\": " << real(m.variant.alpha);
  os << ", \"level\": " << m.level << ", \"edges\": [";
  const int dim = m.dim();
  auto point = [&](const Vec3& x) {
    std::string s = "[" + real(x[0]) + ", " + real(x[1]);
    if (dim == 3) s += ", " + real(x[2]);
    return s + "]";
  };
  for (std::size_t i = 0; i < m.edges.size(); ++i) {
    const auto& e = m.edges[i];
    os << (i ? ",\n  " : "\n  ");
    os << "{\"id\": " << e.id << ", \"kind\": " << json_string(edge_kind_name(e.kind)) << ", \"gen\": " << e.generation
       << ", \"p\": " << point(e.p) << ", \"q\": " << point(e.q) << ", \"length\": " << real(e.length)
       << ", \"word\": " << json_string(e.word.str());
    if (e.length_lo) os << ", \"length_lo\": " << real(*e.length_lo);
    if (e.length_hi) os << ", \"length_hi\": " << real(*e.length_hi);
    os << "}";
  }
  os << (m.edges.empty() ? "]}\n" : "\n]}\n");
  return os.str();
}

inline GasketModel from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GasketModel m;
  std::optional<double> alpha;
  if (j.contains("alpha")) alpha = j.at("alpha").get<double>();
  m.variant = Variant::from_name(j.at("variant").get<std::string>(), alpha);
  m.level = j.at("level").get<int>();
  bool three_d = false;
  for (const auto& je : j.at("edges")) {
    EdgeCurve e;
    e.id = je.at("id").get<std::size_t>();
    e.kind = edge_kind_from_name(je.at("kind").get<std::string>());
    e.generation = je.at("gen").get<int>();
    auto point = [&](const nlohmann::json& a) {
      if (a.size() != 2 && a.size() != 3) throw std::invalid_argument("edge endpoint must have 2 or 3 coordinates");
      if (a.size() == 3) three_d = true;
      return Vec3{a[0].get<double>(), a[1].get<double>(), a.size() == 3 ? a[2].get<double>() : 0.0};
    };
    e.p = point(je.at("p"));
    e.q = point(je.at("q"));
    e.length = je.at("length").get<double>();
    e.word = Word::parse(je.at("word").get<std::string>());
    if (je.contains("length_lo")) e.length_lo = je.at("length_lo").get<double>();
    if (je.contains("length_hi")) e.length_hi = je.at("length_hi").get<double>();
    m.edges.push_back(std::move(e));
  }
  m.realized = m.variant.kind == VariantKind::Harmonic && three_d;
  m.vertices = vertices(m);
  return m;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace gasket::io
