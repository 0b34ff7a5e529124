#pragma once

#include "gasket/expr.hpp"
#include "gasket/gasket_core.hpp"
#include "gasket/harmonic.hpp"
#include "gasket/measure.hpp"
#include "gasket/metric.hpp"
#include "gasket/model_io.hpp"
#include "gasket/spectrum.hpp"
#include "gasket/svg.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace gasket::cli {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct Common {
  std::string variant = "sg";
  std::optional<double> alpha;
  int level = 3;
};

inline void add_common(CLI::App* app, Common& c) {
  app->add_option("--variant", c.variant, "sg, stretched or harmonic")
      ->check(CLI::IsMember({"sg", "stretched", "harmonic"}));
  app->add_option("--alpha", c.alpha, "stretch parameter in (0, 1/3)");
  app->add_option("--level", c.level, "approximation level")->check(CLI::NonNegativeNumber);
}

inline Variant variant_of(const Common& c) {
  try {
    if (c.variant != "stretched" && c.alpha) throw UsageError("--alpha only applies to --variant stretched");
    return Variant::from_name(c.variant, c.alpha);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

inline Vec2 parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("point '" + s + "' must be x,y");
  try {
    std::size_t a = 0, b = 0;
    const double x = std::stod(s.substr(0, comma), &a);
    const double y = std::stod(s.substr(comma + 1), &b);
    if (a != comma || b != s.size() - comma - 1) throw std::invalid_argument("trailing characters");
    return {x, y};
  } catch (const std::exception&) {
    throw UsageError("point '" + s + "' must be x,y");
  }
}

inline expr::Expr parse_function(const std::string& s) {
  try {
    return expr::parse(s);
  } catch (const expr::ParseError& e) {
    throw UsageError(std::string("bad test function: ") + e.what());
  }
}

inline GasketModel build(const Variant& v, int level, int depth) {
  GasketModel m = build_model(v, level);
  if (v.kind == VariantKind::Harmonic) m = harmonic::realize_model(m, depth);
  return m;
}

inline void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") out << content;
  else io::write_file(path, content);
}

inline std::string scan_csv(const std::vector<spectrum::ScanRow>& rows) {
  std::string s = "s,trace,tail_bound,residue_running\n";
  for (const auto& r : rows)
    s += io::real(r.s) + "," + io::real(r.trace) + "," + io::real(r.tail_bound) + "," + io::real(r.residue_running) + "\n";
  return s;
}

inline std::string spread_json(const measure::SpreadReport& r) {
  return "{\"L\": " + std::to_string(r.length) + ", \"d\": " + io::real(r.d) + ", \"min\": " + io::real(r.min) +
         ", \"max\": " + io::real(r.max) + ", \"ratio\": " + io::real(r.ratio) + "}";
}

inline std::string dimension_line(const spectrum::DimensionEstimate& d) {
  if (d.method == spectrum::DimensionMethod::ClosedForm) return io::real(d.lower);
  return io::real(d.lower) + "," + io::real(d.upper) + "," + io::real(d.width());
}

inline std::vector<spectrum::ScanRow> harmonic_scan(int generations, int depth, double ds,
                                                    const std::vector<double>& ladder) {
  const auto table = spectrum::HarmonicLengthTable::build(generations, depth);
  std::vector<spectrum::ScanRow> rows;
  for (double e : ladder) {
    const auto iv = spectrum::harmonic_trace(table, ds * (1.0 + e));
    rows.push_back({1.0 + e, iv.lower, iv.upper - iv.lower, e * iv.lower});
  }
  return rows;
}

inline spectrum::LengthSpectrum symbolic_spectrum(const Variant& v) {
  return v.kind == VariantKind::Stretched ? spectrum::LengthSpectrum::stretched(v.alpha)
                                          : spectrum::LengthSpectrum::sg();
}

}  // namespace detail

/// Runs one command. Exit codes: 0 success, 1 computation error, 2 usage.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sierpinski gasket variants: models, spectra, geodesics and measures", "gasket"};
  app.require_subcommand(1);

  detail::Common common;

  // build
  auto* build = app.add_subcommand("build", "write the edge model as JSON");
  std::string build_out, build_svg;
  int depth = 4;
  detail::add_common(build, common);
  build->add_option("--out", build_out, "output JSON path (default stdout)");
  build->add_option("--svg", build_svg, "also write an SVG plot");
  build->add_option("--depth", depth, "harmonic subdivision depth")->check(CLI::Range(1, 16));

  // dimension
  auto* dimension = app.add_subcommand("dimension", "spectral dimension");
  double tol = 1e-6;
  int bracket = 0;
  int word_length = 5;
  detail::add_common(dimension, common);
  dimension->add_option("--tol", tol, "bisection tolerance")->check(CLI::PositiveNumber);
  dimension->add_option("--bracket", bracket, "also bracket from a truncation with this many generations")
      ->check(CLI::Range(1, 11));
  dimension->add_option("--depth", word_length, "harmonic word length")->check(CLI::Range(1, 9));

  // spectrum
  auto* spec_cmd = app.add_subcommand("spectrum", "trace scan near the abscissa as CSV");
  std::optional<double> ds_opt;
  std::vector<double> p_values;
  int steps = 8;
  double eps0 = 0.1;
  int generations = 4;
  std::string spec_out;
  detail::add_common(spec_cmd, common);
  spec_cmd->add_option("--ds", ds_opt, "abscissa to scan at (default: computed)");
  spec_cmd->add_option("--p", p_values, "print tr|D|^-p for these exponents instead of a scan");
  spec_cmd->add_option("--steps", steps, "epsilon ladder length")->check(CLI::Range(3, 30));
  spec_cmd->add_option("--eps0", eps0, "first epsilon")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--generations", generations, "harmonic generations")->check(CLI::Range(1, 8));
  spec_cmd->add_option("--depth", depth, "harmonic subdivision depth")->check(CLI::Range(1, 10));
  spec_cmd->add_option("--out", spec_out, "output CSV path (default stdout)");

  // distance
  auto* distance = app.add_subcommand("distance", "geodesic distance");
  std::string from, to;
  bool show_path = false;
  detail::add_common(distance, common);
  distance->add_option("--from", from, "x,y")->required();
  distance->add_option("--to", to, "x,y")->required();
  distance->add_flag("--path", show_path, "also print the node path as JSON");

  // measure
  auto* meas = app.add_subcommand("measure", "discrete functionals as CSV");
  std::string functional = "psi_alpha", fexpr = "1";
  int n_level = 3;
  bool upto = false;
  detail::add_common(meas, common);
  meas->add_option("--functional", functional, "psi_sg, psi_harmonic, psi_alpha, dixmier, residual")
      ->check(CLI::IsMember({"psi_sg", "psi_harmonic", "psi_alpha", "dixmier", "residual"}));
  meas->add_option("--f", fexpr, "test function in x, y (and z for K_H)");
  meas->add_option("--n", n_level, "functional level")->check(CLI::NonNegativeNumber);
  meas->add_flag("--upto", upto, "print every level from the smallest valid one up to --n");

  // compare
  auto* compare = app.add_subcommand("compare", "self-affine mass vs ||M_w||^d spread on K_H");
  double d_param = 1.5;
  int length = 6;
  compare->add_option("--d", d_param, "dimension exponent")->check(CLI::PositiveNumber);
  compare->add_option("--L", length, "word length")->check(CLI::Range(0, 8));
  compare->add_flag("--upto", upto, "one report per word length 1..L");

  // report
  auto* report = app.add_subcommand("report", "write model, plot, scan and measures into a directory");
  std::string out_dir = "report";
  detail::add_common(report, common);
  report->add_option("--out-dir", out_dir, "output directory");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  // validate flags before any computation
  Variant variant;
  std::optional<expr::Expr> fn;
  Vec2 pa, pb;
  try {
    auto* sub = app.get_subcommands().front();
    if (sub != compare) variant = detail::variant_of(common);
    if (sub == distance) {
      if (variant.kind == VariantKind::Harmonic)
        throw UsageError("distance supports --variant sg or stretched");
      pa = detail::parse_point(from);
      pb = detail::parse_point(to);
    }
    if (sub == meas) {
      fn = detail::parse_function(fexpr);
      const bool need_stretched = functional == "psi_alpha" || functional == "dixmier";
      if (need_stretched && variant.kind != VariantKind::Stretched)
        throw UsageError(functional + " needs --variant stretched");
      if (functional == "psi_sg" && variant.kind != VariantKind::SG) throw UsageError("psi_sg needs --variant sg");
      if (functional == "psi_harmonic" && variant.kind != VariantKind::Harmonic)
        throw UsageError("psi_harmonic needs --variant harmonic");
      if (functional == "psi_alpha" && n_level < 1) throw UsageError("psi_alpha needs --n >= 1");
      if (functional == "residual" && variant.kind == VariantKind::Stretched && n_level < 1)
        throw UsageError("stretched residual needs --n >= 1");
    }
    if (sub == spec_cmd && variant.kind == VariantKind::Harmonic && !p_values.empty())
      throw UsageError("--p is not available for the harmonic variant; use the scan");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    if (sub == build) {
      const GasketModel m = detail::build(variant, common.level, depth);
      detail::write_or_print(build_out, io::to_json(m), out);
      if (!build_svg.empty()) svg::emit_svg(m, build_svg);
    } else if (sub == dimension) {
      if (variant.kind == VariantKind::Harmonic) {
        out << detail::dimension_line(spectrum::harmonic_dimension(word_length, tol)) << "\n";
      } else {
        out << detail::dimension_line(spectrum::spectral_dimension(detail::symbolic_spectrum(variant), tol)) << "\n";
        if (bracket > 0)
          out << detail::dimension_line(
                     spectrum::truncated_dimension(spectrum::spectrum_from_models(variant, bracket), tol))
              << "\n";
      }
    } else if (sub == spec_cmd) {
      const auto ladder = spectrum::default_ladder(steps, eps0);
      std::string csv;
      if (variant.kind == VariantKind::Harmonic) {
        const double ds = ds_opt ? *ds_opt : spectrum::harmonic_dimension(generations, 1e-6).upper;
        csv = detail::scan_csv(detail::harmonic_scan(generations, depth, ds, ladder));
      } else {
        const auto s = detail::symbolic_spectrum(variant);
        if (!p_values.empty()) {
          csv = "p,trace\n";
          for (double p : p_values) csv += io::real(p) + "," + io::real(spectrum::model_trace(s, p)) + "\n";
        } else {
          const double ds = ds_opt ? *ds_opt : spectrum::spectral_dimension(s).lower;
          csv = detail::scan_csv(spectrum::scan(s, ds, ladder));
        }
      }
      detail::write_or_print(spec_out, csv, out);
    } else if (sub == distance) {
      const GasketModel m = build_model(variant, common.level);
      const auto g = metric::to_metric_graph(m, common.level);
      const auto r = metric::geodesic(g, pa, pb);
      out << "distance,level,error_bar\n" << io::real(r.distance) << "," << r.level << "," << io::real(r.error_bar) << "\n";
      if (show_path) {
        out << "[";
        for (std::size_t i = 0; i < r.path.size(); ++i) out << (i ? ", " : "") << r.path[i];
        out << "]\n";
      }
    } else if (sub == meas) {
      const auto f = measure::from_expr(*fn);
      const std::string text = expr::print(*fn);
      out << "n,functional,f_expr,value\n";
      if (functional == "dixmier") {
        const auto r = measure::dixmier_functional(variant.alpha, *fn, spectrum::default_ladder(steps, eps0));
        if (!r.converged) throw ConvergenceError("dixmier residue did not converge");
        out << steps << ",dixmier," << text << "," << io::real(r.value) << "\n";
      } else {
        const int first = upto ? (functional == "psi_alpha" || variant.kind == VariantKind::Stretched ? 1 : 0) : n_level;
        for (int n = first; n <= n_level; ++n) {
          double v = 0.0;
          if (functional == "psi_sg") v = measure::psi_sg(n, f);
          else if (functional == "psi_harmonic") v = measure::psi_harmonic(n, f);
          else if (functional == "psi_alpha") v = measure::psi_alpha(variant.alpha, n, f);
          else {
            const measure::Family fam = variant.kind == VariantKind::SG         ? measure::Family::Sg
                                        : variant.kind == VariantKind::Harmonic ? measure::Family::Harmonic
                                                                                : measure::Family::Stretched;
            v = measure::self_affinity_residual(fam, n, f, variant.alpha);
          }
          out << n << "," << functional << "," << text << "," << io::real(v) << "\n";
        }
      }
    } else if (sub == compare) {
      for (int l = upto ? 1 : length; l <= length; ++l)
        out << detail::spread_json(measure::hausdorff_vs_selfaffine(d_param, l)) << "\n";
    } else if (sub == report) {
      namespace fs = std::filesystem;
      fs::create_directories(out_dir);
      const GasketModel m = detail::build(variant, common.level, 4);
      const std::string base = (fs::path(out_dir) / variant.name()).string();
      io::write_file(base + ".json", io::to_json(m));
      svg::emit_svg(m, base + ".svg");
      out << base << ".json\n" << base << ".svg\n";
      std::string dim;
      if (variant.kind == VariantKind::Harmonic) {
        const auto ladder = spectrum::harmonic_dimension_ladder(5);
        dim = "word_length,lower,upper,width\n";
        for (std::size_t i = 0; i < ladder.size(); ++i)
          dim += std::to_string(i + 1) + "," + io::real(ladder[i].lower) + "," + io::real(ladder[i].upper) + "," +
                 io::real(ladder[i].width()) + "\n";
        io::write_file(base + "_scan.csv",
                       detail::scan_csv(detail::harmonic_scan(4, 4, ladder.back().upper, spectrum::default_ladder())));
        std::string cmp;
        for (int l = 1; l <= 6; ++l) cmp += detail::spread_json(measure::hausdorff_vs_selfaffine(1.5, l)) + "\n";
        io::write_file(base + "_compare.json", cmp);
        out << base << "_compare.json\n";
      } else {
        const auto s = detail::symbolic_spectrum(variant);
        const double ds = spectrum::spectral_dimension(s).lower;
        dim = "dimension\n" + io::real(ds) + "\n";
        io::write_file(base + "_scan.csv", detail::scan_csv(spectrum::scan(s, ds)));
      }
      io::write_file(base + "_dimension.csv", dim);
      out << base << "_scan.csv\n" << base << "_dimension.csv\n";
      std::string mcsv = "n,functional,f_expr,value\n";
      for (const char* text : {"1", "x", "y", "x^2", "x*y"}) {
        const auto e = expr::parse(text);
        const auto f = measure::from_expr(e);
        for (int n = 1; n <= 5; ++n) {
          double v = 0.0;
          std::string name;
          if (variant.kind == VariantKind::SG) v = measure::psi_sg(n, f), name = "psi_sg";
          else if (variant.kind == VariantKind::Harmonic) v = measure::psi_harmonic(n, f), name = "psi_harmonic";
          else v = measure::psi_alpha(variant.alpha, n, f), name = "psi_alpha";
          mcsv += std::to_string(n) + "," + name + "," + expr::print(e) + "," + io::real(v) + "\n";
        }
        if (variant.kind == VariantKind::Stretched)
          mcsv += "8,dixmier," + expr::print(e) + "," + io::real(measure::dixmier_functional(variant.alpha, e).value) + "\n";
      }
      io::write_file(base + "_measure.csv", mcsv);
      out << base << "_measure.csv\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gasket::cli
