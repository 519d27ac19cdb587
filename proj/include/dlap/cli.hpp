#ifndef DLAP_CLI_HPP
#define DLAP_CLI_HPP

// Command-line front end. `run` takes argv without the program name and
// writes to the given streams, so tests can drive it in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dlap/diagonalize.hpp"
#include "dlap/error.hpp"
#include "dlap/limits.hpp"
#include "dlap/properties.hpp"
#include "dlap/recurrence.hpp"
#include "dlap/reproduce.hpp"
#include "dlap/scalar.hpp"
#include "dlap/shearer.hpp"
#include "dlap/tree.hpp"

namespace dlap::cli {

enum ExitCode : int { kOk = 0, kToleranceFailure = 1, kUsage = 2, kPrecision = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precision: return kPrecision;
    case ErrorKind::consistency: return kToleranceFailure;
    default: return kUsage;
  }
}

namespace detail {

using nlohmann::ordered_json;

struct Output {
  std::ostream& out;
  bool json = false;
  int print_digits = 15;
};

/// "a,b c" -> {"a", "b", "c"}; empty pieces are dropped.
inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string piece;
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!piece.empty()) out.push_back(std::move(piece));
      piece.clear();
    } else {
      piece += ch;
    }
  }
  if (!piece.empty()) out.push_back(std::move(piece));
  return out;
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& piece : split_list(text)) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || ptr != piece.data() + piece.size()) {
      throw Error(ErrorKind::parse, "not an integer: '" + piece + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::parse, "empty integer list");
  return out;
}

inline Tree read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open tree file '" + path + "'");
  return parse_tree(in);
}

/// Target for --csv: "-" is stdout, anything else a file.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::parse, "cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline void emit(Output& o, const ordered_json& doc) {
  if (o.json) {
    o.out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : doc.items()) {
    o.out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

template <class Shape>
ordered_json radius_json(const Shape& shape, const Scalar& s, std::optional<std::string> lo, std::optional<std::string> hi,
                         int target, int print_digits) {
  auto [a, b] = default_bracket(shape, s);
  if (lo) a = parse_real<Scalar>(*lo);
  if (hi) b = parse_real<Scalar>(*hi);
  if (!(a < b)) throw Error(ErrorKind::domain, "--lo must be below --hi");
  const auto est = approximate_radius(shape, s, a, b, iterations_for_digits(Scalar(b - a), target));
  ordered_json doc;
  doc["rho"] = format_real(est.midpoint(), print_digits);
  doc["low"] = format_real(est.low, print_digits);
  doc["high"] = format_real(est.high, print_digits);
  doc["iterations"] = est.iterations;
  doc["early_breaks"] = est.early_breaks;
  doc["exact_hit"] = est.exact_hit;
  return doc;
}

}  // namespace detail

/// Parses and dispatches one invocation. Returns the process exit status.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using detail::ordered_json;
  CLI::App app{"Spectral radii and limit points of deformed Laplacians on trees", "dlap"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.fallthrough();  // global flags may follow the subcommand

  PrecisionContext ctx;
  std::optional<unsigned> digits_flag;
  int print_digits = 15;
  bool json = false;
  app.add_option("--digits", digits_flag, "Working precision in decimal digits (default $" + std::string(kDigitsEnvVar) + " or 50)");
  app.add_option("--print-digits", print_digits, "Significant digits printed per value")->check(CLI::Range(1, 100000));
  app.add_flag("--json", json, "Emit JSON instead of key: value lines");

  // rho
  auto* rho = app.add_subcommand("rho", "Bracket the spectral radius of a caterpillar or tree");
  std::string cat_text, tree_path, s_text;
  std::optional<std::string> lo, hi;
  int target_digits = 0;
  auto* rho_cat = rho->add_option("--caterpillar", cat_text, "Counts [r1,...,rk]");
  auto* rho_tree = rho->add_option("--tree", tree_path, "Tree file");
  rho_cat->excludes(rho_tree);
  rho->add_option("--s", s_text, "Deformation parameter")->required();
  rho->add_option("--lo", lo, "Lower bracket end A (default from Gershgorin)");
  rho->add_option("--hi", hi, "Upper bracket end B (default from Gershgorin)");
  rho->add_option("--target-digits", target_digits, "Bracket width 10^-D (default digits - 10)");

  // locate
  auto* locate = app.add_subcommand("locate", "Count eigenvalues above, below and at a point");
  std::string point_text;
  auto* loc_tree = locate->add_option("--tree", tree_path, "Tree file");
  auto* loc_cat = locate->add_option("--caterpillar", cat_text, "Counts [r1,...,rk]");
  loc_cat->excludes(loc_tree);
  locate->add_option("--s", s_text, "Deformation parameter")->required();
  locate->add_option("--point", point_text, "Probe value c")->required();

  // recurrence
  auto* recurrence = app.add_subcommand("recurrence", "Parameters and orbits of phi(t) = alpha - s^2/t");
  std::string lambda_text;
  std::optional<std::string> orbit_start;
  int steps = 50;
  recurrence->add_option("--s", s_text)->required();
  recurrence->add_option("--lambda", lambda_text)->required();
  recurrence->add_option("--orbit", orbit_start, "Starting value x1");
  recurrence->add_option("--steps", steps, "Maximum orbit length")->check(CLI::PositiveNumber);

  // shearer
  auto* shearer = app.add_subcommand("shearer", "Greedy caterpillar sequence converging to lambda");
  int k = 0;
  std::string report_text, counts_path, csv_path;
  bool diagnostics = false;
  shearer->add_option("--lambda", lambda_text)->required();
  shearer->add_option("--s", s_text, "Value, 'auto' (s*/2) or 'star'")->default_val("auto");
  auto* k_opt = shearer->add_option("--k", k, "Backbone length")->check(CLI::Range(2, 1000000));
  auto* report_opt = shearer->add_option("--report", report_text, "Comma-separated k values, one row each");
  k_opt->excludes(report_opt);
  shearer->add_option("--csv", csv_path, "Write k,counts,rho,error to FILE ('-' for stdout)")->expected(0, 1)->default_str("-");
  shearer->add_option("--counts-file", counts_path, "Write complete count lists to FILE");
  shearer->add_flag("--diagnostics", diagnostics, "Also print eps_k, 1/beta_k and the beta lower bound");

  // tau0, sstar, limits-table
  auto* tau0_cmd = app.add_subcommand("tau0", "Limit of rho(T(1,n,n)) as n grows");
  tau0_cmd->add_option("--s", s_text)->required();
  auto* sstar_cmd = app.add_subcommand("sstar", "Positive root of theta' - delta + s");
  sstar_cmd->add_option("--lambda", lambda_text)->required();
  auto* table_cmd = app.add_subcommand("limits-table", "tau0 over a list of s as CSV");
  std::string s_list;
  table_cmd->add_option("--s-list", s_list, "Comma-separated s values")->required();
  table_cmd->add_option("--csv", csv_path, "Output file ('-' for stdout)")->expected(0, 1)->default_str("-")->default_val("-");

  // verify
  auto* verify = app.add_subcommand("verify", "Sweep spectral properties over small trees");
  std::string props_text = "all", s_grid_text = "-1.5,-1,-0.9,-0.3,0.3,0.9,1,1.5", tol_text;
  int max_n = 8, samples = 0;
  std::uint64_t seed = 1;
  verify->add_option("--props", props_text, "'all' or a comma-separated list of property names");
  verify->add_option("--max-n", max_n, "Largest tree size")->check(CLI::Range(1, 12));
  verify->add_option("--s-grid", s_grid_text, "Comma-separated s values");
  verify->add_option("--seed", seed, "Seed for random trees");
  verify->add_option("--samples", samples, "Random trees added to the exhaustive set")->check(CLI::NonNegativeNumber);
  verify->add_option("--tol", tol_text, "Tolerance (default 10^(8 - digits/2))");
  verify->add_option("--csv", csv_path, "Per-property summary CSV ('-' for stdout)")->expected(0, 1)->default_str("-");

  // reproduce
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Recompute a reference table and check it");
  std::string table_name;
  reproduce_cmd->add_option("table", table_name, "tau0_table, lam1_5_half, lam1_5_star, lam5_4_half, lam5_4_near1 or lam2025")
      ->required();
  reproduce_cmd->add_option("--csv", csv_path, "Table CSV ('-' for stdout)")->expected(0, 1)->default_str("-")->default_val("-");
  reproduce_cmd->add_option("--counts-file", counts_path, "Write complete count lists to FILE");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    ctx = PrecisionContext::from_environment();
    if (digits_flag) ctx.digits = *digits_flag;
    ctx.validate();
    PrecisionScope scope(ctx);
    detail::Output o{out, json, print_digits};

    if (*rho) {
      const Scalar s = parse_real<Scalar>(s_text);
      const int target = target_digits > 0 ? target_digits : static_cast<int>(ctx.digits) - 10;
      if (tree_path.empty() && cat_text.empty()) throw Error(ErrorKind::parse, "rho needs --caterpillar or --tree");
      ordered_json doc = tree_path.empty()
                             ? detail::radius_json(parse_caterpillar(cat_text), s, lo, hi, target, print_digits)
                             : detail::radius_json(detail::read_tree_file(tree_path), s, lo, hi, target, print_digits);
      detail::emit(o, doc);
      return kOk;
    }

    if (*locate) {
      const Scalar s = parse_real<Scalar>(s_text);
      const Scalar c = parse_real<Scalar>(point_text);
      if (tree_path.empty() && cat_text.empty()) throw Error(ErrorKind::parse, "locate needs --tree or --caterpillar");
      const EigenCount n = tree_path.empty() ? count_eigenvalues(parse_caterpillar(cat_text), s, c)
                                             : count_eigenvalues(detail::read_tree_file(tree_path), s, c);
      if (json) {
        detail::emit(o, ordered_json{{"greater", n.greater}, {"smaller", n.smaller}, {"equal", n.equal}});
      } else {
        out << n.greater << ' ' << n.smaller << ' ' << n.equal << '\n';
      }
      return kOk;
    }

    if (*recurrence) {
      const Scalar s = parse_real<Scalar>(s_text);
      const Scalar lambda = parse_real<Scalar>(lambda_text);
      const auto p = params(s, lambda);
      ordered_json doc;
      doc["alpha"] = format_real(p.alpha, print_digits);
      doc["gamma"] = format_real(p.gamma, print_digits);
      doc["discriminant"] = format_real(p.discriminant, print_digits);
      doc["delta"] = format_real(p.delta, print_digits);
      doc["adapted"] = p.adapted;
      if (p.adapted) {
        doc["theta"] = format_real(p.attracting(), print_digits);
        doc["theta_prime"] = format_real(p.repelling(), print_digits);
        doc["first_null"] = format_real(*p.first_null, print_digits);
      }
      if (orbit_start) {
        const auto rep = classify_orbit(p, parse_real<Scalar>(*orbit_start), steps);
        doc["start"] = to_string(rep.start);
        doc["initial_trend"] = trend_name(rep.initial_trend);
        if (rep.positive_step) {
          doc["positive_step"] = *rep.positive_step;
          doc["final_trend"] = trend_name(rep.final_trend);
        }
        doc["converged"] = rep.converged;
        if (json) {
          auto& arr = doc["orbit"] = ordered_json::array();
          for (const auto& x : rep.orbit) arr.push_back(format_real(x, print_digits));
        }
      }
      detail::emit(o, doc);
      if (orbit_start && !json) {
        const auto rep = classify_orbit(p, parse_real<Scalar>(*orbit_start), steps);
        out << "j,x\n";
        for (std::size_t j = 0; j < rep.orbit.size(); ++j) out << j + 1 << ',' << format_real(rep.orbit[j], print_digits) << '\n';
      }
      return kOk;
    }

    if (*shearer) {
      const auto choice = ParameterChoice::parse(s_text);
      std::vector<int> ks = report_text.empty() ? std::vector<int>{} : detail::parse_int_list(report_text);
      if (ks.empty()) {
        if (k == 0) throw Error(ErrorKind::parse, "shearer needs --k or --report");
        ks.push_back(k);
      }
      for (int kk : ks) {
        if (kk < 2) throw Error(ErrorKind::domain, "k must be at least 2");
      }
      const auto rows = convergence_report(lambda_text, choice, ks, ctx.digits, print_digits);
      std::unique_ptr<std::ofstream> counts_out;
      if (!counts_path.empty()) {
        counts_out = std::make_unique<std::ofstream>(counts_path);
        if (!*counts_out) throw Error(ErrorKind::parse, "cannot write '" + counts_path + "'");
        for (const auto& r : rows) *counts_out << r.k << ' ' << format_caterpillar(r.counts) << '\n';
      }
      if (shearer->count("--csv") > 0) {
        detail::CsvSink sink(csv_path, out);
        sink.stream() << "k,counts,rho,error\n";
        for (const auto& r : rows) {
          sink.stream() << r.k << ',' << format_counts_abbrev(r.counts) << ',' << r.rho << ',' << r.error << '\n';
        }
        if (csv_path == "-") return kOk;
      }
      ordered_json doc = ordered_json::array();
      for (const auto& r : rows) {
        ordered_json row;
        row["k"] = r.k;
        row["s"] = format_real(parse_real<Scalar>(r.s), print_digits);
        row["counts"] = r.counts.backbone() <= 20 ? format_caterpillar(r.counts) : format_counts_abbrev(r.counts);
        row["vertices"] = r.counts.vertex_count();
        row["rho"] = r.rho;
        row["error"] = r.error;
        row["digits"] = r.digits;
        if (diagnostics) {
          with_adaptive_precision(r.digits, [&](unsigned) {
            const Scalar lambda = parse_real<Scalar>(lambda_text);
            const Scalar s = choice.resolve(lambda);
            const auto run = generate(lambda, s, r.k);
            const auto eps = epsilon_k(run);
            row["epsilon_k"] = format_real(eps.epsilon, print_digits);
            row["inverse_beta_k"] = format_real(Scalar(Scalar(1) / run.beta_trace.back()), print_digits);
            if (Scalar(0) < convergence_margin(s, lambda)) row["beta_lower_bound"] = format_real(beta_lower_bound(run), print_digits);
            return 0;
          });
        }
        doc.push_back(std::move(row));
      }
      if (json) {
        out << doc.dump(2) << '\n';
      } else {
        for (std::size_t i = 0; i < doc.size(); ++i) {
          if (i) out << '\n';
          detail::emit(o, doc[i]);
        }
      }
      return kOk;
    }

    if (*tau0_cmd) {
      const auto t = tau0(parse_real<Scalar>(s_text));
      detail::emit(o, ordered_json{{"tau0", format_real(t.value, print_digits)}});
      return kOk;
    }

    if (*sstar_cmd) {
      const Scalar lambda = parse_real<Scalar>(lambda_text);
      const auto p = s_star(lambda);
      detail::emit(o, ordered_json{{"s_star", format_real(p.value, print_digits)},
                                   {"margin", format_real(convergence_margin(p.value, lambda), 6)}});
      return kOk;
    }

    if (*table_cmd) {
      const auto values = detail::split_list(s_list);
      if (values.empty()) throw Error(ErrorKind::parse, "empty --s-list");
      std::vector<std::string> lines;
      for (const auto& v : values) lines.push_back(v + ',' + format_real(tau0(parse_real<Scalar>(v)).value, print_digits));
      detail::CsvSink sink(csv_path, out);
      sink.stream() << "s,tau0\n";
      for (const auto& l : lines) sink.stream() << l << '\n';
      return kOk;
    }

    if (*verify) {
      std::vector<PropertyId> ids;
      if (props_text == "all") {
        ids.assign(kAllProperties.begin(), kAllProperties.end());
      } else {
        for (const auto& name : detail::split_list(props_text)) ids.push_back(parse_property(name));
      }
      std::vector<Scalar> grid;
      for (const auto& v : detail::split_list(s_grid_text)) grid.push_back(parse_real<Scalar>(v));
      if (grid.empty()) throw Error(ErrorKind::parse, "empty --s-grid");
      const Scalar tol = tol_text.empty() ? pow10<Scalar>(8 - static_cast<int>(ctx.digits) / 2) : parse_real<Scalar>(tol_text);
      TreeSource exhaustive{TreeSource::Kind::exhaustive, max_n, 0, 4, seed};
      auto summary = sweep(ids, exhaustive, grid, tol);
      if (samples > 0) {
        TreeSource random{TreeSource::Kind::random_trees, max_n, samples, 4, seed};
        auto extra = sweep(ids, random, grid, tol);
        for (auto& [id, c] : extra.counts) {
          for (int i = 0; i < 3; ++i) summary.counts[id][i] += c[i];
        }
        for (auto& v : extra.violations) summary.violations.push_back(std::move(v));
      }
      if (verify->count("--csv") > 0) {
        detail::CsvSink sink(csv_path, out);
        sink.stream() << "property,holds,violated,not_applicable\n";
        for (auto id : ids) {
          const auto& c = summary.counts[id];
          sink.stream() << to_string(id) << ',' << c[0] << ',' << c[1] << ',' << c[2] << '\n';
        }
      }
      if (verify->count("--csv") == 0 || csv_path != "-") {
        ordered_json doc;
        for (auto id : ids) {
          const auto& c = summary.counts[id];
          doc[to_string(id)] = ordered_json{{"holds", c[0]}, {"violated", c[1]}, {"not_applicable", c[2]}};
        }
        doc["violations"] = summary.total_violations();
        detail::emit(o, doc);
      }
      for (const auto& v : summary.violations) {
        err << "violated " << to_string(v.id) << " at s = " << v.witness->s << "\n" << v.witness->tree;
        for (const auto& [name, value] : v.witness->values) err << "  " << name << " = " << value << '\n';
      }
      return summary.total_violations() == 0 ? kOk : kToleranceFailure;
    }

    if (*reproduce_cmd) {
      const TableId id = parse_table(table_name);
      std::unique_ptr<std::ofstream> counts_out;
      if (!counts_path.empty()) {
        counts_out = std::make_unique<std::ofstream>(counts_path);
        if (!*counts_out) throw Error(ErrorKind::parse, "cannot write '" + counts_path + "'");
      }
      const auto result = reproduce(id, ctx.digits, print_digits, counts_out.get());
      detail::CsvSink sink(csv_path, out);
      result.write_csv(sink.stream());
      for (const auto& c : result.checks) {
        if (!c.ok) err << "mismatch " << to_string(id) << " row " << c.row << ' ' << c.what << ": " << c.detail << '\n';
      }
      return result.ok() ? kOk : kToleranceFailure;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::precision && e.required_digits() > 0) {
      err << "retry with --digits " << e.required_digits() << '\n';
    }
    return exit_code_for(e.kind());
  }
  return kUsage;
}

}  // namespace dlap::cli

#endif  // DLAP_CLI_HPP
