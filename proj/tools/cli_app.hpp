#pragma once

#include <simplexd/io.hpp>
#include <simplexd/simplexd.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace simplexd::cli {

/// Directory used for --out when only a file name is implied.
inline constexpr const char* kOutDirEnv = "SIMPLEXD_OUT_DIR";

struct Options {
  std::string target;  // function name, table path or scheme (count/points)
  std::string scheme;
  Index n = 0;
  std::string x0;
  double h = 0.0;
  std::string v;
  Index row = 0;  // 1-based
  std::string subset;
  int radii = 8;
  double ratio = 0.5;
  int order = 3;
  std::string out;
  std::string format = "table";
  double l_hessian = -1.0;
  double l_third = -1.0;
  std::optional<double> expect_order;
  double tolerance = 0.15;
  unsigned threads = 1;
};

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Vector parse_list(const std::string& text, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw CliError(std::string("malformed ") + what + ": '" + text + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw CliError(std::string(what) + " is empty");
  return Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
}

/// An estimator with the directions it was built from.
struct Plan {
  std::string name;
  std::optional<SchemeSpec> spec;
  std::optional<Directions> dirs;
  std::function<DerivTensor(const PointValues&)> estimator;
  std::optional<std::string> closed_form;  // formula label for the eval count
  std::optional<std::size_t> closed_value;
  bool uses_step = true;  // false when the directions are fixed
};

inline Matrix example_outer(int which) {
  if (which == 1) return Matrix{{0.1, 0.0, 0.0}, {0.0, 0.1, 0.2}, {0.0, 0.0, 0.0}};
  return Matrix{{0.1, 0.1}, {0.0, 0.1}, {0.0, 0.0}};
}

inline Directions negated_column_family(const Matrix& s) {
  std::vector<DirectionMatrix> ts;
  for (Index j = 0; j < s.cols(); ++j) ts.emplace_back(Matrix(-s.col(j)), "T" + std::to_string(j + 1));
  return {DirectionMatrix(s, "S"), DirectionFamily(std::move(ts))};
}

inline std::string canonical_scheme(const std::string& s) {
  if (s == "row") return "row-gsh";
  if (s == "offdiag") return "offdiag-gsh";
  if (s == "hvp") return "hvp-gsh";
  return s;
}

inline Plan make_plan(const Options& o, Index n, double h, const Vector& v) {
  const std::string name = canonical_scheme(o.scheme);
  Plan p;
  p.name = name;
  const auto nn = static_cast<std::size_t>(n);
  auto with_spec = [&](SchemeSpec spec) {
    spec.n = n;
    spec.h = h;
    p.dirs = build(spec);
    p.spec = spec;
    p.estimator = [spec, d = *p.dirs](const PointValues& values) { return run_estimator(values, spec, d); };
  };
  if (name == "gsh-minimal") {
    with_spec({SchemeKind::full_gsh_minimal});
    p.closed_form = "(n+1)(n+2)/2";
    p.closed_value = (nn + 1) * (nn + 2) / 2;
  } else if (name == "gcsh-minimal") {
    with_spec({SchemeKind::full_gcsh_minimal});
    p.closed_form = "n^2+n+1";
    p.closed_value = nn * nn + nn + 1;
  } else if (name == "diag" || name == "cshd") {
    SchemeSpec spec{name == "diag" ? SchemeKind::diag : SchemeKind::cshd};
    if (o.subset.empty()) {
      for (Index i = 0; i < n; ++i) spec.subset.push_back(i);
    } else {
      for (double i : parse_list(o.subset, "--subset")) {
        if (i != std::floor(i)) throw CliError("--subset entries must be integers");
        spec.subset.push_back(static_cast<Index>(i) - 1);
      }
    }
    with_spec(spec);
    p.closed_form = "2|subset|+1";
    p.closed_value = 2 * spec.subset.size() + 1;
  } else if (name == "offdiag-gsh" || name == "offdiag-gcsh") {
    SchemeSpec spec{SchemeKind::off_diag};
    spec.centered = name == "offdiag-gcsh";
    with_spec(spec);
    p.closed_form = spec.centered ? "n^2+n+1" : "(n(n+1)+2)/2";
    p.closed_value = spec.centered ? nn * nn + nn + 1 : (nn * (nn + 1) + 2) / 2;
  } else if (name == "row-gsh" || name == "row-gcsh") {
    SchemeSpec spec{SchemeKind::row};
    spec.centered = name == "row-gcsh";
    if (o.row < 1 || o.row > n) throw CliError("--row must be in 1.." + std::to_string(n));
    spec.row = o.row - 1;
    with_spec(spec);
    p.closed_form = spec.centered ? "4n+1" : "2n+1";
    p.closed_value = spec.centered ? 4 * nn + 1 : 2 * nn + 1;
  } else if (name == "hvp-gsh" || name == "hvp-gcsh") {
    if (v.size() != n) throw CliError("--v must have n entries");
    if (v.cwiseAbs().maxCoeff() == 0.0) throw CliError("v must be nonzero");
    SchemeSpec spec{name == "hvp-gsh" ? SchemeKind::hvp_gsh : SchemeKind::hvp_gcsh};
    spec.v = v;
    with_spec(spec);
    p.closed_form = name == "hvp-gsh" ? "2n+1" : "4n-1";
    p.closed_value = name == "hvp-gsh" ? 2 * nn + 1 : 4 * nn - 1;
  } else if (name == "gcsh-example1" || name == "gcsh-example2" || name == "cshd-example1" ||
             name == "cshd-example2") {
    if (n != 3) throw CliError("the worked-example schemes are defined for n = 3");
    const Directions d = negated_column_family(example_outer(name.back() == '1' ? 1 : 2));
    p.dirs = d;
    p.uses_step = false;
    if (name.starts_with("gcsh"))
      p.estimator = [d](const PointValues& values) {
        return DerivTensor::from_matrix(gcsh(values, d.outer, d.inner));
      };
    else
      p.estimator = [d](const PointValues& values) { return DerivTensor::from_vector(cshd(values, d.outer)); };
  } else if (name == "gsg") {
    const DirectionMatrix s(h * Matrix::Identity(n, n), "S");
    p.estimator = [s](const PointValues& values) { return DerivTensor::from_vector(gsg(values, s)); };
    p.closed_form = "n+1";
    p.closed_value = nn + 1;
  } else if (name == "tensor") {
    if (o.order < 1 || o.order > kDefaultMaxOrder)
      throw CliError("--order must be in 1.." + std::to_string(kDefaultMaxOrder));
    const DirectionMatrix s(h * Matrix::Identity(n, n), "S1");
    std::vector<DirectionMatrix> inner;
    for (int i = 2; i <= o.order; ++i) inner.emplace_back(h * Matrix::Identity(n, n), "S" + std::to_string(i));
    p.estimator = [s, inner](const PointValues& values) { return simplex_derivative_tensor(values, s, inner); };
  } else {
    throw CliError("unknown scheme '" + o.scheme + "'");
  }
  return p;
}

inline std::ostream& open_output(const Options& o, const std::string& default_name, std::ofstream& file,
                                 std::ostream& out) {
  std::string path = o.out;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) path = (std::filesystem::path(dir) / default_name).string();
  }
  if (path.empty() || path == "-") return out;
  file.open(path);
  if (!file) throw CliError("cannot open output file " + path);
  return file;
}

inline std::string extension(const Options& o) { return o.format == "json" ? "json" : o.format == "csv" ? "csv" : "txt"; }

inline void print_tensor(std::ostream& os, const DerivTensor& t) {
  if (t.order() == 1) {
    const Vector v = t.to_vector();
    for (Index i = 0; i < v.size(); ++i) os << (i ? "  " : "  ") << io::readable(v(i));
    os << '\n';
    return;
  }
  const Matrix m = t.unfold();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << "  " << std::setw(12) << io::readable(m(i, j));
    os << '\n';
  }
}

inline void print_report_table(std::ostream& os, const SweepReport& r) {
  os << "scheme " << r.scheme << " on " << r.function << '\n';
  os << std::setw(14) << "h" << std::setw(14) << "delta_u" << std::setw(14) << "error" << std::setw(14) << "bound"
     << std::setw(8) << "evals" << std::setw(6) << "ok" << '\n';
  for (const auto& row : r.rows) {
    os << std::setw(14) << io::readable(row.h) << std::setw(14) << io::readable(row.delta_u) << std::setw(14)
       << io::readable(row.error) << std::setw(14) << (row.bound ? io::readable(*row.bound) : "-") << std::setw(8)
       << row.evaluations << std::setw(6) << (row.pass ? "yes" : "NO") << '\n';
  }
  if (r.exact)
    os << "order: exact (error below the round-off floor)\n";
  else if (r.slope)
    os << "order: " << io::readable(*r.slope) << '\n';
}

inline void write_report(const Options& o, const SweepReport& r, std::ostream& out, const std::string& stem) {
  std::ofstream file;
  std::ostream& os = open_output(o, stem + "." + extension(o), file, out);
  if (o.format == "json")
    os << io::to_json(r).dump(2) << '\n';
  else if (o.format == "csv")
    os << io::report_csv(r);
  else
    print_report_table(os, r);
}

struct Objective {
  std::string name;
  std::optional<TestFunction> fn;
  std::optional<io::EvaluationTable> table;
  Index n = 0;
};

inline Objective resolve_objective(const std::string& target) {
  Objective obj;
  obj.name = target;
  if (auto fn = find_function(target)) {
    obj.n = fn->n;
    obj.fn = std::move(fn);
    return obj;
  }
  if (std::filesystem::exists(target)) {
    try {
      obj.table = io::load_table(target);
    } catch (const std::exception& e) {
      throw CliError(e.what());
    }
    obj.n = obj.table->n;
    return obj;
  }
  throw CliError("unknown function '" + target + "' (not a registered name or a readable table)");
}

inline int cmd_approx(const Options& o, std::ostream& out) {
  const Objective obj = resolve_objective(o.target);
  Vector x0;
  if (!o.x0.empty())
    x0 = parse_list(o.x0, "--x0");
  else if (obj.fn)
    x0 = obj.fn->default_x0;
  else
    throw CliError("--x0 is required with an evaluation table");
  if (x0.size() != obj.n) throw CliError("--x0 must have " + std::to_string(obj.n) + " entries");
  const double h = o.h != 0.0 ? o.h : default_step(x0);
  const Vector v = o.v.empty() ? Vector::Unit(obj.n, 0) : parse_list(o.v, "--v");
  const Plan plan = make_plan(o, obj.n, h, v);
  const SamplePlan points = enumerate(x0, [&](const PointValues& vals) { plan.estimator(vals); }, plan.name);

  EvalCache cache;
  if (obj.fn) {
    evaluate(obj.fn->f, points, cache, o.threads);
  } else {
    obj.table->fill(cache);
    for (const auto& p : points.points)
      if (!cache.find(p.coords))
        throw CliError("evaluation table lacks plan point " + format_point(p.coords) + " (" + p.provenances.front() +
                       ")");
  }
  const DerivTensor estimate = plan.estimator(CachedValues(x0, cache));

  std::optional<double> bound;
  if (obj.fn && obj.fn->polynomial && plan.spec) {
    const double ball = bound_ball_radius(*plan.spec, *plan.dirs);
    bound = scheme_bound(*plan.spec, *plan.dirs, lipschitz_constant(*obj.fn->polynomial, x0, ball, 2),
                         lipschitz_constant(*obj.fn->polynomial, x0, ball, 3));
  }

  std::ofstream file;
  std::ostream& os = open_output(o, "approx-" + plan.name + "." + extension(o), file, out);
  if (o.format == "json") {
    io::json j{{"scheme", plan.name}, {"function", obj.name}, {"x0", io::to_json(x0)},
               {"estimate", io::to_json(estimate)}, {"evaluations", points.count()}};
    j["h"] = plan.uses_step ? io::json(h) : io::json(nullptr);
    j["bound"] = bound ? io::json(*bound) : io::json(nullptr);
    os << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    os << io::tensor_csv(estimate);
  } else {
    os << "scheme " << plan.name << " on " << obj.name;
    if (plan.uses_step) os << " at h = " << io::readable(h);
    os << '\n';
    print_tensor(os, estimate);
    os << "evaluations: " << points.count() << '\n';
    if (bound) os << "error bound: " << io::readable(*bound) << '\n';
  }
  return 0;
}

inline int cmd_count(const Options& o, std::ostream& out) {
  if (o.n < 1) throw CliError("--n must be at least 1");
  const Vector x0 = Vector::Zero(o.n);
  const Vector v = o.v.empty() ? Vector::Unit(o.n, 0) : parse_list(o.v, "--v");
  Options opt = o;
  opt.scheme = o.target;
  if (opt.row == 0) opt.row = 1;
  const Plan plan = make_plan(opt, o.n, o.h != 0.0 ? o.h : 1e-3, v);
  const SamplePlan points = enumerate(x0, [&](const PointValues& vals) { plan.estimator(vals); }, plan.name);
  const bool ok = !plan.closed_value || *plan.closed_value == points.count();
  const std::size_t nn = static_cast<std::size_t>(o.n);
  std::optional<std::string> note;
  if (plan.name == "row-gcsh" && o.n <= 3)
    note = "a minimal poised set for the full GCSH costs n^2+n+1 = " + std::to_string(nn * nn + nn + 1) +
           " and is preferable for n <= 3";
  if (o.format == "json") {
    io::json j{{"scheme", plan.name}, {"n", o.n}, {"count", points.count()}, {"matches_formula", ok}};
    j["formula"] = plan.closed_form ? io::json(*plan.closed_form) : io::json(nullptr);
    j["note"] = note ? io::json(*note) : io::json(nullptr);
    out << j.dump(2) << '\n';
  } else {
    out << points.count();
    if (plan.closed_form) out << "  " << *plan.closed_form;
    out << '\n';
    if (note) out << "note: " << *note << '\n';
    if (!ok) out << "mismatch: formula gives " << *plan.closed_value << '\n';
  }
  return ok ? 0 : 1;
}

inline int cmd_points(const Options& o, std::ostream& out) {
  if (o.n < 1) throw CliError("--n must be at least 1");
  const Vector x0 = o.x0.empty() ? Vector::Zero(o.n) : parse_list(o.x0, "--x0");
  if (x0.size() != o.n) throw CliError("--x0 must have n entries");
  const Vector v = o.v.empty() ? Vector::Unit(o.n, 0) : parse_list(o.v, "--v");
  Options opt = o;
  opt.scheme = o.target;
  if (opt.row == 0) opt.row = 1;
  const Plan plan = make_plan(opt, o.n, o.h != 0.0 ? o.h : 1.0, v);
  const SamplePlan points = enumerate(x0, [&](const PointValues& vals) { plan.estimator(vals); }, plan.name);
  std::ofstream file;
  std::ostream& os = open_output(o, "points-" + plan.name + "." + (o.format == "json" ? "json" : "csv"), file, out);
  if (o.format == "json")
    os << io::to_json(points).dump(2) << '\n';
  else
    os << io::plan_csv(points);
  return 0;
}

inline SchemeSpec sweep_spec(const Options& o, Index n) {
  const Vector v = o.v.empty() ? Vector::Ones(n) : parse_list(o.v, "--v");
  Options opt = o;
  if (opt.row == 0) opt.row = 1;
  const Plan plan = make_plan(opt, n, 1.0, v);
  if (!plan.spec) throw CliError("scheme '" + o.scheme + "' cannot be swept");
  return *plan.spec;
}

inline Vector objective_x0(const Options& o, const TestFunction& fn) {
  const Vector x0 = o.x0.empty() ? fn.default_x0 : parse_list(o.x0, "--x0");
  if (x0.size() != fn.n) throw CliError("--x0 must have " + std::to_string(fn.n) + " entries");
  return x0;
}

inline int cmd_order(const Options& o, std::ostream& out) {
  auto fn = find_function(o.target);
  if (!fn) throw CliError("unknown function '" + o.target + "'");
  const Vector x0 = objective_x0(o, *fn);
  const SchemeSpec spec = sweep_spec(o, fn->n);
  const auto radii = geometric_radii(o.h != 0.0 ? o.h : 0.1, o.ratio, o.radii);
  const SweepReport report = convergence_order(spec, *fn, x0, radii);
  write_report(o, report, out, "order-" + fn->name + "-" + report.scheme);
  if (o.expect_order) {
    if (report.exact || !report.slope) return 1;
    return std::abs(*report.slope - *o.expect_order) <= o.tolerance ? 0 : 1;
  }
  return 0;
}

inline int cmd_bounds(const Options& o, std::ostream& out) {
  if (o.target.empty()) {
    // Formula only: Lipschitz constants from the command line.
    if (o.n < 1) throw CliError("--n is required without a function");
    if (o.l_hessian < 0.0 && o.l_third < 0.0) throw CliError("give --L2 and/or --L3, or a polynomial function");
    const SchemeSpec spec = sweep_spec(o, o.n);
    SchemeSpec s = spec;
    s.h = o.h != 0.0 ? o.h : 0.1;
    const Directions d = build(s);
    const double b = scheme_bound(s, d, std::max(0.0, o.l_hessian), std::max(0.0, o.l_third));
    if (o.format == "json")
      out << io::json{{"scheme", scheme_name(s)}, {"h", s.h}, {"bound", b}}.dump(2) << '\n';
    else
      out << io::readable(b) << '\n';
    return 0;
  }
  auto fn = find_function(o.target);
  if (!fn) throw CliError("unknown function '" + o.target + "'");
  if (!fn->polynomial) throw CliError("bound verification needs a polynomial test function");
  const Vector x0 = objective_x0(o, *fn);
  const SchemeSpec spec = sweep_spec(o, fn->n);
  const auto radii = geometric_radii(o.h != 0.0 ? o.h : 0.1, o.ratio, o.radii);
  const SweepReport report = verify_bound(spec, *fn, x0, radii);
  write_report(o, report, out, "bounds-" + fn->name + "-" + report.scheme);
  return report.all_pass() ? 0 : 1;
}

/// Entry point shared by the executable and the tests. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simplex derivative approximations from function values"};
  // --h is the step, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool scheme_flag = true) {
    sub->set_help_flag("--help", "Print this help message and exit");
    if (scheme_flag) sub->add_option("--scheme", o.scheme, "Scheme name");
    sub->add_option("--n", o.n, "Dimension");
    sub->add_option("--x0", o.x0, "Point of interest, comma separated");
    sub->add_option("--h", o.h, "Step (radius); first radius for sweeps");
    sub->add_option("--v", o.v, "Direction for HVP schemes, comma separated");
    sub->add_option("--row,--i", o.row, "Row index (1-based) for row schemes");
    sub->add_option("--subset", o.subset, "Diagonal indices (1-based), comma separated");
    sub->add_option("--out", o.out, "Output file ('-' for stdout)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--threads", o.threads, "Parallel objective evaluations");
    sub->add_option("--order", o.order, "Derivative order for the tensor scheme");
  };

  auto* approx = app.add_subcommand("approx", "Estimate derivatives of a registered function or a table");
  approx->add_option("function", o.target, "Function name or CSV table (x1..xn,f)")->required();
  common(approx);

  auto* count = app.add_subcommand("count", "Distinct function evaluations of a scheme");
  count->add_option("scheme", o.target, "Scheme name")->required();
  common(count, false);

  auto* points = app.add_subcommand("points", "Deduplicated sample set of a scheme");
  points->add_option("scheme", o.target, "Scheme name")->required();
  common(points, false);

  auto* order = app.add_subcommand("order", "Empirical convergence order over a radius sweep");
  order->add_option("function", o.target, "Function name")->required();
  common(order);
  order->add_option("--radii", o.radii, "Number of radii")->check(CLI::Range(4, 64));
  order->add_option("--ratio", o.ratio, "Radius ratio")->check(CLI::Range(0.01, 0.99));
  order->add_option("--expect-order", o.expect_order, "Fail unless the fitted order is within --tol");
  order->add_option("--tol", o.tolerance, "Tolerance for --expect-order");

  auto* bounds = app.add_subcommand("bounds", "Error-bound right-hand sides, or measured error against them");
  bounds->add_option("function", o.target, "Polynomial function name (omit to print the formula value)");
  common(bounds);
  bounds->add_option("--radii", o.radii, "Number of radii")->check(CLI::Range(1, 64));
  bounds->add_option("--ratio", o.ratio, "Radius ratio")->check(CLI::Range(0.01, 0.99));
  bounds->add_option("--L2", o.l_hessian, "Lipschitz constant of the Hessian");
  bounds->add_option("--L3", o.l_third, "Lipschitz constant of the third derivative");

  std::vector<std::string> argv_store{"simplexd"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*approx) {
      if (o.scheme.empty()) throw CliError("--scheme is required");
      return cmd_approx(o, out);
    }
    if (*count) return cmd_count(o, out);
    if (*points) return cmd_points(o, out);
    if (*order) {
      if (o.scheme.empty()) throw CliError("--scheme is required");
      return cmd_order(o, out);
    }
    if (*bounds) {
      if (o.scheme.empty()) throw CliError("--scheme is required");
      return cmd_bounds(o, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace simplexd::cli
