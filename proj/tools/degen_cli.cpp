// degen: command-line front end for the degenerate-parabolic benchmark.
//
//   degen solve  --scheme hl --tau 0.05 --tol 1e-3
//   degen tables --which all --n 8 --out results
//   degen theory --tol 1e-4 --tau 0.025 --eps 1e-4
//
// Exit codes: 0 success / converged, 1 usage or I/O error, 2 not converged.
// DEGEN_OUT_DIR sets the default output directory, DEGEN_CACHE_DIR the
// directory for cached reference solutions (default: <out>/reference_cache).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "degen/benchmark.hpp"
#include "degen/theory.hpp"

namespace fs = std::filesystem;
using namespace degen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

RegularizationKind parse_kind(const std::string& s) {
  return s == "quadratic" ? RegularizationKind::Quadratic : RegularizationKind::Linear;
}

SchemeKind parse_scheme(const std::string& s) {
  if (s == "hl") return SchemeKind::HL;
  if (s == "lreg") return SchemeKind::RegularizedL;
  return SchemeKind::Newton;
}

std::ofstream open_output(const fs::path& file) {
  std::error_code ec;
  if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create directory " + file.parent_path().string() + ": " + ec.message());
  std::ofstream os(file, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  return os;
}

ReferenceOptions reference_options(const fs::path& out, const std::string& cache) {
  ReferenceOptions ro;
  ro.cache_dir = cache.empty() ? out / "reference_cache" : fs::path(cache);
  return ro;
}

struct SolveArgs {
  std::string scheme;
  int n = 32;
  double tau = 0.05;
  std::optional<int> steps;
  double tol = 1e-3;
  std::optional<double> eps;
  std::optional<double> L;
  double shift = 0.0;
  std::string regularization = "linear";
  std::string out;
  std::string cache;
};

int run_solve(const SolveArgs& a) {
  const SchemeKind kind = parse_scheme(a.scheme);
  if (kind == SchemeKind::HL && a.eps) throw UsageError("--eps: the HL-scheme takes no regularization parameter");
  if (kind == SchemeKind::HL && a.shift != 0.0) throw UsageError("--shift: the HL-scheme takes no regularization");
  if (kind != SchemeKind::HL && !a.eps) throw UsageError("--eps: required for --scheme " + a.scheme);
  if (kind == SchemeKind::Newton && a.L) throw UsageError("--L: the Newton scheme has no stabilization parameter");

  const fs::path out(a.out);
  Benchmark bm(a.n, {}, reference_options(out, a.cache), parse_kind(a.regularization));
  int full_steps = 0;
  try {
    full_steps = bm.num_steps(a.tau);
  } catch (const std::invalid_argument&) {
    throw UsageError("--tau: must divide the final time " + fmt(bm.problem().final_time));
  }
  const int steps = a.steps.value_or(full_steps);
  if (steps < 1 || steps > full_steps) {
    throw UsageError("--steps: must lie in [1, " + std::to_string(full_steps) + "] for tau = " + fmt(a.tau));
  }
  SchemeConfig config;
  try {
    config = bm.make_config(kind, a.tol, a.eps, a.tau, a.L, a.shift);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::cout << "# degen solve scheme=" << a.scheme << " n=" << a.n << " tau=" << fmt(a.tau) << " steps=" << steps
            << " tol=" << fmt(a.tol) << " eps=" << fmt(a.eps)
            << " L=" << (kind == SchemeKind::Newton ? std::string() : fmt(config.L)) << " shift=" << fmt(a.shift)
            << " regularization=" << a.regularization << " max_iterations=" << config.max_iterations << '\n';
  if (kind == SchemeKind::HL) {
    const auto p = select_delta(a.tol, a.tau, TheoryConstants::unit_square(bm.problem().nonlinearity));
    std::cout << "# delta=" << fmt(p.delta) << " L_theory=" << fmt(p.L) << '\n';
  }

  const TimeSeriesResult series = bm.run(config, false, steps);
  for (std::size_t k = 0; k < series.steps.size(); ++k) {
    const auto& r = series.steps[k].report;
    std::cout << "step " << k + 1 << " iterations=" << r.iterations_used
              << " error=" << (r.error_history.empty() ? std::string("-") : fmt(r.error_history.back()))
              << (r.converged ? " converged" : " failed (" + to_string(*r.failure_reason) + ")") << '\n';
  }

  ExperimentResult row;
  row.scheme = kind;
  row.tol = a.tol;
  row.eps = a.eps;
  row.tau = a.tau;
  row.L = kind == SchemeKind::Newton ? 0.0 : config.L;
  row.total_iterations = series.total_iterations;
  row.num_steps = steps;
  row.converged = series.converged;
  if (!series.converged) row.failure_reason = series.steps.back().report.failure_reason;

  const fs::path csv = out / ("solve_" + a.scheme + ".csv");
  auto os = open_output(csv);
  write_csv(os, {row});
  if (!os) throw std::runtime_error("failed writing " + csv.string());

  if (series.converged) {
    std::cout << "converged: total_iterations=" << row.total_iterations << " per_step=" << fmt(row.per_step())
              << " factorizations=" << series.factorizations << '\n';
    std::cout << "wrote " << csv.string() << '\n';
    return kExitOk;
  }
  std::cout << "nc: failure_reason=" << to_string(*row.failure_reason) << " at step " << series.steps.size() << '\n';
  std::cout << "wrote " << csv.string() << '\n';
  return kExitNotConverged;
}

struct TablesArgs {
  std::string which = "all";
  int n = 32;
  std::string regularization = "linear";
  std::string out;
  std::string cache;
};

int run_tables(const TablesArgs& a) {
  const fs::path out(a.out);
  Benchmark bm(a.n, {}, reference_options(out, a.cache), parse_kind(a.regularization));
  const TableGrid grid;

  struct Table {
    std::string id;
    SchemeKind kind;
    std::string file;
  };
  const std::vector<Table> all{{"1", SchemeKind::Newton, "table1_newton.csv"},
                               {"3", SchemeKind::RegularizedL, "table3_lreg.csv"},
                               {"5", SchemeKind::HL, "table5_hl.csv"}};

  auto summary = open_output(out / ("summary_" + a.which + ".txt"));
  summary << "# degen tables which=" << a.which << " n=" << a.n << " regularization=" << a.regularization
          << " T=" << fmt(bm.problem().final_time) << " alpha=" << fmt(bm.problem().nonlinearity.alpha) << '\n';
  for (const auto& t : all) {
    if (a.which != "all" && a.which != t.id) continue;
    std::cout << "table " << t.id << " (" << to_string(t.kind) << ") on a " << a.n << "x" << a.n << " mesh" << std::endl;
    const auto rows = bm.run_table(t.kind, grid);
    auto csv = open_output(out / t.file);
    write_csv(csv, rows);
    if (!csv) throw std::runtime_error("failed writing " + (out / t.file).string());
    write_summary(summary, t.kind, rows);
    summary << '\n';
    write_summary(std::cout, t.kind, rows);
    std::cout << "wrote " << (out / t.file).string() << std::endl;
  }
  if (!summary) throw std::runtime_error("failed writing summary in " + out.string());
  return kExitOk;
}

struct TheoryArgs {
  double tol = 1e-3;
  double tau = 0.05;
  double alpha = 0.5;
  double holder_constant = 1.0;
  std::optional<double> eps;
};

int run_theory(const TheoryArgs& a) {
  const PowerLaw b{a.alpha, a.holder_constant};
  try {
    b.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--alpha/--holder-constant: ") + e.what());
  }
  if (a.alpha >= 1.0) throw UsageError("--alpha: the Hoelder estimates need alpha < 1");
  const auto consts = TheoryConstants::unit_square(b);
  const auto p = select_delta(a.tol, a.tau, consts);
  std::printf("TOL = %g\ntau = %g\nalpha = %g\n", a.tol, a.tau, a.alpha);
  std::printf("C(alpha) = %.6g\n", c_alpha(consts));
  std::printf("delta = %.6g\n", p.delta);
  std::printf("L = %g\n", p.L);
  std::printf("delta_effective = %.6g\n", p.delta_effective);
  std::printf("R = %.6g\n", contraction_factor(p.delta_effective, a.tau, consts));
  std::printf("accumulated_bound = %.6g\n", accumulated_error_bound(p.delta_effective, a.tau, consts));
  if (a.eps) {
    const Regularization reg{RegularizationKind::Linear, *a.eps, 0.0, b};
    const auto lc = lipschitz_constants(reg);
    std::printf("eps = %g\n", *a.eps);
    std::printf("L_beps = %.6g\n", lc.value);
    std::printf("L_reg = %g\n", select_L_regularized(*a.eps, b));
    std::printf("regularization_gap = %.6g\n", regularization_gap_bound(a.alpha, *a.eps));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear iterative schemes for a degenerate parabolic benchmark"};
  app.require_subcommand(1);
  const std::string default_out = env_or("DEGEN_OUT_DIR", ".");
  const std::string default_cache = env_or("DEGEN_CACHE_DIR", "");

  SolveArgs solve;
  solve.out = default_out;
  solve.cache = default_cache;
  auto* sc = app.add_subcommand("solve", "Run one scheme over the time interval");
  sc->add_option("--scheme", solve.scheme, "hl, lreg or newton")->required()->check(CLI::IsMember({"hl", "lreg", "newton"}));
  sc->add_option("--n", solve.n, "Subdivisions per side")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_option("--tau", solve.tau, "Time step")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_option("--steps", solve.steps, "Number of time steps (default: all)");
  sc->add_option("--tol", solve.tol, "Stopping tolerance against the reference")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_option("--eps", solve.eps, "Regularization parameter (lreg, newton)")->check(CLI::PositiveNumber);
  sc->add_option("--L", solve.L, "Stabilization (default: theory selection)")->check(CLI::PositiveNumber);
  sc->add_option("--shift", solve.shift, "Shift s of b_eps + s u")->check(CLI::NonNegativeNumber)->capture_default_str();
  sc->add_option("--regularization", solve.regularization, "linear or quadratic")
      ->check(CLI::IsMember({"linear", "quadratic"}))->capture_default_str();
  sc->add_option("--out", solve.out, "Output directory (env DEGEN_OUT_DIR)")->capture_default_str();
  sc->add_option("--cache", solve.cache, "Reference cache directory (env DEGEN_CACHE_DIR)");

  TablesArgs tables;
  tables.out = default_out;
  tables.cache = default_cache;
  auto* tc = app.add_subcommand("tables", "Reproduce the scheme-comparison tables");
  tc->add_option("--which", tables.which, "1 (Newton), 3 (regularized L), 5 (HL) or all")
      ->check(CLI::IsMember({"1", "3", "5", "all"}))->capture_default_str();
  tc->add_option("--n", tables.n, "Subdivisions per side")->check(CLI::PositiveNumber)->capture_default_str();
  tc->add_option("--regularization", tables.regularization, "linear or quadratic")
      ->check(CLI::IsMember({"linear", "quadratic"}))->capture_default_str();
  tc->add_option("--out", tables.out, "Output directory (env DEGEN_OUT_DIR)")->capture_default_str();
  tc->add_option("--cache", tables.cache, "Reference cache directory (env DEGEN_CACHE_DIR)");

  TheoryArgs theory;
  auto* th = app.add_subcommand("theory", "Print delta, L, R, C(alpha) and the accumulated bound");
  th->add_option("--tol", theory.tol, "Target tolerance")->required()->check(CLI::PositiveNumber);
  th->add_option("--tau", theory.tau, "Time step")->required()->check(CLI::PositiveNumber);
  th->add_option("--alpha", theory.alpha, "Hoelder exponent")->capture_default_str();
  th->add_option("--holder-constant", theory.holder_constant, "Hoelder constant L_b")->capture_default_str();
  th->add_option("--eps", theory.eps, "Also report the regularized L-scheme parameters")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sc) return run_solve(solve);
    if (*tc) return run_tables(tables);
    if (*th) return run_theory(theory);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
