#include "degen/benchmark.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "degen/theory.hpp"

namespace degen {

double ManufacturedSolution::u(double t, const Point& p) const {
  return -0.5 + 16.0 * p.x * (1.0 - p.x) * p.y * (1.0 - p.y) * (t + 0.5);
}

double ManufacturedSolution::laplacian(double t, const Point& p) const {
  return -32.0 * (t + 0.5) * (p.x * (1.0 - p.x) + p.y * (1.0 - p.y));
}

double ManufacturedSolution::source(double t_n, double t_prev, const Point& p) const {
  const double storage = (b(nonlinearity, u(t_n, p)) - b(nonlinearity, u(t_prev, p))) / (t_n - t_prev);
  return storage - laplacian(t_n, p);
}

double source_term(const ManufacturedSolution& problem, double t_n, double t_prev, const Point& barycenter) {
  if (!(t_n > t_prev) || t_prev < 0.0) {
    throw std::invalid_argument("source_term: need t_n > t_prev >= 0");
  }
  return problem.source(t_n, t_prev, barycenter);
}

Eigen::VectorXd source_vector(const Mesh& mesh, const ManufacturedSolution& problem, double tau, int step) {
  const double t_n = step * tau;
  const double t_prev = (step - 1) * tau;
  return project_scalar(mesh, [&](const Point& p) { return source_term(problem, t_n, t_prev, p); }).values;
}

ReferenceSolution compute_reference(const Mesh& mesh, const AssembledForms& forms,
                                    const ManufacturedSolution& problem, double tau, int num_steps,
                                    const ReferenceOptions& options) {
  const auto consts = TheoryConstants::unit_square(problem.nonlinearity);
  const double L = select_delta(options.tol_for_L, tau, consts).L;

  StoppingCriterion stop{StoppingMode::Increment, options.increment_tol, std::nullopt, std::nullopt};
  SchemeConfig config = SchemeConfig::hl(problem.nonlinearity, L, tau, stop);
  config.max_iterations = options.max_iterations;

  TimeSeriesOptions ts;
  ts.source = [&](int n) { return source_vector(mesh, problem, tau, n); };
  const ScalarField u0 = project_scalar(mesh, [&](const Point& p) { return problem.u(0.0, p); });
  TimeSeriesResult series = run_time_series(forms, config, u0, num_steps, ts);
  if (!series.converged) {
    const auto& last = series.steps.back().report;
    throw std::runtime_error("reference solution did not converge at step " + std::to_string(series.steps.size()) +
                             " (" + to_string(last.failure_reason.value_or(FailureReason::MaxIterations)) + ")");
  }

  ReferenceSolution ref;
  ref.tau = tau;
  ref.L = L;
  for (auto& step : series.steps) {
    ref.iterations.push_back(step.report.iterations_used);
    ref.u.push_back(std::move(step.u));
    ref.q.push_back(std::move(step.q));
  }
  return ref;
}

namespace {

constexpr std::uint32_t kReferenceMagic = 0x44475246;  // "DGRF"

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
bool read_pod(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

bool read_vector(std::istream& is, Eigen::VectorXd& v, Eigen::Index n) {
  v.resize(n);
  return static_cast<bool>(is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double))));
}

}  // namespace

void save_reference(const std::filesystem::path& file, const ReferenceSolution& ref) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto tmp = std::filesystem::path(file).concat(".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write reference cache " + tmp.string());
    const auto steps = static_cast<std::uint32_t>(ref.u.size());
    write_pod(os, kReferenceMagic);
    write_pod(os, steps);
    write_pod(os, static_cast<std::int64_t>(steps ? ref.u[0].size() : 0));
    write_pod(os, static_cast<std::int64_t>(steps ? ref.q[0].size() : 0));
    write_pod(os, ref.tau);
    write_pod(os, ref.L);
    for (std::uint32_t k = 0; k < steps; ++k) {
      write_pod(os, static_cast<std::int32_t>(ref.iterations[k]));
      write_vector(os, ref.u[k].values);
      write_vector(os, ref.q[k].values);
    }
    if (!os) throw std::runtime_error("cannot write reference cache " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::optional<ReferenceSolution> load_reference(const std::filesystem::path& file, Eigen::Index num_cells,
                                                Eigen::Index num_edges) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  std::uint32_t magic = 0, steps = 0;
  std::int64_t nc = 0, ne = 0;
  ReferenceSolution ref;
  if (!read_pod(is, magic) || magic != kReferenceMagic || !read_pod(is, steps) || !read_pod(is, nc) ||
      !read_pod(is, ne) || nc != num_cells || ne != num_edges || !read_pod(is, ref.tau) || !read_pod(is, ref.L)) {
    return std::nullopt;
  }
  for (std::uint32_t k = 0; k < steps; ++k) {
    std::int32_t its = 0;
    Eigen::VectorXd u, q;
    if (!read_pod(is, its) || !read_vector(is, u, nc) || !read_vector(is, q, ne)) return std::nullopt;
    ref.iterations.push_back(its);
    ref.u.emplace_back(std::move(u));
    ref.q.emplace_back(std::move(q));
  }
  return ref;
}

Benchmark::Benchmark(int n, ManufacturedSolution problem, ReferenceOptions reference_options,
                     RegularizationKind regularization)
    : n_(n),
      problem_(problem),
      reference_options_(reference_options),
      regularization_(regularization),
      mesh_(Mesh::structured_unit_square(n)),
      forms_(assemble_forms(mesh_, problem.dirichlet_value)) {}

int Benchmark::num_steps(double tau) const {
  const double steps = problem_.final_time / tau;
  const auto rounded = static_cast<int>(std::lround(steps));
  if (rounded < 1 || std::abs(steps - rounded) > 1e-9 * steps) {
    throw std::invalid_argument("Benchmark: tau must divide the final time");
  }
  return rounded;
}

ScalarField Benchmark::initial_condition() const {
  return project_scalar(mesh_, [this](const Point& p) { return problem_.u(0.0, p); });
}

const ReferenceSolution& Benchmark::reference(double tau) {
  auto it = references_.find(tau);
  if (it != references_.end()) return it->second;

  std::optional<std::filesystem::path> file;
  if (reference_options_.cache_dir) {
    const double L = select_delta(reference_options_.tol_for_L, tau, TheoryConstants::unit_square(problem_.nonlinearity)).L;
    char name[128];
    std::snprintf(name, sizeof name, "reference_n%d_tau%g_L%g_tol%g.bin", n_, tau, L, reference_options_.increment_tol);
    file = *reference_options_.cache_dir / name;
    if (auto cached = load_reference(*file, forms_.num_cells(), forms_.num_edges());
        cached && static_cast<int>(cached->u.size()) == num_steps(tau)) {
      return references_.emplace(tau, std::move(*cached)).first->second;
    }
  }
  ReferenceSolution ref = compute_reference(mesh_, forms_, problem_, tau, num_steps(tau), reference_options_);
  if (file) save_reference(*file, ref);
  return references_.emplace(tau, std::move(ref)).first->second;
}

SchemeConfig Benchmark::make_config(SchemeKind kind, double tol, std::optional<double> eps, double tau,
                                    std::optional<double> L, double shift) const {
  StoppingCriterion stop{StoppingMode::AgainstReference, tol, std::nullopt, std::nullopt};
  const auto& b = problem_.nonlinearity;
  switch (kind) {
    case SchemeKind::HL: {
      if (eps) throw std::invalid_argument("the HL-scheme takes no regularization parameter");
      if (shift != 0.0) throw std::invalid_argument("the HL-scheme takes no shift");
      const double l = L.value_or(select_delta(tol, tau, TheoryConstants::unit_square(b)).L);
      return SchemeConfig::hl(b, l, tau, stop);
    }
    case SchemeKind::RegularizedL: {
      if (!eps) throw std::invalid_argument("the regularized L-scheme needs eps");
      const Regularization reg{regularization_, *eps, shift, b};
      const double default_L = shift == 0.0 ? select_L_regularized(*eps, b)
                                            : std::ceil(0.5 * (std::pow(*eps, b.alpha - 1.0) + shift));
      return SchemeConfig::regularized_l(reg, L.value_or(default_L), tau, stop);
    }
    case SchemeKind::Newton: {
      if (!eps) throw std::invalid_argument("the Newton scheme needs eps");
      const Regularization reg{regularization_, *eps, shift, b};
      return SchemeConfig::newton(reg, tau, stop);
    }
  }
  throw std::invalid_argument("unknown scheme");
}

TimeSeriesResult Benchmark::run(const SchemeConfig& config, bool record_flux_errors, std::optional<int> num_steps) {
  const ReferenceSolution& ref = reference(config.tau);
  const double tau = config.tau;
  TimeSeriesOptions ts;
  ts.source = [this, tau](int n) { return source_vector(mesh_, problem_, tau, n); };
  ts.reference = [&ref](int n) { return ref.u.at(n - 1); };
  if (record_flux_errors) ts.reference_flux = [&ref](int n) { return ref.q.at(n - 1); };
  const int available = static_cast<int>(ref.u.size());
  const int steps = num_steps.value_or(available);
  if (steps < 1 || steps > available) throw std::invalid_argument("Benchmark::run: step count out of range");
  return run_time_series(forms_, config, initial_condition(), steps, ts);
}

ExperimentResult Benchmark::run_experiment(SchemeKind kind, double tol, std::optional<double> eps, double tau,
                                           std::optional<double> L) {
  const SchemeConfig config = make_config(kind, tol, eps, tau, L);
  const TimeSeriesResult series = run(config);
  ExperimentResult row;
  row.scheme = kind;
  row.tol = tol;
  row.eps = eps;
  row.tau = tau;
  row.L = kind == SchemeKind::Newton ? 0.0 : config.L;
  row.total_iterations = series.total_iterations;
  row.num_steps = num_steps(tau);
  row.converged = series.converged;
  if (!series.converged) row.failure_reason = series.steps.back().report.failure_reason;
  return row;
}

std::vector<ExperimentResult> Benchmark::run_table(SchemeKind kind, const TableGrid& grid) {
  std::vector<ExperimentResult> rows;
  const std::vector<std::optional<double>> eps_axis = [&] {
    std::vector<std::optional<double>> axis;
    if (kind == SchemeKind::HL) {
      axis.emplace_back(std::nullopt);
    } else {
      for (double e : grid.eps) axis.emplace_back(e);
    }
    return axis;
  }();
  for (double tol : grid.tols) {
    for (const auto& eps : eps_axis) {
      for (double tau : grid.taus) rows.push_back(run_experiment(kind, tol, eps, tau));
    }
  }
  return rows;
}

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string table_title(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Newton:
      return "Newton scheme (regularized)";
    case SchemeKind::RegularizedL:
      return "standard L-scheme (regularized)";
    case SchemeKind::HL:
      return "HL-scheme (no regularization)";
  }
  return "";
}

}  // namespace

void write_csv_row(std::ostream& os, const ExperimentResult& row) {
  os << to_string(row.scheme) << ',' << format("%g", row.tol) << ',' << (row.eps ? format("%g", *row.eps) : "")
     << ',' << format("%g", row.tau) << ',' << (row.L > 0.0 ? format("%g", row.L) : "") << ',';
  if (row.converged) {
    os << row.total_iterations << ',' << format("%.2f", row.per_step()) << ",true\n";
  } else {
    os << ",,false\n";
  }
}

void write_csv(std::ostream& os, const std::vector<ExperimentResult>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) write_csv_row(os, row);
}

void write_summary(std::ostream& os, SchemeKind kind, const std::vector<ExperimentResult>& rows) {
  os << "Results for the " << table_title(kind) << '\n';
  const bool has_eps = kind != SchemeKind::HL;
  os << "TOL    " << (has_eps ? "eps    " : "") << "tau                     | iterations          | per time step\n";
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    std::string taus, totals, per;
    while (j < rows.size() && rows[j].tol == rows[i].tol && rows[j].eps == rows[i].eps) {
      const auto& r = rows[j];
      const char* sep = j == i ? "" : ",";
      taus += sep + format("%g", r.tau);
      totals += sep + (r.converged ? std::to_string(r.total_iterations) : std::string("nc"));
      per += sep + (r.converged ? format("%.1f", r.per_step()) : std::string("nc"));
      ++j;
    }
    os << format("%-6g ", rows[i].tol);
    if (has_eps) os << format("%-6g ", rows[i].eps.value_or(0.0));
    os << '{' << taus << "} | {" << totals << "} | {" << per << "}\n";
    i = j;
  }
}

}  // namespace degen
