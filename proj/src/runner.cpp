#include "coe/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "coe/elliptic.hpp"
#include "coe/errors.hpp"
#include "coe/evolution.hpp"
#include "coe/norms.hpp"
#include "coe/rbound.hpp"
#include "coe/spectral.hpp"

namespace coe {

int exit_code_for(const std::exception& err)
{
  if (dynamic_cast<const ConfigError*>(&err) != nullptr) {
    return kExitConfigError;
  }
  if (dynamic_cast<const ConditionFailed*>(&err) != nullptr ||
      dynamic_cast<const ConditionNotChecked*>(&err) != nullptr) {
    return kExitConditionFailed;
  }
  return kExitNumericalFailure;
}

namespace {

Json complex_json(Complex z)
{
  return Json::array({z.real(), z.imag()});
}

Json condition_json(const ConditionReport& r)
{
  Json j;
  j["c_mu"] = r.c_mu;
  j["c_n"] = r.c_n;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["phi1"] = r.phi1;
  j["phi2"] = r.phi2;
  j["pass"] = Json::array({r.pass[0], r.pass[1], r.pass[2], r.pass[3]});
  j["all_pass"] = r.all_pass();
  j["m_inverse"] = r.m_inverse();
  return j;
}

class OutputSink
{
public:
  OutputSink(std::filesystem::path dir, RunOutcome& outcome) : dir_(std::move(dir)), outcome_(outcome)
  {
    std::filesystem::create_directories(dir_);
  }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer)
  {
    std::ostringstream buffer;
    writer(buffer);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) {
      throw Error("cannot write output file " + (dir_ / name).string());
    }
    out << buffer.str();
    outcome_.outputs.push_back(name);
  }

  void write_json(const std::string& name, const Json& j)
  {
    write(name, [&j](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

private:
  std::filesystem::path dir_;
  RunOutcome& outcome_;
};

std::vector<Complex> distinct_eigenvalues(const OperatorRealization& A)
{
  CVector ev = A.eigenvalues();
  std::vector<Complex> all(ev.data(), ev.data() + ev.size());
  std::sort(all.begin(), all.end(), [](Complex a, Complex b) {
    return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && std::arg(a) < std::arg(b));
  });
  std::vector<Complex> unique;
  for (const Complex z : all) {
    if (unique.empty() || std::abs(z - unique.back()) > 1e-12 * std::max(1.0, std::abs(z))) {
      unique.push_back(z);
    }
  }
  constexpr std::size_t kMaxSamples = 16;
  if (unique.size() <= kMaxSamples) {
    return unique;
  }
  std::vector<Complex> picked;
  for (std::size_t i = 0; i < kMaxSamples; ++i) {
    picked.push_back(unique[i * (unique.size() - 1) / (kMaxSamples - 1)]);
  }
  return picked;
}

void run_check_condition(const ScenarioConfig&, DiscretizedProblem& problem, OutputSink& sink, RunOutcome& outcome)
{
  const ConditionReport& report = *problem.condition();
  Json j = condition_json(report);
  const PositivityReport pos = positivity_scan(problem.op(), Sector(report.phi2), sector_samples(Sector(report.phi2)));
  j["operator_m_bound"] = pos.m_bound;
  sink.write_json("condition.json", j);
  if (!report.all_pass()) {
    outcome.exit_code = kExitConditionFailed;
    outcome.message = "structural condition fails";
  }
}

void run_solve_linear(const ScenarioConfig& cfg, DiscretizedProblem& problem, OutputSink& sink)
{
  const Field f = make_field(*cfg.forcing, problem.grid(), problem.op(), cfg.seed);
  const Complex lambda = cfg.lambdas.front();
  const Field u = solve_linear(problem, lambda, f);
  sink.write("solution.csv", [&u](std::ostream& os) { write_field_csv(os, u); });
  Json j;
  j["lambda"] = complex_json(lambda);
  j["residual"] = relative_residual(problem, lambda, u, f);
  j["lp_norm_u"] = lp_norm(u, problem.p());
  j["lp_norm_f"] = lp_norm(f, problem.p());
  j["sup_norm_u"] = sup_norm(u);
  sink.write_json("summary.json", j);
}

void run_lambda_sweep(const ScenarioConfig& cfg, DiscretizedProblem& problem, OutputSink& sink)
{
  const Field f = make_field(*cfg.forcing, problem.grid(), problem.op(), cfg.seed);
  const SweepTable table = lambda_sweep(problem, f, cfg.lambdas);
  sink.write("sweep.csv", [&table](std::ostream& os) { write_sweep_csv(os, table); });
  const auto [lo, hi] = table.ratio_range();
  Json j;
  j["rows"] = table.rows.size();
  j["ratio_min"] = lo;
  j["ratio_max"] = hi;
  j["ratio_spread"] = hi / lo;
  j["max_resolvent_value"] = table.max_resolvent_value();
  sink.write_json("summary.json", j);
}

void run_mikhlin(const ScenarioConfig& cfg, DiscretizedProblem& problem, OutputSink& sink)
{
  problem.require_admissible();
  const MikhlinSpec& spec = cfg.mikhlin;
  const Sector sector(problem.condition()->phi2);
  const std::vector<double> xi = log_xi_grid(cfg.condition.xi_min, cfg.condition.xi_max, spec.xi_points_per_side);
  const std::vector<Complex> base = sector_samples(sector, spec.lambda_min, spec.lambda_max, spec.per_ray);
  const double decades = std::log10(spec.lambda_max / spec.lambda_min);
  const auto extra_count = static_cast<std::size_t>(std::max(2.0, std::ceil(static_cast<double>(spec.per_ray) / decades)));
  std::vector<Complex> extended = base;
  for (const Complex z : sector_samples(sector, spec.lambda_max, 10.0 * spec.lambda_max, extra_count)) {
    extended.push_back(z);
  }
  const std::vector<Complex> eigen = distinct_eigenvalues(problem.op());
  const SymbolSet& sym = problem.symbols();

  Json families = Json::array();
  for (const MultiplierIndex idx : spec.families) {
    double bound = 0.0;
    double bound_ext = 0.0;
    for (const Complex a : eigen) {
      const ParameterizedSymbol symbol = [&sym, idx, a](Complex h, double x) { return scalar_symbol(sym, idx, a, x, h); };
      bound = std::max(bound, mikhlin_bound(symbol, base, xi));
      bound_ext = std::max(bound_ext, mikhlin_bound(symbol, extended, xi));
    }
    Json f;
    f["family"] = to_string(idx);
    f["bound"] = bound;
    f["bound_extended"] = bound_ext;
    f["relative_change"] = (bound_ext - bound) / bound;
    families.push_back(f);
  }
  Json j;
  j["lambda_samples"] = base.size();
  j["lambda_samples_extended"] = extended.size();
  j["eigenvalue_samples"] = eigen.size();
  j["xi_points"] = xi.size();
  j["families"] = families;
  sink.write_json("mikhlin.json", j);
}

void run_rbound(const ScenarioConfig& cfg, DiscretizedProblem& problem, OutputSink& sink)
{
  const RBoundSpec& spec = cfg.rbound;
  const Sector sector(problem.condition() ? problem.condition()->phi2 : cfg.phi2);
  const std::vector<double> xi = log_xi_grid(1e-2, 1e2, spec.xi_count);
  const std::vector<Complex> lambdas = sector_samples(sector, spec.lambda_min, spec.lambda_max, spec.lambda_per_ray);
  const RBoundEstimate est = rpositivity_of_L(problem, xi, lambdas, problem.p(), spec.trials, cfg.seed);
  Json j = est.to_json();
  j["family_size"] = xi.size() * lambdas.size();
  j["p"] = problem.p();
  sink.write_json("rbound.json", j);
}

void run_parabolic(const ScenarioConfig& cfg, DiscretizedProblem& problem, OutputSink& sink)
{
  const ParabolicSpec& spec = cfg.parabolic;
  const Field u0 = make_field(spec.initial, problem.grid(), problem.op(), cfg.seed);
  Json j;
  Trajectory traj;
  if (spec.nonlinearity.kind() == NonlinearityKind::None) {
    Forcing forcing;
    if (spec.forcing) {
      const Field f = make_field(*spec.forcing, problem.grid(), problem.op(), cfg.seed + 1);
      forcing = [f](double) { return f; };
    }
    traj = solve_cauchy_linear(problem, u0, forcing, spec.T, spec.dt, spec.snapshot_every);
    j["completed"] = true;
    j["t_max"] = spec.T;
    j["halt_reason"] = "completed";
    j["final_norms"] = {{"sup", sup_norm(traj.final_state())}, {"lp", lp_norm(traj.final_state(), problem.p())}};
  } else {
    if (spec.forcing) {
      throw ConfigError("$.parabolic.forcing: a forcing cannot be combined with a nonlinearity");
    }
    SemilinearResult result =
      solve_cauchy_semilinear(problem, u0, spec.nonlinearity, spec.T, spec.dt, spec.tolerances, spec.snapshot_every);
    j = result.report.to_json();
    traj = std::move(result.trajectory);
  }
  j["initial_norms"] = {{"sup", sup_norm(u0)}, {"lp", lp_norm(u0, problem.p())}};
  const double s = initial_data_exponent(problem.symbols().order, problem.p());
  if (s > 0.0 && lp_norm(u0, problem.p()) > 0.0) {
    j["initial_data"] = {{"besov_exponent", s}, {"besov_norm", besov_norm(u0, s, problem.p(), problem.p())}};
  }
  sink.write("trajectory.csv", [&traj](std::ostream& os) { write_snapshots_csv(os, traj.times, traj.states); });
  sink.write_json("report.json", j);
}

void run_elliptic(const ScenarioConfig& cfg, DiscretizedProblem& problem, OutputSink& sink)
{
  const EllipticSpec& spec = cfg.elliptic;
  const TGrid tgrid(spec.T, spec.m);
  BoundaryConditions bc;
  bc.alpha1 = spec.alpha1;
  bc.beta1 = spec.beta1;
  bc.alpha2 = spec.alpha2;
  bc.beta2 = spec.beta2;
  bc.f1 = make_field(spec.f1, problem.grid(), problem.op(), cfg.seed);
  bc.f2 = make_field(spec.f2, problem.grid(), problem.op(), cfg.seed + 1);
  SpaceTimeForcing forcing;
  if (spec.forcing) {
    const Field f = make_field(*spec.forcing, problem.grid(), problem.op(), cfg.seed + 2);
    forcing = [f](double) { return f; };
  }
  const SpaceTimeField fs = sample_forcing(problem, tgrid, forcing);
  BvpOptions options;
  options.require_nondegenerate = spec.require_nondegenerate;
  const SemilinearBvpResult result =
    solve_bvp_semilinear(problem, bc, tgrid, fs, spec.nonlinearity, spec.max_iter, spec.tol, options);

  Json j = result.report.to_json();
  j["determinant"] = complex_json(check_nondegenerate(bc));
  if (spec.nonlinearity.kind() == NonlinearityKind::None) {
    j["discrete_residual"] = bvp_residual(problem, bc, tgrid, fs, result.solution);
  }
  j["solution_mixed_norm"] = mixed_norm(result.solution, problem.p(), problem.p());
  const int l = problem.symbols().order;
  if (l >= 1) {
    const TraceExponents e = trace_exponents(l, problem.p());
    const TraceNorms tn = trace_space_norms(bc.f1, bc.f2, l, problem.p(), problem.p(), problem.op());
    j["boundary_data"] = {{"s0", e.s0}, {"s1", e.s1}, {"x0_norm_f1", tn.x0}, {"x1_norm_f2", tn.x1}};
  }
  sink.write("solution.csv", [&result](std::ostream& os) { write_spacetime_csv(os, result.solution); });
  sink.write_json("picard.json", j);
}

void run_norms(const ScenarioConfig& cfg, DiscretizedProblem& problem, OutputSink& sink)
{
  const NormsReportSpec& spec = cfg.norms;
  const Field u = make_field(spec.field, problem.grid(), problem.op(), cfg.seed);
  const double p = problem.p();
  const int l = problem.symbols().order;
  Json j;
  j["p"] = p;
  j["q"] = spec.q;
  j["lp"] = lp_norm(u, p);
  j["sup"] = sup_norm(u);
  j["sobolev"] = sobolev_norm(u, l, p, problem.op());
  j["besov"] = {{"s", spec.smoothness}, {"value", besov_norm(u, spec.smoothness, spec.q, p)}};
  j["initial_data_exponent"] = initial_data_exponent(l, p);
  if (l >= 1) {
    const TraceExponents e = trace_exponents(l, p);
    const TraceNorms tn = trace_space_norms(u, u, l, p, spec.q, problem.op());
    j["trace"] = {{"s0", e.s0}, {"theta0", e.theta0}, {"s1", e.s1}, {"theta1", e.theta1},
                  {"x0", tn.x0},    {"x1", tn.x1}};
  }
  sink.write_json("norms.json", j);
}

} // namespace

namespace {

Json grid_pi(double multiple, std::size_t n)
{
  return Json{{"half_width", multiple * kPi}, {"n", n}};
}

Json example43_problem(std::size_t n)
{
  Json problem = Json::parse(R"({
    "symbols": {"order": 2, "b": [0, 0, -1], "nu": 1,
                "a_kernels": [null, null, {"kind": "exponential-paper", "rate": 1}]},
    "operator": {"kind": "dense-matrix", "matrix": [[1, 0], [0, 2]]}
  })");
  problem["grid"] = grid_pi(16.0, n);
  return problem;
}

Json order4_symbols()
{
  return Json::parse(R"({"order": 4, "b": [0, 0, 0, 0, 1], "nu": 1,
    "a_kernels": [null, null, null, null, {"kind": "exponential-paper", "rate": 1}]})");
}

Json cubic_damping()
{
  return Json::parse(R"({"kind": "pointwise-polynomial", "terms": [{"coeff": -1, "powers": [3]}]})");
}

Json scalar_problem(double multiple, std::size_t n)
{
  Json problem = Json::parse(R"({
    "symbols": {"order": 2, "b": [0, 0, -1], "nu": 1},
    "operator": {"kind": "dense-matrix", "value": 1}
  })");
  problem["grid"] = grid_pi(multiple, n);
  return problem;
}

Preset make_preset(std::string name, std::string description, const std::string& scenario, Json problem,
                   Json extra)
{
  Json config;
  config["scenario"] = scenario;
  config["description"] = description;
  config["seed"] = 0;
  config["problem"] = std::move(problem);
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    config[it.key()] = it.value();
  }
  return Preset{std::move(name), std::move(description), std::move(config)};
}

std::vector<Preset> build_presets()
{
  std::vector<Preset> out;
  const Json gaussian2 = Json::parse(R"({"kind": "gaussian", "width": 2})");

  out.push_back(make_preset("example-4.3", "second-order system with an exponential kernel, linear Cauchy problem",
                            "solve-parabolic", example43_problem(256),
                            Json{{"parabolic", {{"T", 1.0}, {"dt", 0.01}, {"initial", gaussian2}, {"snapshot_every", 25}}}}));
  out.push_back(make_preset("example-4.3-condition", "structural condition for the exponential-kernel system",
                            "check-condition", example43_problem(256), Json::object()));
  out.push_back(make_preset("example-4.3-sweep", "lambda sweep of the coercive estimate for the exponential-kernel system",
                            "lambda-sweep", example43_problem(256),
                            Json{{"forcing", gaussian2}, {"lambdas", {1, 10, 100, 1000, 10000}}}));
  out.push_back(make_preset("example-4.3-mikhlin", "Mikhlin bounds of the five multiplier families",
                            "mikhlin", example43_problem(256), Json::object()));
  out.push_back(make_preset("example-4.3-rbound", "empirical R-bound of the inverse symbol family",
                            "rbound", example43_problem(256), Json::object()));

  Json sl = Json::parse(R"({
    "symbols": {"order": 2, "b": [0, 0, -1], "nu": 0, "mu_kernel": {"kind": "dirac-scaled", "amplitude": 1}},
    "operator": {"kind": "periodic-sturm-liouville", "n": 64, "shift": 1}
  })");
  sl["grid"] = grid_pi(16.0, 256);
  out.push_back(make_preset("problem-3.7", "mixed-norm boundary value problem with a periodic Sturm-Liouville operator",
                            "solve-elliptic", sl,
                            Json{{"elliptic",
                                  {{"T", 1.0}, {"m", 63}, {"alpha1", 1}, {"beta1", 0}, {"alpha2", 0}, {"beta2", 1},
                                   {"f1", gaussian2}}}}));

  Json ex44;
  ex44["symbols"] = order4_symbols();
  ex44["operator"] = Json{{"kind", "dirichlet-laplacian-2d"}, {"ny", 16}, {"nz", 16}, {"shift", 1}};
  ex44["grid"] = grid_pi(8.0, 128);
  Json ex44_init = Json::parse(R"({"kind": "gaussian", "amplitude": 0.5, "width": 2, "e_profile": "first-mode"})");
  out.push_back(make_preset("example-4.4", "fourth-order equation with a cubic damping on a 2D Dirichlet Laplacian",
                            "solve-parabolic", ex44,
                            Json{{"parabolic",
                                  {{"T", 0.5}, {"dt", 0.01}, {"initial", ex44_init}, {"nonlinearity", cubic_damping()},
                                   {"snapshot_every", 10}}}}));

  Json p46;
  p46["symbols"] = order4_symbols();
  p46["operator"] = Json{{"kind", "dense-matrix"}, {"matrix", {{1, 0}, {0, 2}}}};
  p46["grid"] = grid_pi(8.0, 128);
  out.push_back(make_preset(
    "problem-4.6", "fourth-order elliptic boundary value problem with a cubic damping", "solve-elliptic", p46,
    Json{{"elliptic",
          {{"T", 0.5}, {"m", 63}, {"alpha1", 1}, {"beta1", 0}, {"alpha2", 0}, {"beta2", 1},
           {"f1", Json::parse(R"({"kind": "gaussian", "amplitude": 0.5, "width": 2})")},
           {"nonlinearity", cubic_damping()}, {"max_iter", 30}, {"tol", 1e-8}}}}));

  const Json cosine = Json::parse(R"({"kind": "cosine", "frequency": 1})");
  out.push_back(make_preset("scalar-solve-linear", "scalar heat-type resolvent with a cosine forcing", "solve-linear",
                            scalar_problem(16.0, 512), Json{{"forcing", cosine}, {"lambda", 1}}));
  out.push_back(make_preset("scalar-lambda-sweep", "scalar coercive estimate across lambda", "lambda-sweep",
                            scalar_problem(16.0, 512), Json{{"forcing", cosine}, {"lambdas", {1, 10, 100, 1000}}}));
  out.push_back(make_preset("scalar-bvp-dirichlet", "scalar boundary value problem with Dirichlet data at both ends",
                            "solve-elliptic", scalar_problem(16.0, 64),
                            Json{{"elliptic",
                                  {{"T", 1.0}, {"m", 127}, {"alpha1", 1}, {"beta1", 0}, {"alpha2", 1}, {"beta2", 0},
                                   {"f1", cosine}, {"require_nondegenerate", false}}}}));

  Json blow = Json::parse(R"({
    "symbols": {"order": 2, "b": [0, 0, -1], "nu": 1},
    "operator": {"kind": "dense-matrix", "matrix": [[1e-6]]}
  })");
  blow["grid"] = grid_pi(1.0, 16);
  out.push_back(make_preset(
    "blowup-zero-mode", "quadratic growth of the spatially constant mode", "solve-parabolic", blow,
    Json{{"parabolic",
          {{"T", 1.5}, {"dt", 1e-4}, {"initial", Json::parse(R"({"kind": "cosine", "frequency": 0})")},
           {"nonlinearity", Json::parse(R"({"kind": "pointwise-polynomial", "terms": [{"coeff": 1, "powers": [2]}]})")},
           {"snapshot_every", 1000}}}}));

  Json norms = scalar_problem(0.0, 512);
  norms["grid"] = Json{{"half_width", 16.0}, {"n", 512}};
  out.push_back(make_preset("gaussian-norms", "norm report of a Gaussian profile", "norms-report", norms,
                            Json{{"norms", {{"field", Json::parse(R"({"kind": "gaussian", "width": 1})")},
                                            {"q", 2}, {"s", 1}}}}));
  return out;
}

} // namespace

const std::vector<Preset>& builtin_scenarios()
{
  static const std::vector<Preset> presets = build_presets();
  return presets;
}

const Preset& find_preset(std::string_view name)
{
  for (const Preset& preset : builtin_scenarios()) {
    if (preset.name == name) {
      return preset;
    }
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

RunOutcome run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir)
{
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  RunOutcome outcome;
  OutputSink sink(out_dir, outcome);
  double condition_seconds = 0.0;
  try {
    DiscretizedProblem problem(config.grid, config.symbols, *config.op, config.p);
    const auto c0 = Clock::now();
    problem.check_condition(config.phi2, log_xi_grid(config.condition.xi_min, config.condition.xi_max,
                                                     config.condition.points_per_side));
    condition_seconds = std::chrono::duration<double>(Clock::now() - c0).count();
    switch (config.scenario) {
      case Scenario::CheckCondition:
        run_check_condition(config, problem, sink, outcome);
        break;
      case Scenario::SolveLinear:
        run_solve_linear(config, problem, sink);
        break;
      case Scenario::LambdaSweep:
        run_lambda_sweep(config, problem, sink);
        break;
      case Scenario::Mikhlin:
        run_mikhlin(config, problem, sink);
        break;
      case Scenario::RBound:
        run_rbound(config, problem, sink);
        break;
      case Scenario::SolveParabolic:
        run_parabolic(config, problem, sink);
        break;
      case Scenario::SolveElliptic:
        run_elliptic(config, problem, sink);
        break;
      case Scenario::NormsReport:
        run_norms(config, problem, sink);
        break;
    }
  } catch (const std::exception& err) {
    outcome.exit_code = exit_code_for(err);
    outcome.message = to_string(config.scenario) + ": " + err.what();
  }

  Json manifest;
  manifest["tool"] = "coesolve";
  manifest["version"] = kVersion;
  manifest["scenario"] = to_string(config.scenario);
  manifest["seed"] = config.seed;
  manifest["config_hash"] = config_hash(Json{{"config", config.source}, {"seed", config.seed}});
  manifest["exit_code"] = outcome.exit_code;
  manifest["status"] = outcome.exit_code == kExitOk ? "ok" : "error";
  if (!outcome.message.empty()) {
    manifest["message"] = outcome.message;
  }
  manifest["outputs"] = outcome.outputs;
  manifest["timings"] = {
    {"condition_check_seconds", condition_seconds},
    {"total_seconds", std::chrono::duration<double>(Clock::now() - start).count()},
  };
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  return outcome;
}

} // namespace coe
