#include "coe/evolution.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "coe/errors.hpp"
#include "coe/norms.hpp"

namespace coe {

namespace {

/// (e^z - 1) / z.
Complex phi1(Complex z)
{
  if (std::abs(z) < 1e-3) {
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  }
  return (std::exp(z) - 1.0) / z;
}

void check_initial(const DiscretizedProblem& problem, const Field& u0)
{
  if (!(u0.grid == problem.grid()) || u0.dim() != problem.dim()) {
    throw InvalidArgument("initial state does not match the problem grid or dimension");
  }
  if (!u0.values.allFinite()) {
    throw InvalidArgument("initial state must be finite");
  }
}

} // namespace

LinearPropagator::LinearPropagator(const DiscretizedProblem& problem, double dt) : problem_(&problem), dt_(dt)
{
  problem.require_admissible();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("time step must be positive and finite");
  }
  const Grid& grid = problem.grid();
  const SymbolSet& sym = problem.symbols();
  const OperatorRealization& A = problem.op();
  const auto d = static_cast<Eigen::Index>(A.dim());

  if (A.has_mode_basis()) {
    const RVector& ev = A.mode_eigenvalues();
    mode_expo_.resize(grid.n);
    mode_phi_.resize(grid.n);
    for (std::size_t bin = 0; bin < grid.n; ++bin) {
      const double xi = grid.xi(bin);
      const Complex m = mu_plus_nu(sym, xi);
      const Complex e = eta(sym, xi);
      CVector ex(d);
      CVector ph(d);
      for (Eigen::Index k = 0; k < d; ++k) {
        const Complex z = -dt * m * (ev[k] + e);
        ex[k] = std::exp(z);
        ph[k] = dt * phi1(z);
      }
      mode_expo_[bin] = std::move(ex);
      mode_phi_[bin] = std::move(ph);
    }
    return;
  }

  expo_.resize(grid.n);
  phi_.resize(grid.n);
  for (std::size_t bin = 0; bin < grid.n; ++bin) {
    const CMatrix M = problem.symbol_matrix(grid.xi(bin));
    CMatrix aug = CMatrix::Zero(2 * d, 2 * d);
    aug.topLeftCorner(d, d) = -dt * M;
    aug.topRightCorner(d, d) = dt * CMatrix::Identity(d, d);
    const CMatrix ex = aug.exp();
    expo_[bin] = ex.topLeftCorner(d, d);
    phi_[bin] = ex.topRightCorner(d, d);
  }
}

void LinearPropagator::advance(CMatrix& spectrum, const CMatrix* forcing_spectrum) const
{
  const OperatorRealization& A = problem_->op();
  const std::size_t n = problem_->grid().n;
  for (std::size_t bin = 0; bin < n; ++bin) {
    const auto row = static_cast<Eigen::Index>(bin);
    const CVector u = spectrum.row(row).transpose();
    const bool forced = forcing_spectrum != nullptr && !forcing_spectrum->row(row).isZero(0.0);
    if (A.has_mode_basis()) {
      if (u.isZero(0.0) && !forced) {
        continue;
      }
      CVector modes = mode_expo_[bin].cwiseProduct(A.to_modes(u));
      if (forced) {
        modes += mode_phi_[bin].cwiseProduct(A.to_modes(forcing_spectrum->row(row).transpose()));
      }
      spectrum.row(row) = A.from_modes(modes).transpose();
    } else {
      CVector next = expo_[bin] * u;
      if (forced) {
        next += phi_[bin] * forcing_spectrum->row(row).transpose();
      }
      spectrum.row(row) = next.transpose();
    }
  }
}

std::pair<std::size_t, double> step_plan(double T, double dt)
{
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("final time must be finite and non-negative");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("time step must be positive and finite");
  }
  if (T == 0.0) {
    return {0, dt};
  }
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  return {std::max<std::size_t>(steps, 1), T / static_cast<double>(std::max<std::size_t>(steps, 1))};
}

Trajectory solve_cauchy_linear(const DiscretizedProblem& problem, const Field& u0, const Forcing& f, double T,
                               double dt, std::size_t snapshot_every)
{
  check_initial(problem, u0);
  const auto [steps, h] = step_plan(T, dt);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  if (steps == 0) {
    return traj;
  }
  const LinearPropagator prop(problem, h);
  const Grid& grid = problem.grid();
  CMatrix spec = to_spectrum(u0);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = h * static_cast<double>(s);
    if (f) {
      const Field fs = f(t);
      if (!(fs.grid == grid) || fs.dim() != problem.dim()) {
        throw InvalidArgument("forcing does not match the problem grid or dimension");
      }
      const CMatrix fspec = to_spectrum(fs);
      prop.advance(spec, &fspec);
    } else {
      prop.advance(spec);
    }
    if (!spec.allFinite()) {
      throw BlowUp("linear evolution produced a non-finite state at t = " + std::to_string(t + h));
    }
    const bool last = s + 1 == steps;
    if (last || (snapshot_every > 0 && (s + 1) % snapshot_every == 0)) {
      traj.times.push_back(last ? T : h * static_cast<double>(s + 1));
      traj.states.push_back(from_spectrum(grid, spec));
    }
  }
  return traj;
}

nlohmann::ordered_json MaximalSolutionReport::to_json() const
{
  nlohmann::ordered_json j;
  j["completed"] = completed;
  j["t_max"] = t_max;
  j["halt_reason"] = halt_reason;
  j["final_norms"] = {{"sup", final_sup_norm}, {"lp", final_lp_norm}};
  j["blowup_indicator"] = {
    {"max_sup_norm", sup_norm_indicator.empty() ? 0.0 : sup_norm_indicator.back()},
    {"forcing_integral", forcing_indicator.empty() ? 0.0 : forcing_indicator.back()},
  };
  return j;
}

SemilinearResult solve_cauchy_semilinear(const DiscretizedProblem& problem, const Field& u0, const Nonlinearity& F,
                                         double T, double dt, const ContinuationTolerances& tolerances,
                                         std::size_t snapshot_every)
{
  check_initial(problem, u0);
  const int l = problem.symbols().order;
  if (F.kind() != NonlinearityKind::None && F.arity() > l - 1) {
    throw InvalidArgument("nonlinearity uses derivatives of order " + std::to_string(F.arity()) +
                          " but at most " + std::to_string(l - 1) + " are allowed");
  }
  if (F.uses_t_derivative()) {
    throw InvalidArgument("parabolic nonlinearities cannot depend on the time derivative");
  }
  const auto [steps, h] = step_plan(T, dt);
  const double p = problem.p();
  const Grid& grid = problem.grid();

  SemilinearResult out;
  MaximalSolutionReport& rep = out.report;
  out.trajectory.times.push_back(0.0);
  out.trajectory.states.push_back(u0);
  rep.sup_norm_indicator.push_back(sup_norm(u0));
  rep.forcing_indicator.push_back(0.0);

  Field u = u0;
  double t = 0.0;
  auto finish = [&](bool completed, const std::string& reason) {
    rep.completed = completed;
    rep.t_max = completed ? T : t;
    rep.halt_reason = reason;
    rep.final_sup_norm = sup_norm(u);
    rep.final_lp_norm = lp_norm(u, p);
    if (out.trajectory.times.back() != t) {
      out.trajectory.times.push_back(completed ? T : t);
      out.trajectory.states.push_back(u);
    }
    return out;
  };
  if (steps == 0) {
    return finish(true, "completed");
  }

  const LinearPropagator prop(problem, h);
  const bool nonlinear = F.kind() != NonlinearityKind::None;
  for (std::size_t s = 0; s < steps; ++s) {
    CMatrix spec = to_spectrum(u);
    prop.advance(spec);
    Field next = from_spectrum(grid, spec);
    double forcing_increment = 0.0;
    if (nonlinear) {
      const Field f_star = F.evaluate(next);
      Field full = next + Complex(h) * f_star;
      Field half = next + Complex(0.5 * h) * f_star;
      Field two = half + Complex(0.5 * h) * F.evaluate(half);
      const double estimate = sup_norm(full - two) / (1.0 + sup_norm(next));
      forcing_increment = h * std::pow(lp_norm(f_star, p), p);
      if (!full.values.allFinite() || !std::isfinite(estimate)) {
        return finish(false, "non-finite");
      }
      if (estimate > tolerances.step_tolerance) {
        return finish(false, "step-tolerance");
      }
      next = std::move(full);
    }
    if (!next.values.allFinite()) {
      return finish(false, "non-finite");
    }
    const double sup = sup_norm(next);
    if (sup > tolerances.blowup_threshold) {
      return finish(false, "blowup-threshold");
    }
    u = std::move(next);
    t = s + 1 == steps ? T : h * static_cast<double>(s + 1);
    rep.sup_norm_indicator.push_back(std::max(rep.sup_norm_indicator.back(), sup));
    rep.forcing_indicator.push_back(rep.forcing_indicator.back() + forcing_increment);
    if (s + 1 < steps && snapshot_every > 0 && (s + 1) % snapshot_every == 0) {
      out.trajectory.times.push_back(t);
      out.trajectory.states.push_back(u);
    }
  }
  return finish(true, "completed");
}

} // namespace coe
