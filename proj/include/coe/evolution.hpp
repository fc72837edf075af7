#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coe/field.hpp"
#include "coe/nonlinearity.hpp"
#include "coe/spectral.hpp"

namespace coe {

/// Time-dependent forcing f(t, .); empty means f = 0.
using Forcing = std::function<Field(double t)>;

struct Trajectory
{
  std::vector<double> times;
  std::vector<Field> states;

  const Field& final_state() const { return states.back(); }
};

/// Exact per-frequency propagator of du/dt + M(xi) u = f over one step, with
/// f frozen over the step: u <- e^{-dt M} u + (int_0^dt e^{-s M} ds) f.
class LinearPropagator
{
public:
  LinearPropagator(const DiscretizedProblem& problem, double dt);

  double dt() const { return dt_; }
  /// Advances a spectrum (n x dim, FFT bin order) in place.
  void advance(CMatrix& spectrum, const CMatrix* forcing_spectrum = nullptr) const;

private:
  const DiscretizedProblem* problem_;
  double dt_;
  std::vector<CMatrix> expo_;  ///< dense kind: e^{-dt M_j}
  std::vector<CMatrix> phi_;   ///< dense kind: forcing integral
  std::vector<CVector> mode_expo_; ///< structured kinds, per mode
  std::vector<CVector> mode_phi_;
};

/// Number of steps and the uniform step actually used to reach T.
std::pair<std::size_t, double> step_plan(double T, double dt);

/// First-order exponential integrator for du/dt + L u = f(t), f sampled at the
/// left endpoint. Snapshots every `snapshot_every` steps (0: only the initial
/// and final state).
Trajectory solve_cauchy_linear(const DiscretizedProblem& problem, const Field& u0, const Forcing& f, double T,
                               double dt, std::size_t snapshot_every = 0);

struct ContinuationTolerances
{
  double blowup_threshold = 1e8;
  /// Step-doubling estimate of the nonlinear substep relative to 1 + ||u||_inf.
  double step_tolerance = 1e-3;
};

struct MaximalSolutionReport
{
  bool completed = false;
  double t_max = 0.0;
  std::string halt_reason;
  double final_sup_norm = 0.0;
  double final_lp_norm = 0.0;
  /// Running maximum of ||u(t_n)||_inf, one entry per accepted state.
  std::vector<double> sup_norm_indicator;
  /// Cumulative int_0^{t_n} ||F(u)||_p^p dt, one entry per accepted state.
  std::vector<double> forcing_indicator;

  nlohmann::ordered_json to_json() const;
};

struct SemilinearResult
{
  MaximalSolutionReport report;
  Trajectory trajectory;
};

/// Lie splitting: exact linear step, then u <- u + dt F(u). Halts when the
/// state stops being finite, exceeds the blow-up threshold, or the
/// step-doubling estimate exceeds the tolerance.
SemilinearResult solve_cauchy_semilinear(const DiscretizedProblem& problem, const Field& u0, const Nonlinearity& F,
                                         double T, double dt, const ContinuationTolerances& tolerances = {},
                                         std::size_t snapshot_every = 0);

} // namespace coe
