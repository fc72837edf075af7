#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "coe/field.hpp"
#include "coe/nonlinearity.hpp"
#include "coe/spectral.hpp"

namespace coe {

/// alpha_1 u(0) + beta_1 u_t(0) = f1 and alpha_2 u(T) + beta_2 u_t(T) = f2.
struct BoundaryConditions
{
  Complex alpha1{1.0, 0.0};
  Complex beta1{0.0, 0.0};
  Complex alpha2{0.0, 0.0};
  Complex beta2{1.0, 0.0};
  Field f1;
  Field f2;
};

/// alpha_1 beta_2 - alpha_2 beta_1.
Complex check_nondegenerate(const BoundaryConditions& bc);

/// Throws InvalidArgument when |alpha_1 beta_2 - alpha_2 beta_1| < 1e-12.
void require_nondegenerate(const BoundaryConditions& bc);

/// Uniform grid t_i = i T / (m + 1), i = 0..m+1, on [0, T].
struct TGrid
{
  double T = 1.0;
  std::size_t m = 64;

  TGrid() = default;
  TGrid(double T, std::size_t m);

  double spacing() const { return T / static_cast<double>(m + 1); }
  std::size_t points() const { return m + 2; }
  double t(std::size_t i) const { return spacing() * static_cast<double>(i); }
};

/// Forcing f(t, .) on the x grid.
using SpaceTimeForcing = std::function<Field(double t)>;

SpaceTimeField sample_forcing(const DiscretizedProblem& problem, const TGrid& tgrid, const SpaceTimeForcing& f);

struct BvpOptions
{
  /// Reject boundary data with a vanishing alpha/beta determinant.
  bool require_nondegenerate = true;
};

/// Second-order finite differences in t per x-frequency:
///   -v'' + (mu_hat + nu)(A + eta(xi)) v = f_hat(t, xi)
/// with one-sided second-order stencils in the boundary rows.
SpaceTimeField solve_bvp_linear(const DiscretizedProblem& problem, const BoundaryConditions& bc, const TGrid& tgrid,
                                const SpaceTimeField& f, const BvpOptions& options = {});
SpaceTimeField solve_bvp_linear(const DiscretizedProblem& problem, const BoundaryConditions& bc, const TGrid& tgrid,
                                const SpaceTimeForcing& f, const BvpOptions& options = {});

/// Max-norm residual of the discrete system relative to max(1, ||data||_inf).
double bvp_residual(const DiscretizedProblem& problem, const BoundaryConditions& bc, const TGrid& tgrid,
                    const SpaceTimeField& f, const SpaceTimeField& u);

/// Second-order finite-difference time derivative on the t grid.
SpaceTimeField time_derivative(const SpaceTimeField& u);

struct PicardReport
{
  std::size_t iterations = 0;
  std::vector<double> gaps;
  bool converged = false;

  nlohmann::ordered_json to_json() const;
};

struct SemilinearBvpResult
{
  SpaceTimeField solution;
  PicardReport report;
};

/// Picard iteration u_{n+1} = solve(f + F(u_n, u_n,t)) from the F = 0 solve,
/// stopping when ||u_{n+1} - u_n|| <= tol (1 + ||u_{n+1}||) in the mixed norm.
SemilinearBvpResult solve_bvp_semilinear(const DiscretizedProblem& problem, const BoundaryConditions& bc,
                                         const TGrid& tgrid, const SpaceTimeField& f, const Nonlinearity& F,
                                         std::size_t max_iter, double tol, const BvpOptions& options = {});

} // namespace coe
