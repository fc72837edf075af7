#include <cmath>

#include <doctest.h>

#include "coe/elliptic.hpp"
#include "coe/errors.hpp"
#include "coe/norms.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using coe::BoundaryConditions;
using coe::CMatrix;
using coe::Complex;
using coe::CVector;
using coe::DiscretizedProblem;
using coe::Field;
using coe::Grid;
using coe::kPi;
using coe::Nonlinearity;
using coe::SpaceTimeField;
using coe::TGrid;

namespace {

BoundaryConditions dirichlet(Field f1, Field f2)
{
  BoundaryConditions bc;
  bc.alpha1 = 1.0;
  bc.beta1 = 0.0;
  bc.alpha2 = 1.0;
  bc.beta2 = 0.0;
  bc.f1 = std::move(f1);
  bc.f2 = std::move(f2);
  return bc;
}

coe::BvpOptions allow_degenerate()
{
  coe::BvpOptions o;
  o.require_nondegenerate = false;
  return o;
}

Field cosine(const Grid& g)
{
  return Field::from_function(g, 1, [](double x) { return Complex(std::cos(x)); });
}

double max_error(const SpaceTimeField& u, const std::function<Complex(double, double)>& exact)
{
  double err = 0.0;
  for (std::size_t j = 0; j < u.slices.size(); ++j) {
    const Field& s = u.slices[j];
    for (std::size_t i = 0; i < s.grid.n; ++i) {
      err = std::max(err, std::abs(s.values(static_cast<Eigen::Index>(i), 0) - exact(u.time(j), s.grid.x(i))));
    }
  }
  return err;
}

Nonlinearity linear_term(Complex eps)
{
  coe::PolynomialTerm t;
  t.coeff = eps;
  t.powers = {1};
  return Nonlinearity::polynomial({t});
}

} // namespace

TEST_CASE("boundary determinant")
{
  BoundaryConditions bc;
  bc.alpha1 = 1.0;
  bc.beta1 = 0.0;
  bc.alpha2 = 0.0;
  bc.beta2 = 1.0;
  CHECK(std::abs(coe::check_nondegenerate(bc) - 1.0) == 0.0);
  bc.alpha2 = 1.0;
  bc.beta2 = 0.0;
  CHECK(coe::check_nondegenerate(bc) == Complex(0.0));
  CHECK_THROWS_AS(coe::require_nondegenerate(bc), coe::InvalidArgument);
  bc.alpha1 = 2.0;
  bc.beta1 = 3.0;
  bc.alpha2 = 1.0;
  bc.beta2 = 2.0;
  CHECK(std::abs(coe::check_nondegenerate(bc) - 1.0) == 0.0);
  coe::require_nondegenerate(bc);
}

TEST_CASE("the solver gate rejects a vanishing determinant unless disabled")
{
  const DiscretizedProblem problem = fixture::scalar_heat(1.0, 16.0 * kPi, 64);
  const TGrid tgrid(1.0, 15);
  const BoundaryConditions bc = dirichlet(cosine(problem.grid()), Field());
  CHECK_THROWS_AS(coe::solve_bvp_linear(problem, bc, tgrid, coe::SpaceTimeForcing{}), coe::InvalidArgument);
  CHECK_NOTHROW(coe::solve_bvp_linear(problem, bc, tgrid, coe::SpaceTimeForcing{}, allow_degenerate()));
}

TEST_CASE("zero data gives the zero solution")
{
  const DiscretizedProblem problem = fixture::scalar_heat(1.0, kPi, 16);
  BoundaryConditions bc;
  const SpaceTimeField u = coe::solve_bvp_linear(problem, bc, TGrid(1.0, 7), coe::SpaceTimeForcing{});
  REQUIRE(u.slices.size() == 9);
  for (const Field& s : u.slices) {
    CHECK(s.values.norm() == 0.0);
  }
}

TEST_CASE("manufactured solution converges at second order")
{
  const double c = 1.0;
  const double T = 1.0;
  const DiscretizedProblem problem = fixture::scalar_heat(c, 16.0 * kPi, 64);
  const auto exact = [T](double t, double x) { return Complex(std::sin(kPi * t / T) * std::cos(x)); };
  const double factor = (kPi / T) * (kPi / T) + 1.0 + c;
  const coe::SpaceTimeForcing f = [&](double t) {
    return Field::from_function(problem.grid(), 1, [&](double x) { return factor * exact(t, x); });
  };
  std::vector<double> hs;
  std::vector<double> errs;
  for (const std::size_t m : {15, 31, 63, 127}) {
    const TGrid tgrid(T, m);
    const SpaceTimeField u = coe::solve_bvp_linear(problem, dirichlet(Field(), Field()), tgrid, f, allow_degenerate());
    hs.push_back(tgrid.spacing());
    errs.push_back(max_error(u, exact));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double slope = std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]);
    INFO("slope " << slope);
    CHECK(slope >= 1.8);
    CHECK(slope <= 2.2);
  }
}

TEST_CASE("Dirichlet data reproduce the sinh profile")
{
  const double c = 1.0;
  const double T = 1.0;
  const DiscretizedProblem problem = fixture::scalar_heat(c, 16.0 * kPi, 64);
  const auto exact = [&](double t, double x) { return std::cos(x) * oracle::sinh_profile(1.0 + c, T, 1.0, 0.0, t); };
  double previous = 0.0;
  for (const std::size_t m : {31, 63, 127}) {
    const TGrid tgrid(T, m);
    const SpaceTimeField u = coe::solve_bvp_linear(problem, dirichlet(cosine(problem.grid()), Field()), tgrid,
                                                   coe::SpaceTimeForcing{}, allow_degenerate());
    const double err = max_error(u, exact);
    CHECK(err <= 0.1 * tgrid.spacing() * tgrid.spacing());
    if (previous > 0.0) {
      CHECK(previous / err == doctest::Approx(4.0).epsilon(0.1));
    }
    previous = err;
  }
}

TEST_CASE("Dirichlet-Neumann data reproduce the cosh profile")
{
  const double c = 3.0;
  const double T = 0.8;
  const DiscretizedProblem problem = fixture::scalar_heat(c, 16.0 * kPi, 64);
  BoundaryConditions bc;
  bc.f1 = cosine(problem.grid());
  const auto exact = [&](double t, double x) { return std::cos(x) * oracle::cosh_profile(1.0 + c, T, 1.0, t); };
  const SpaceTimeField coarse = coe::solve_bvp_linear(problem, bc, TGrid(T, 63), coe::SpaceTimeForcing{});
  const SpaceTimeField fine = coe::solve_bvp_linear(problem, bc, TGrid(T, 127), coe::SpaceTimeForcing{});
  const double e1 = max_error(coarse, exact);
  const double e2 = max_error(fine, exact);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("discrete maximum principle for nonnegative Dirichlet data")
{
  const DiscretizedProblem problem = fixture::scalar_heat(0.5, 8.0 * kPi, 128);
  const Field f1 = Field::from_function(problem.grid(), 1, [](double x) { return Complex(std::exp(-x * x)); });
  const Field f2 =
    Field::from_function(problem.grid(), 1, [](double x) { return Complex(0.5 * std::exp(-(x - 1) * (x - 1))); });
  const SpaceTimeField u =
    coe::solve_bvp_linear(problem, dirichlet(f1, f2), TGrid(1.0, 63), coe::SpaceTimeForcing{}, allow_degenerate());
  const double bound = std::max(coe::sup_norm(f1), coe::sup_norm(f2));
  for (const Field& s : u.slices) {
    CHECK(s.values.real().maxCoeff() <= bound + 1e-10);
  }
}

TEST_CASE("per-frequency block solve matches a dense full-system solve")
{
  const Grid grid(kPi, 4);
  const DiscretizedProblem problem = [&] {
    DiscretizedProblem p(grid, fixture::example43_symbols(), fixture::diag12());
    p.check_condition(kPi / 2.0);
    return p;
  }();
  BoundaryConditions bc;
  bc.alpha1 = 1.0;
  bc.beta1 = 0.5;
  bc.alpha2 = 2.0;
  bc.beta2 = 1.5;
  bc.f1 = fixture::bandlimited(grid, 2, 1, 1);
  bc.f2 = fixture::bandlimited(grid, 2, 1, 2);
  const TGrid tgrid(0.7, 6);
  const coe::SpaceTimeForcing forcing = [&](double t) {
    return Complex(1.0 + t) * fixture::bandlimited(grid, 2, 1, 3);
  };
  const SpaceTimeField u = coe::solve_bvp_linear(problem, bc, tgrid, forcing);
  const SpaceTimeField f = coe::sample_forcing(problem, tgrid, forcing);

  const Eigen::Index nx = static_cast<Eigen::Index>(grid.n * problem.dim());
  CMatrix L(nx, nx);
  for (Eigen::Index col = 0; col < nx; ++col) {
    Field e(grid, problem.dim());
    e.values(col / 2, col % 2) = 1.0;
    const Field Le = coe::apply_L(problem, e);
    for (Eigen::Index r = 0; r < nx; ++r) {
      L(r, col) = Le.values(r / 2, r % 2);
    }
  }
  const auto flat = [&](const Field& fld) {
    CVector v(nx);
    for (Eigen::Index r = 0; r < nx; ++r) {
      v[r] = fld.values(r / 2, r % 2);
    }
    return v;
  };
  const std::size_t pts = tgrid.points();
  const double h = tgrid.spacing();
  const Eigen::Index N = nx * static_cast<Eigen::Index>(pts);
  CMatrix S = CMatrix::Zero(N, N);
  CVector rhs = CVector::Zero(N);
  const CMatrix I = CMatrix::Identity(nx, nx);
  const auto block = [&](std::size_t r, std::size_t c) {
    return S.block(static_cast<Eigen::Index>(r) * nx, static_cast<Eigen::Index>(c) * nx, nx, nx);
  };
  block(0, 0) = (bc.alpha1 - 1.5 * bc.beta1 / h) * I;
  block(0, 1) = (2.0 * bc.beta1 / h) * I;
  block(0, 2) = (-0.5 * bc.beta1 / h) * I;
  rhs.segment(0, nx) = flat(bc.f1);
  for (std::size_t j = 1; j + 1 < pts; ++j) {
    block(j, j - 1) = (-1.0 / (h * h)) * I;
    block(j, j) = (2.0 / (h * h)) * I + L;
    block(j, j + 1) = (-1.0 / (h * h)) * I;
    rhs.segment(static_cast<Eigen::Index>(j) * nx, nx) = flat(f.slices[j]);
  }
  block(pts - 1, pts - 1) = (bc.alpha2 + 1.5 * bc.beta2 / h) * I;
  block(pts - 1, pts - 2) = (-2.0 * bc.beta2 / h) * I;
  block(pts - 1, pts - 3) = (0.5 * bc.beta2 / h) * I;
  rhs.segment(static_cast<Eigen::Index>(pts - 1) * nx, nx) = flat(bc.f2);

  const CVector x = oracle::lu_solve(S, rhs);
  double err = 0.0;
  for (std::size_t j = 0; j < pts; ++j) {
    err = std::max(err, (flat(u.slices[j]) - x.segment(static_cast<Eigen::Index>(j) * nx, nx)).cwiseAbs().maxCoeff());
  }
  CHECK(err <= 1e-9);
  CHECK(coe::bvp_residual(problem, bc, tgrid, f, u) <= 1e-10);
}

TEST_CASE("time derivative is exact on quadratics")
{
  SpaceTimeField q;
  q.dt = 0.1;
  const Grid g(1.0, 2);
  for (std::size_t j = 0; j < 8; ++j) {
    const double t = q.time(j);
    q.slices.push_back(Field::from_function(g, 1, [t](double) { return Complex(t * t - t); }));
  }
  const SpaceTimeField d = coe::time_derivative(q);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(std::abs(d.slices[j].values(0, 0) - (2.0 * q.time(j) - 1.0)) < 1e-12);
  }
}

TEST_CASE("Picard iteration without nonlinearity stops after one step")
{
  const DiscretizedProblem problem = fixture::scalar_heat(1.0, 16.0 * kPi, 64);
  BoundaryConditions bc;
  bc.f1 = cosine(problem.grid());
  const TGrid tgrid(1.0, 31);
  const SpaceTimeField f = coe::sample_forcing(problem, tgrid, {});
  const coe::SemilinearBvpResult r = coe::solve_bvp_semilinear(problem, bc, tgrid, f, Nonlinearity::none(), 5, 1e-12);
  const SpaceTimeField lin = coe::solve_bvp_linear(problem, bc, tgrid, f);
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 1);
  for (std::size_t j = 0; j < lin.slices.size(); ++j) {
    CHECK(fixture::max_abs_diff(r.solution.slices[j], lin.slices[j]) == 0.0);
  }
}

TEST_CASE("Picard iteration for a linear perturbation matches the shifted operator")
{
  const double c = 1.0;
  const double eps = 0.2;
  const DiscretizedProblem problem = fixture::scalar_heat(c, 16.0 * kPi, 64);
  const DiscretizedProblem shifted = fixture::scalar_heat(c - eps, 16.0 * kPi, 64);
  BoundaryConditions bc;
  bc.f1 = cosine(problem.grid());
  const TGrid tgrid(1.0, 31);
  const SpaceTimeField f = coe::sample_forcing(problem, tgrid, {});
  const coe::SemilinearBvpResult r = coe::solve_bvp_semilinear(problem, bc, tgrid, f, linear_term(eps), 60, 1e-12);
  REQUIRE(r.report.converged);
  const SpaceTimeField direct = coe::solve_bvp_linear(shifted, bc, tgrid, f);
  for (std::size_t j = 0; j < direct.slices.size(); ++j) {
    CHECK(fixture::max_abs_diff(r.solution.slices[j], direct.slices[j]) <= 1e-10);
  }
  const auto& gaps = r.report.gaps;
  for (std::size_t i = 1; i + 1 < gaps.size(); ++i) {
    CHECK(gaps[i] / gaps[i - 1] <= 0.9);
  }
}

TEST_CASE("fourth-order elliptic problem with cubic damping converges")
{
  coe::SymbolSet s;
  s.order = 4;
  s.b = {0.0, 0.0, 0.0, 0.0, 1.0};
  s.a_kernels = {std::nullopt, std::nullopt, std::nullopt, std::nullopt, coe::Kernel::exponential_paper(1.0)};
  s.validate();
  DiscretizedProblem problem(Grid(8.0 * kPi, 128), s, fixture::diag12());
  problem.check_condition(kPi / 2.0);
  REQUIRE(problem.condition()->all_pass());
  BoundaryConditions bc;
  bc.f1 = Field::from_function(problem.grid(), 2, [](double x) { return Complex(0.5 * std::exp(-x * x / 4.0)); });
  const TGrid tgrid(0.5, 63);
  coe::PolynomialTerm cubic;
  cubic.coeff = -1.0;
  cubic.powers = {3};
  const coe::SemilinearBvpResult r = coe::solve_bvp_semilinear(
    problem, bc, tgrid, coe::sample_forcing(problem, tgrid, {}), Nonlinearity::polynomial({cubic}), 30, 1e-8);
  CHECK(r.report.converged);
  CHECK(r.report.iterations <= 30);
  CHECK(r.report.to_json()["converged"] == true);
}
