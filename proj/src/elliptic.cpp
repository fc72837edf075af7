#include "coe/elliptic.hpp"

#include <cmath>
#include <optional>

#include "coe/errors.hpp"
#include "coe/format.hpp"
#include "coe/norms.hpp"

namespace coe {

Complex check_nondegenerate(const BoundaryConditions& bc)
{
  return bc.alpha1 * bc.beta2 - bc.alpha2 * bc.beta1;
}

void require_nondegenerate(const BoundaryConditions& bc)
{
  if (std::abs(check_nondegenerate(bc)) < 1e-12) {
    throw InvalidArgument("boundary conditions are degenerate: alpha1 beta2 - alpha2 beta1 = 0");
  }
}

TGrid::TGrid(double T_, std::size_t m_) : T(T_), m(m_)
{
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("t-interval length must be positive and finite");
  }
  if (m < 2) {
    throw InvalidArgument("t grid needs at least two interior points");
  }
}

SpaceTimeField sample_forcing(const DiscretizedProblem& problem, const TGrid& tgrid, const SpaceTimeForcing& f)
{
  SpaceTimeField out;
  out.t0 = 0.0;
  out.dt = tgrid.spacing();
  out.slices.reserve(tgrid.points());
  for (std::size_t i = 0; i < tgrid.points(); ++i) {
    out.slices.push_back(f ? f(tgrid.t(i)) : Field::zeros(problem.grid(), problem.dim()));
  }
  return out;
}

namespace {

/// Scalar coefficients of the eliminated tridiagonal system in rows 1..m
/// (index 0..m-1); the diagonal blocks are diag[i] I + M(xi).
struct Stencil
{
  std::vector<Complex> lower;
  std::vector<Complex> diag;
  std::vector<Complex> upper;
  Complex c0;      ///< coefficient of v_0 in the first boundary row
  Complex cT;      ///< coefficient of v_{m+1} in the last boundary row
  Complex first_rhs; ///< weight of g_0 in row 1
  Complex last_rhs;  ///< weight of g_{m+1} in row m
};

Stencil build_stencil(const BoundaryConditions& bc, const TGrid& tgrid)
{
  const std::size_t m = tgrid.m;
  const double h = tgrid.spacing();
  const double h2 = h * h;
  const double h3 = h2 * h;
  Stencil s;
  s.lower.assign(m, Complex(-1.0 / h2));
  s.diag.assign(m, Complex(2.0 / h2));
  s.upper.assign(m, Complex(-1.0 / h2));
  s.lower.front() = 0.0;
  s.upper.back() = 0.0;
  s.c0 = bc.alpha1 - 3.0 * bc.beta1 / (2.0 * h);
  s.cT = bc.alpha2 + 3.0 * bc.beta2 / (2.0 * h);
  if (std::abs(s.c0) < 1e-14 * (std::abs(bc.alpha1) + std::abs(bc.beta1) / h) ||
      std::abs(s.cT) < 1e-14 * (std::abs(bc.alpha2) + std::abs(bc.beta2) / h)) {
    throw SingularResolvent("discrete boundary rows are singular on this t grid");
  }
  // v_0 = (g_0 - (2 beta1/h) v_1 + (beta1/(2h)) v_2) / c0
  s.diag.front() += 2.0 * bc.beta1 / (h3 * s.c0);
  s.upper.front() += -bc.beta1 / (2.0 * h3 * s.c0);
  s.first_rhs = 1.0 / (s.c0 * h2);
  // v_{m+1} = (g_{m+1} + (2 beta2/h) v_m - (beta2/(2h)) v_{m-1}) / cT
  s.diag.back() += -2.0 * bc.beta2 / (h3 * s.cT);
  s.lower.back() += bc.beta2 / (2.0 * h3 * s.cT);
  s.last_rhs = 1.0 / (s.cT * h2);
  return s;
}

/// Right-hand sides per t-point (m+2 entries of length dim): g_0 = f1_hat,
/// g_i = f_hat(t_i), g_{m+1} = f2_hat, all at one frequency.
using Column = std::vector<CVector>;

/// Solves the eliminated system for a scalar symbol w (one mode) or a dense
/// matrix M; returns the full column v_0..v_{m+1}.
Column solve_dense(const Stencil& s, const CMatrix& M, const Column& g, const BoundaryConditions& bc, double h,
                   double xi)
{
  const std::size_t m = s.diag.size();
  const auto d = M.rows();
  const CMatrix I = CMatrix::Identity(d, d);
  std::vector<CMatrix> cprime(m);
  Column dprime(m);
  for (std::size_t i = 0; i < m; ++i) {
    CVector r = g[i + 1];
    if (i == 0) {
      r += s.first_rhs * g[0];
    }
    if (i + 1 == m) {
      r += s.last_rhs * g[m + 1];
    }
    CMatrix S = M;
    S.diagonal().array() += s.diag[i];
    if (i > 0) {
      S -= s.lower[i] * cprime[i - 1];
      r -= s.lower[i] * dprime[i - 1];
    }
    const Eigen::PartialPivLU<CMatrix> lu(S);
    if (!(lu.rcond() > 1e-13)) {
      throw SingularResolvent("per-frequency block is singular at xi = " + format_double(xi));
    }
    cprime[i] = lu.solve(s.upper[i] * I);
    dprime[i] = lu.solve(r);
  }
  Column v(m + 2);
  v[m] = dprime[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    v[i + 1] = dprime[i] - cprime[i] * v[i + 2];
  }
  v[0] = (g[0] - (2.0 * bc.beta1 / h) * v[1] + (bc.beta1 / (2.0 * h)) * v[2]) / s.c0;
  v[m + 1] = (g[m + 1] + (2.0 * bc.beta2 / h) * v[m] - (bc.beta2 / (2.0 * h)) * v[m - 1]) / s.cT;
  return v;
}

/// Scalar Thomas sweep for every mode at once: w holds the per-mode symbol.
Column solve_modes(const Stencil& s, const CVector& w, const Column& g, const BoundaryConditions& bc, double h,
                   double xi)
{
  const std::size_t m = s.diag.size();
  const auto d = w.size();
  Column cprime(m);
  Column dprime(m);
  for (std::size_t i = 0; i < m; ++i) {
    CVector r = g[i + 1];
    if (i == 0) {
      r += s.first_rhs * g[0];
    }
    if (i + 1 == m) {
      r += s.last_rhs * g[m + 1];
    }
    CVector S = w.array() + s.diag[i];
    if (i > 0) {
      S -= s.lower[i] * cprime[i - 1];
      r -= s.lower[i] * dprime[i - 1];
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      if (std::abs(S[k]) < 1e-13 * (std::abs(w[k]) + std::abs(s.diag[i]))) {
        throw SingularResolvent("per-frequency block is singular at xi = " + format_double(xi));
      }
    }
    cprime[i] = s.upper[i] * S.cwiseInverse();
    dprime[i] = r.cwiseQuotient(S);
  }
  Column v(m + 2);
  v[m] = dprime[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    v[i + 1] = dprime[i] - cprime[i].cwiseProduct(v[i + 2]);
  }
  v[0] = (g[0] - (2.0 * bc.beta1 / h) * v[1] + (bc.beta1 / (2.0 * h)) * v[2]) / s.c0;
  v[m + 1] = (g[m + 1] + (2.0 * bc.beta2 / h) * v[m] - (bc.beta2 / (2.0 * h)) * v[m - 1]) / s.cT;
  return v;
}

CMatrix boundary_spectrum(const DiscretizedProblem& problem, const Field& data)
{
  if (data.values.size() == 0) {
    return CMatrix::Zero(static_cast<Eigen::Index>(problem.grid().n), static_cast<Eigen::Index>(problem.dim()));
  }
  if (!(data.grid == problem.grid()) || data.dim() != problem.dim()) {
    throw InvalidArgument("boundary data does not match the problem grid or dimension");
  }
  return to_spectrum(data);
}

void check_spacetime(const DiscretizedProblem& problem, const TGrid& tgrid, const SpaceTimeField& f)
{
  if (f.slices.size() != tgrid.points()) {
    throw InvalidArgument("space-time field must have one slice per t-grid point");
  }
  for (const Field& slice : f.slices) {
    if (!(slice.grid == problem.grid()) || slice.dim() != problem.dim()) {
      throw InvalidArgument("space-time slice does not match the problem grid or dimension");
    }
  }
}

} // namespace

SpaceTimeField solve_bvp_linear(const DiscretizedProblem& problem, const BoundaryConditions& bc, const TGrid& tgrid,
                                const SpaceTimeField& f, const BvpOptions& options)
{
  problem.require_admissible();
  if (options.require_nondegenerate) {
    require_nondegenerate(bc);
  }
  check_spacetime(problem, tgrid, f);
  const Stencil stencil = build_stencil(bc, tgrid);
  const Grid& grid = problem.grid();
  const SymbolSet& sym = problem.symbols();
  const OperatorRealization& A = problem.op();
  const std::size_t pts = tgrid.points();
  const double h = tgrid.spacing();

  std::vector<CMatrix> spec(pts);
  spec.front() = boundary_spectrum(problem, bc.f1);
  spec.back() = boundary_spectrum(problem, bc.f2);
  for (std::size_t i = 1; i + 1 < pts; ++i) {
    spec[i] = to_spectrum(f.slices[i]);
  }

  std::vector<CMatrix> out(pts, CMatrix::Zero(static_cast<Eigen::Index>(grid.n), static_cast<Eigen::Index>(A.dim())));
  for (std::size_t bin = 0; bin < grid.n; ++bin) {
    const auto row = static_cast<Eigen::Index>(bin);
    const double xi = grid.xi(bin);
    Column g(pts);
    bool zero = true;
    for (std::size_t i = 0; i < pts; ++i) {
      g[i] = spec[i].row(row).transpose();
      zero = zero && g[i].isZero(0.0);
    }
    if (zero) {
      continue;
    }
    Column v;
    if (A.has_mode_basis()) {
      const Complex mnu = mu_plus_nu(sym, xi);
      const Complex e = eta(sym, xi);
      const CVector w = (mnu * (A.mode_eigenvalues().cast<Complex>().array() + e)).matrix();
      for (CVector& gi : g) {
        gi = A.to_modes(gi);
      }
      v = solve_modes(stencil, w, g, bc, h, xi);
      for (CVector& vi : v) {
        vi = A.from_modes(vi);
      }
    } else {
      v = solve_dense(stencil, problem.symbol_matrix(xi), g, bc, h, xi);
    }
    for (std::size_t i = 0; i < pts; ++i) {
      out[i].row(row) = v[i].transpose();
    }
  }

  SpaceTimeField u;
  u.t0 = 0.0;
  u.dt = h;
  u.slices.reserve(pts);
  for (const CMatrix& s : out) {
    u.slices.push_back(from_spectrum(grid, s));
  }
  return u;
}

SpaceTimeField solve_bvp_linear(const DiscretizedProblem& problem, const BoundaryConditions& bc, const TGrid& tgrid,
                                const SpaceTimeForcing& f, const BvpOptions& options)
{
  return solve_bvp_linear(problem, bc, tgrid, sample_forcing(problem, tgrid, f), options);
}

double bvp_residual(const DiscretizedProblem& problem, const BoundaryConditions& bc, const TGrid& tgrid,
                    const SpaceTimeField& f, const SpaceTimeField& u)
{
  check_spacetime(problem, tgrid, f);
  check_spacetime(problem, tgrid, u);
  const Grid& grid = problem.grid();
  const std::size_t pts = tgrid.points();
  const std::size_t m = tgrid.m;
  const double h = tgrid.spacing();
  std::vector<CMatrix> us(pts);
  std::vector<CMatrix> fs(pts);
  for (std::size_t i = 0; i < pts; ++i) {
    us[i] = to_spectrum(u.slices[i]);
    fs[i] = to_spectrum(f.slices[i]);
  }
  fs.front() = boundary_spectrum(problem, bc.f1);
  fs.back() = boundary_spectrum(problem, bc.f2);

  double worst = 0.0;
  double scale = 1.0;
  for (std::size_t bin = 0; bin < grid.n; ++bin) {
    const auto row = static_cast<Eigen::Index>(bin);
    const double xi = grid.xi(bin);
    const Complex mnu = mu_plus_nu(problem.symbols(), xi);
    const Complex e = eta(problem.symbols(), xi);
    auto v = [&](std::size_t i) -> CVector { return us[i].row(row).transpose(); };
    auto g = [&](std::size_t i) -> CVector { return fs[i].row(row).transpose(); };
    auto apply_M = [&](const CVector& x) -> CVector { return mnu * (problem.op().apply(x) + e * x); };

    CVector r0 = bc.alpha1 * v(0) + bc.beta1 * (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h) - g(0);
    CVector rT = bc.alpha2 * v(m + 1) + bc.beta2 * (3.0 * v(m + 1) - 4.0 * v(m) + v(m - 1)) / (2.0 * h) - g(m + 1);
    worst = std::max({worst, r0.cwiseAbs().maxCoeff(), rT.cwiseAbs().maxCoeff()});
    scale = std::max({scale, g(0).cwiseAbs().maxCoeff(), g(m + 1).cwiseAbs().maxCoeff()});
    for (std::size_t i = 1; i <= m; ++i) {
      const CVector ri = (-v(i - 1) + 2.0 * v(i) - v(i + 1)) / (h * h) + apply_M(v(i)) - g(i);
      worst = std::max(worst, ri.cwiseAbs().maxCoeff());
      scale = std::max(scale, g(i).cwiseAbs().maxCoeff());
    }
  }
  return worst / scale;
}

SpaceTimeField time_derivative(const SpaceTimeField& u)
{
  const std::size_t pts = u.slices.size();
  if (pts < 3) {
    throw InvalidArgument("time derivative needs at least three slices");
  }
  const double h = u.dt;
  SpaceTimeField out;
  out.t0 = u.t0;
  out.dt = u.dt;
  out.slices.reserve(pts);
  const auto& s = u.slices;
  out.slices.push_back(Complex(1.0 / (2.0 * h)) * (Complex(-3.0) * s[0] + Complex(4.0) * s[1] - s[2]));
  for (std::size_t i = 1; i + 1 < pts; ++i) {
    out.slices.push_back(Complex(1.0 / (2.0 * h)) * (s[i + 1] - s[i - 1]));
  }
  out.slices.push_back(Complex(1.0 / (2.0 * h)) *
                       (Complex(3.0) * s[pts - 1] - Complex(4.0) * s[pts - 2] + s[pts - 3]));
  return out;
}

nlohmann::ordered_json PicardReport::to_json() const
{
  nlohmann::ordered_json j;
  j["iterations"] = iterations;
  j["gaps"] = gaps;
  j["converged"] = converged;
  return j;
}

namespace {

SpaceTimeField difference(const SpaceTimeField& a, const SpaceTimeField& b)
{
  SpaceTimeField out = a;
  for (std::size_t i = 0; i < out.slices.size(); ++i) {
    out.slices[i] -= b.slices[i];
  }
  return out;
}

} // namespace

SemilinearBvpResult solve_bvp_semilinear(const DiscretizedProblem& problem, const BoundaryConditions& bc,
                                         const TGrid& tgrid, const SpaceTimeField& f, const Nonlinearity& F,
                                         std::size_t max_iter, double tol, const BvpOptions& options)
{
  if (max_iter == 0) {
    throw InvalidArgument("Picard iteration needs max_iter >= 1");
  }
  if (!(tol > 0.0)) {
    throw InvalidArgument("Picard tolerance must be positive");
  }
  if (F.kind() != NonlinearityKind::None && F.arity() > problem.symbols().order - 1) {
    throw InvalidArgument("nonlinearity uses x-derivatives beyond order l - 1");
  }
  const double p = problem.p();
  SemilinearBvpResult result;
  SpaceTimeField u = solve_bvp_linear(problem, bc, tgrid, f, options);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    SpaceTimeField rhs = f;
    if (F.kind() != NonlinearityKind::None) {
      std::optional<SpaceTimeField> ut;
      if (F.uses_t_derivative()) {
        ut = time_derivative(u);
      }
      for (std::size_t i = 0; i < rhs.slices.size(); ++i) {
        rhs.slices[i] += F.evaluate(u.slices[i], ut ? &ut->slices[i] : nullptr);
      }
    }
    SpaceTimeField next = solve_bvp_linear(problem, bc, tgrid, rhs, options);
    const double gap = mixed_norm(difference(next, u), p, p);
    u = std::move(next);
    result.report.iterations = it;
    result.report.gaps.push_back(gap);
    if (!std::isfinite(gap)) {
      break;
    }
    if (gap <= tol * (1.0 + mixed_norm(u, p, p))) {
      result.report.converged = true;
      break;
    }
  }
  result.solution = std::move(u);
  return result;
}

} // namespace coe
