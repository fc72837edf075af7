#include "coe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "coe/errors.hpp"
#include "coe/format.hpp"
#include "coe/norms.hpp"

namespace coe {

DiscretizedProblem::DiscretizedProblem(Grid grid, SymbolSet symbols, OperatorRealization A, double p)
  : grid_(grid), symbols_(std::move(symbols)), A_(std::move(A)), p_(p)
{
  symbols_.validate();
  if (!(p_ >= 1.0) || !std::isfinite(p_)) {
    throw InvalidArgument("norm exponent p must be finite and >= 1");
  }
}

const ConditionReport& DiscretizedProblem::check_condition(double phi2, const std::vector<double>& xi_grid)
{
  report_ = check_condition31(symbols_, xi_grid, phi2);
  return *report_;
}

void DiscretizedProblem::require_admissible() const
{
  if (!report_) {
    throw ConditionNotChecked("the structural condition has not been checked for this problem");
  }
  if (!report_->all_pass()) {
    std::string failed;
    for (std::size_t i = 0; i < report_->pass.size(); ++i) {
      if (!report_->pass[i]) {
        failed += (failed.empty() ? "" : ",") + std::to_string(i + 1);
      }
    }
    throw ConditionFailed("structural condition fails in clause(s) " + failed);
  }
}

void DiscretizedProblem::require_lambda(Complex lambda) const
{
  require_admissible();
  if (!Sector(report_->phi2).contains(lambda)) {
    throw InvalidArgument("lambda lies outside the admissible sector");
  }
}

CMatrix DiscretizedProblem::symbol_matrix(double xi) const
{
  const Complex m = mu_plus_nu(symbols_, xi);
  const Complex e = eta(symbols_, xi);
  CMatrix out = m * A_.to_dense();
  out.diagonal().array() += m * e;
  return out;
}

namespace {

void check_field(const DiscretizedProblem& problem, const Field& f)
{
  if (!(f.grid == problem.grid())) {
    throw InvalidArgument("field is not sampled on the problem grid");
  }
  if (f.dim() != problem.dim()) {
    throw InvalidArgument("field dimension does not match the operator");
  }
}

Complex ipow(Complex z, int k)
{
  Complex out{1.0, 0.0};
  for (int j = 0; j < k; ++j) {
    out *= z;
  }
  return out;
}

} // namespace

Field solve_linear(const DiscretizedProblem& problem, Complex lambda, const Field& f)
{
  problem.require_lambda(lambda);
  check_field(problem, f);
  const Grid& grid = problem.grid();
  const SymbolSet& sym = problem.symbols();
  CMatrix spec = to_spectrum(f);
  for (std::size_t bin = 0; bin < grid.n; ++bin) {
    const auto row = static_cast<Eigen::Index>(bin);
    const double xi = grid.xi(bin);
    const Complex m = mu_plus_nu(sym, xi);
    const Complex e = eta(sym, xi);
    const CVector rhs = spec.row(row).transpose();
    if (rhs.isZero(0.0)) {
      continue;
    }
    try {
      spec.row(row) = (problem.op().resolvent_solve(e + lambda, rhs) / m).transpose();
    } catch (const SingularResolvent& err) {
      throw SingularResolvent(std::string(err.what()) + " at xi = " + format_double(xi));
    }
  }
  return from_spectrum(grid, spec);
}

Field apply_L(const DiscretizedProblem& problem, const Field& u)
{
  problem.require_admissible();
  check_field(problem, u);
  const Grid& grid = problem.grid();
  const SymbolSet& sym = problem.symbols();
  CMatrix spec = to_spectrum(u);
  for (std::size_t bin = 0; bin < grid.n; ++bin) {
    const auto row = static_cast<Eigen::Index>(bin);
    const double xi = grid.xi(bin);
    const CVector v = spec.row(row).transpose();
    spec.row(row) = (mu_plus_nu(sym, xi) * problem.op().apply(v) + char_poly_N(sym, xi) * v).transpose();
  }
  return from_spectrum(grid, spec);
}

double relative_residual(const DiscretizedProblem& problem, Complex lambda, const Field& u, const Field& f)
{
  Field r = apply_L(problem, u);
  r += lambda * u;
  r -= f;
  const double denom = lp_norm(f, 2.0);
  if (denom == 0.0) {
    return lp_norm(r, 2.0);
  }
  return lp_norm(r, 2.0) / denom;
}

SweepRow coercive_report(const DiscretizedProblem& problem, Complex lambda, const Field& f)
{
  check_field(problem, f);
  const double p = problem.p();
  const double f_norm = lp_norm(f, p);
  if (f_norm == 0.0) {
    throw InvalidArgument("coercive report needs a nonzero forcing");
  }
  const Field u = solve_linear(problem, lambda, f);
  const Grid& grid = problem.grid();
  const SymbolSet& sym = problem.symbols();
  const int l = sym.order;
  const CMatrix spec = to_spectrum(u);
  const double abs_lambda = std::abs(lambda);

  SweepRow row;
  row.lambda = lambda;
  row.term.assign(static_cast<std::size_t>(l) + 1, 0.0);
  row.conv.assign(static_cast<std::size_t>(l) + 1, 0.0);

  for (int k = 0; k <= l; ++k) {
    CMatrix deriv = spec;
    CMatrix conv = spec;
    for (std::size_t bin = 0; bin < grid.n; ++bin) {
      const auto r = static_cast<Eigen::Index>(bin);
      const double xi = grid.xi(bin);
      const Complex factor = ipow(Complex{0.0, xi}, k);
      deriv.row(r) *= factor;
      conv.row(r) *= sym.a_hat(k, xi) * factor;
    }
    const double w = lambda_weight(abs_lambda, k, l);
    row.term[static_cast<std::size_t>(k)] = w * lp_norm(from_spectrum(grid, deriv), p);
    if (sym.has_kernel(k)) {
      row.conv[static_cast<std::size_t>(k)] = w * lp_norm(from_spectrum(grid, conv), p);
    }
  }

  const Field au = apply_pointwise(u, [&problem](const CVector& v) { return problem.op().apply(v); });
  row.au_term = lp_norm(au, p);
  if (sym.mu_kernel) {
    row.mu_conv_term = lp_norm(apply_multiplier(au, [&sym](double xi) { return sym.mu_hat(xi); }), p);
  }

  double total = row.mu_conv_term + row.au_term;
  for (std::size_t k = 0; k < row.term.size(); ++k) {
    total += row.term[k] + row.conv[k];
  }
  row.ratio = total / f_norm;
  row.resolvent_value = (1.0 + abs_lambda) * lp_norm(u, p) / f_norm;
  return row;
}

SweepTable lambda_sweep(const DiscretizedProblem& problem, const Field& f, const std::vector<Complex>& lambdas)
{
  if (lambdas.empty()) {
    throw InvalidArgument("lambda sweep needs at least one lambda");
  }
  std::vector<Complex> sorted = lambdas;
  std::stable_sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  SweepTable table;
  table.order = problem.symbols().order;
  table.rows.reserve(sorted.size());
  for (const Complex lambda : sorted) {
    table.rows.push_back(coercive_report(problem, lambda, f));
  }
  return table;
}

std::pair<double, double> SweepTable::ratio_range() const
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const SweepRow& row : rows) {
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  return {lo, hi};
}

double SweepTable::max_resolvent_value() const
{
  double hi = 0.0;
  for (const SweepRow& row : rows) {
    hi = std::max(hi, row.resolvent_value);
  }
  return hi;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table)
{
  out << "lambda_re,lambda_im";
  for (int k = 0; k <= table.order; ++k) {
    out << ",term_k" << k;
  }
  for (int k = 0; k <= table.order; ++k) {
    out << ",conv_k" << k;
  }
  out << ",mu_conv_term,au_term,ratio,resolvent_value\n";
  for (const SweepRow& row : table.rows) {
    out << format_double(row.lambda.real()) << ',' << format_double(row.lambda.imag());
    for (const double v : row.term) {
      out << ',' << format_double(v);
    }
    for (const double v : row.conv) {
      out << ',' << format_double(v);
    }
    out << ',' << format_double(row.mu_conv_term) << ',' << format_double(row.au_term) << ','
        << format_double(row.ratio) << ',' << format_double(row.resolvent_value) << '\n';
  }
}

std::pair<double, double> norm_equivalence(const DiscretizedProblem& problem, const std::vector<Field>& fields)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool any = false;
  for (const Field& u : fields) {
    check_field(problem, u);
    const double w = sobolev_norm(u, problem.symbols().order, problem.p(), problem.op());
    if (w == 0.0) {
      continue;
    }
    const double ratio = lp_norm(apply_L(problem, u), problem.p()) / w;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    any = true;
  }
  if (!any) {
    throw InvalidArgument("norm equivalence needs at least one nonzero field");
  }
  return {lo, hi};
}

} // namespace coe
