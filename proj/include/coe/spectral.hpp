#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "coe/field.hpp"
#include "coe/operators.hpp"
#include "coe/symbols.hpp"

namespace coe {

/// Grid + symbols + operator: the discrete realization of
///   L u = sum_k (a_k * + b_k) d^k u / dx^k + (mu * + nu) A u.
/// Solve operations require a passing condition report for the requested
/// lambda-sector angle.
class DiscretizedProblem
{
public:
  DiscretizedProblem(Grid grid, SymbolSet symbols, OperatorRealization A, double p = 2.0);

  const Grid& grid() const { return grid_; }
  const SymbolSet& symbols() const { return symbols_; }
  const OperatorRealization& op() const { return A_; }
  double p() const { return p_; }
  std::size_t dim() const { return A_.dim(); }

  /// Runs the condition check on `xi_grid` (default log grid) and stores it.
  const ConditionReport& check_condition(double phi2, const std::vector<double>& xi_grid = log_xi_grid());
  const std::optional<ConditionReport>& condition() const { return report_; }

  /// Throws ConditionNotChecked or ConditionFailed.
  void require_admissible() const;
  /// Throws InvalidArgument when lambda lies outside S_{phi2}.
  void require_lambda(Complex lambda) const;

  /// (mu_hat + nu)(A + eta(xi)) as a dense dim x dim matrix.
  CMatrix symbol_matrix(double xi) const;

private:
  Grid grid_;
  SymbolSet symbols_;
  OperatorRealization A_;
  double p_ = 2.0;
  std::optional<ConditionReport> report_;
};

/// u_hat(xi) = (mu_hat + nu)^{-1} (A + eta(xi) + lambda)^{-1} f_hat(xi) per
/// discrete frequency.
Field solve_linear(const DiscretizedProblem& problem, Complex lambda, const Field& f);

/// F^{-1}[(mu_hat + nu)(A + eta) u_hat].
Field apply_L(const DiscretizedProblem& problem, const Field& u);

/// ||(L + lambda) u - f||_2 / ||f||_2.
double relative_residual(const DiscretizedProblem& problem, Complex lambda, const Field& u, const Field& f);

struct SweepRow
{
  Complex lambda;
  std::vector<double> term;  ///< |lambda|^{1-k/l} ||u^{(k)}||, k = 0..l
  std::vector<double> conv;  ///< |lambda|^{1-k/l} ||a_k * u^{(k)}||, k = 0..l
  double mu_conv_term = 0.0; ///< ||mu * A u||
  double au_term = 0.0;      ///< ||A u||
  double ratio = 0.0;        ///< sum of all terms / ||f||
  double resolvent_value = 0.0; ///< (1 + |lambda|) ||u|| / ||f||
};

struct SweepTable
{
  int order = 0;
  std::vector<SweepRow> rows;

  std::pair<double, double> ratio_range() const;
  double max_resolvent_value() const;
};

SweepRow coercive_report(const DiscretizedProblem& problem, Complex lambda, const Field& f);

/// One row per lambda, sorted by |lambda|.
SweepTable lambda_sweep(const DiscretizedProblem& problem, const Field& f, const std::vector<Complex>& lambdas);

void write_sweep_csv(std::ostream& out, const SweepTable& table);

/// Extremes of ||L u||_p / ||u||_{W_p^l} over the nonzero test fields.
std::pair<double, double> norm_equivalence(const DiscretizedProblem& problem, const std::vector<Field>& fields);

} // namespace coe
