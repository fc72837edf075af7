#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "coe/field.hpp"

namespace coe {

enum class NonlinearityKind
{
  None,
  Polynomial,
  ClosedForm,
};

std::string to_string(NonlinearityKind kind);
NonlinearityKind nonlinearity_kind_from_string(std::string_view name);

/// coeff * prod_d (d^d u / dx^d)^{powers[d]} * (du/dt)^{t_power}, componentwise.
struct PolynomialTerm
{
  Complex coeff{1.0, 0.0};
  std::vector<int> powers;
  int t_power = 0;
};

/// Pointwise nonlinearity F(u, u_x, ..., d^i u/dx^i[, u_t]). Arguments are
/// n x dim matrices: x_derivs[d] holds the d-th x-derivative and u_t (when the
/// map uses it) the time derivative.
class Nonlinearity
{
public:
  using Evaluator = std::function<CMatrix(const std::vector<CMatrix>& x_derivs, const CMatrix* u_t)>;

  static Nonlinearity none();
  static Nonlinearity polynomial(std::vector<PolynomialTerm> terms);
  static Nonlinearity closed_form(int arity, bool uses_t_derivative, Evaluator evaluator);

  NonlinearityKind kind() const { return kind_; }
  /// Highest x-derivative order among the arguments; -1 for none.
  int arity() const { return arity_; }
  bool uses_t_derivative() const { return uses_t_; }
  const std::vector<PolynomialTerm>& terms() const { return terms_; }

  CMatrix evaluate(const std::vector<CMatrix>& x_derivs, const CMatrix* u_t = nullptr) const;
  /// Evaluates on a field, computing x-derivatives spectrally.
  Field evaluate(const Field& u, const Field* u_t = nullptr) const;

  /// max ||F(u + d) - F(u)||_2 / ||d||_2 over `probes` random perturbations
  /// of relative size `radius`.
  double lipschitz_probe(const Field& u, double radius = 1e-3, std::size_t probes = 8, std::uint64_t seed = 0) const;

private:
  NonlinearityKind kind_ = NonlinearityKind::None;
  int arity_ = -1;
  bool uses_t_ = false;
  std::vector<PolynomialTerm> terms_;
  Evaluator evaluator_;
};

} // namespace coe
