#include "coe/nonlinearity.hpp"

#include <algorithm>
#include <random>

#include "coe/errors.hpp"
#include "coe/norms.hpp"

namespace coe {

std::string to_string(NonlinearityKind kind)
{
  switch (kind) {
    case NonlinearityKind::None:
      return "none";
    case NonlinearityKind::Polynomial:
      return "pointwise-polynomial";
    case NonlinearityKind::ClosedForm:
      return "pointwise-closed-form";
  }
  return "?";
}

NonlinearityKind nonlinearity_kind_from_string(std::string_view name)
{
  if (name == "none") {
    return NonlinearityKind::None;
  }
  if (name == "pointwise-polynomial") {
    return NonlinearityKind::Polynomial;
  }
  if (name == "pointwise-closed-form") {
    return NonlinearityKind::ClosedForm;
  }
  throw InvalidArgument("unknown nonlinearity kind '" + std::string(name) + "'");
}

Nonlinearity Nonlinearity::none()
{
  return Nonlinearity{};
}

Nonlinearity Nonlinearity::polynomial(std::vector<PolynomialTerm> terms)
{
  Nonlinearity f;
  f.kind_ = NonlinearityKind::Polynomial;
  for (const PolynomialTerm& term : terms) {
    for (std::size_t d = 0; d < term.powers.size(); ++d) {
      if (term.powers[d] < 0) {
        throw InvalidArgument("polynomial powers must be non-negative");
      }
      if (term.powers[d] > 0) {
        f.arity_ = std::max(f.arity_, static_cast<int>(d));
      }
    }
    if (term.t_power < 0) {
      throw InvalidArgument("polynomial powers must be non-negative");
    }
    f.uses_t_ = f.uses_t_ || term.t_power > 0;
  }
  f.arity_ = std::max(f.arity_, 0);
  f.terms_ = std::move(terms);
  return f;
}

Nonlinearity Nonlinearity::closed_form(int arity, bool uses_t_derivative, Evaluator evaluator)
{
  if (arity < 0) {
    throw InvalidArgument("closed-form nonlinearity arity must be non-negative");
  }
  if (!evaluator) {
    throw InvalidArgument("closed-form nonlinearity needs an evaluator");
  }
  Nonlinearity f;
  f.kind_ = NonlinearityKind::ClosedForm;
  f.arity_ = arity;
  f.uses_t_ = uses_t_derivative;
  f.evaluator_ = std::move(evaluator);
  return f;
}

namespace {

Eigen::ArrayXXcd int_power(const CMatrix& base, int power)
{
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Ones(base.rows(), base.cols());
  for (int i = 0; i < power; ++i) {
    out *= base.array();
  }
  return out;
}

} // namespace

CMatrix Nonlinearity::evaluate(const std::vector<CMatrix>& x_derivs, const CMatrix* u_t) const
{
  if (x_derivs.empty()) {
    throw InvalidArgument("nonlinearity needs at least u itself");
  }
  if (static_cast<int>(x_derivs.size()) <= arity_) {
    throw InvalidArgument("nonlinearity needs more derivative arguments");
  }
  if (uses_t_ && u_t == nullptr) {
    throw InvalidArgument("nonlinearity needs the time derivative");
  }
  const CMatrix& u = x_derivs.front();
  switch (kind_) {
    case NonlinearityKind::None:
      return CMatrix::Zero(u.rows(), u.cols());
    case NonlinearityKind::Polynomial: {
      Eigen::ArrayXXcd acc = Eigen::ArrayXXcd::Zero(u.rows(), u.cols());
      for (const PolynomialTerm& term : terms_) {
        Eigen::ArrayXXcd prod = Eigen::ArrayXXcd::Constant(u.rows(), u.cols(), term.coeff);
        for (std::size_t d = 0; d < term.powers.size(); ++d) {
          if (term.powers[d] > 0) {
            prod *= int_power(x_derivs[d], term.powers[d]);
          }
        }
        if (term.t_power > 0) {
          prod *= int_power(*u_t, term.t_power);
        }
        acc += prod;
      }
      return acc.matrix();
    }
    case NonlinearityKind::ClosedForm:
      return evaluator_(x_derivs, u_t);
  }
  return CMatrix::Zero(u.rows(), u.cols());
}

Field Nonlinearity::evaluate(const Field& u, const Field* u_t) const
{
  if (kind_ == NonlinearityKind::None) {
    return Field::zeros(u.grid, u.dim());
  }
  std::vector<CMatrix> derivs;
  derivs.reserve(static_cast<std::size_t>(arity_) + 1);
  derivs.push_back(u.values);
  for (int d = 1; d <= arity_; ++d) {
    derivs.push_back(spectral_derivative(u, d).values);
  }
  return Field(u.grid, evaluate(derivs, u_t ? &u_t->values : nullptr));
}

double Nonlinearity::lipschitz_probe(const Field& u, double radius, std::size_t probes, std::uint64_t seed) const
{
  if (uses_t_) {
    throw InvalidArgument("lipschitz probe supports maps of u and its x-derivatives only");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Field base = evaluate(u);
  const double scale = radius * std::max(1.0, sup_norm(u));
  double best = 0.0;
  for (std::size_t i = 0; i < probes; ++i) {
    Field d = Field::zeros(u.grid, u.dim());
    for (Eigen::Index r = 0; r < d.values.rows(); ++r) {
      for (Eigen::Index c = 0; c < d.values.cols(); ++c) {
        d.values(r, c) = gauss(rng);
      }
    }
    // Smooth the perturbation so derivative arguments stay bounded.
    d = apply_multiplier(d, [](double xi) { return std::exp(-xi * xi); });
    const double dn = lp_norm(d, 2.0);
    if (dn == 0.0) {
      continue;
    }
    d *= scale / dn;
    const Field moved = evaluate(u + d);
    best = std::max(best, lp_norm(moved - base, 2.0) / scale);
  }
  return best;
}

} // namespace coe
