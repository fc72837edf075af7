#include "coe/norms.hpp"

#include <cmath>

#include "coe/errors.hpp"

namespace coe {

namespace {

void check_exponent(double p, const char* what)
{
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidArgument(std::string(what) + ": exponent must be finite and >= 1");
  }
}

double row_norms_lp(const CMatrix& values, double h, double p)
{
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    sum += std::pow(values.row(i).norm(), p);
  }
  return std::pow(h * sum, 1.0 / p);
}

} // namespace

double lp_norm(const Field& field, double p)
{
  check_exponent(p, "lp_norm");
  return row_norms_lp(field.values, field.grid.spacing(), p);
}

double sup_norm(const Field& field)
{
  double best = 0.0;
  for (Eigen::Index i = 0; i < field.values.rows(); ++i) {
    best = std::max(best, field.values.row(i).norm());
  }
  return best;
}

double mixed_norm(const SpaceTimeField& field, double p, double q)
{
  check_exponent(p, "mixed_norm");
  check_exponent(q, "mixed_norm");
  double sum = 0.0;
  for (const Field& slice : field.slices) {
    sum += std::pow(lp_norm(slice, q), p);
  }
  return std::pow(field.dt * sum, 1.0 / p);
}

double sobolev_norm(const Field& field, int order, double p, const OperatorRealization& A)
{
  if (order < 0) {
    throw InvalidArgument("sobolev_norm: order must be non-negative");
  }
  if (field.dim() != A.dim()) {
    throw InvalidArgument("sobolev_norm: field dimension does not match the operator");
  }
  const Field au = apply_pointwise(field, [&A](const CVector& v) { return A.apply(v); });
  double total = lp_norm(field, p) + lp_norm(au, p);
  for (int k = 0; k <= order; ++k) {
    total += lp_norm(spectral_derivative(field, k), p);
  }
  return total;
}

int dyadic_index(double xi)
{
  const double a = std::abs(xi);
  if (a <= 1.0) {
    return 0;
  }
  int j = static_cast<int>(std::ceil(std::log2(a)));
  // Guard against log2 rounding at exact powers of two.
  if (std::ldexp(1.0, j - 1) >= a) {
    --j;
  }
  if (std::ldexp(1.0, j) < a) {
    ++j;
  }
  return j;
}

Field dyadic_block(const Field& field, int j)
{
  return apply_multiplier(field, [j](double xi) { return dyadic_index(xi) == j ? 1.0 : 0.0; });
}

double besov_norm(const Field& field, double s, double q, double p, std::optional<double> m_cap)
{
  check_exponent(p, "besov_norm");
  check_exponent(q, "besov_norm");
  const double cap = m_cap.value_or(std::ceil(s) + 1.0);
  if (!(s > 0.0) || !(s < cap)) {
    throw InvalidArgument("besov_norm: smoothness must satisfy 0 < s < m_cap");
  }
  const Grid& grid = field.grid;
  int top = 0;
  for (std::size_t bin = 0; bin < grid.n; ++bin) {
    top = std::max(top, dyadic_index(grid.xi(bin)));
  }

  const CMatrix spectrum = to_spectrum(field);
  double low = 0.0;
  double high = 0.0;
  for (int j = 0; j <= top; ++j) {
    CMatrix block = spectrum;
    bool any = false;
    for (std::size_t bin = 0; bin < grid.n; ++bin) {
      if (dyadic_index(grid.xi(bin)) != j) {
        block.row(static_cast<Eigen::Index>(bin)).setZero();
      } else {
        any = true;
      }
    }
    if (!any) {
      continue;
    }
    const double piece = lp_norm(from_spectrum(grid, block), q);
    if (j == 0) {
      low = piece;
    } else {
      high += std::pow(std::pow(2.0, j * s) * piece, p);
    }
  }
  return low + std::pow(high, 1.0 / p);
}

TraceExponents trace_exponents(int order, double p)
{
  if (!(p > 1.0)) {
    throw InvalidArgument("trace exponents need p > 1");
  }
  const double l = static_cast<double>(order);
  return {l * (2.0 * p - 1.0) / (2.0 * p), l * (p - 1.0) / (2.0 * p), 1.0 / (2.0 * p), (p + 1.0) / (2.0 * p)};
}

double initial_data_exponent(int order, double p)
{
  if (!(p > 1.0)) {
    throw InvalidArgument("initial data exponent needs p > 1");
  }
  const double conjugate = p / (p - 1.0);
  return static_cast<double>(order) / conjugate;
}

namespace {

double interpolation_part(const Field& u, double theta, double q, const OperatorRealization& A)
{
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.values.rows(); ++i) {
    const CVector row = u.values.row(i).transpose();
    const double base = row.norm();
    if (base == 0.0) {
      continue;
    }
    const double graph = A.apply(row).norm();
    sum += std::pow(std::pow(base, 1.0 - theta) * std::pow(graph, theta), q);
  }
  return std::pow(u.grid.spacing() * sum, 1.0 / q);
}

double trace_norm(const Field& u, double s, double theta, double p, double q, const OperatorRealization& A)
{
  if (u.dim() != A.dim()) {
    throw InvalidArgument("trace_space_norms: field dimension does not match the operator");
  }
  if (u.values.isZero(0.0)) {
    return 0.0;
  }
  return besov_norm(u, s, q, p) + interpolation_part(u, theta, q, A);
}

} // namespace

TraceNorms trace_space_norms(const Field& u0, const Field& u1, int order, double p, double q,
                             const OperatorRealization& A)
{
  const TraceExponents e = trace_exponents(order, p);
  return {trace_norm(u0, e.s0, e.theta0, p, q, A), trace_norm(u1, e.s1, e.theta1, p, q, A)};
}

NormKind norm_kind_from_string(std::string_view name)
{
  if (name == "lp") {
    return NormKind::Lp;
  }
  if (name == "mixed-pq") {
    return NormKind::MixedPQ;
  }
  if (name == "sobolev") {
    return NormKind::Sobolev;
  }
  if (name == "besov") {
    return NormKind::Besov;
  }
  if (name == "trace-x0") {
    return NormKind::TraceX0;
  }
  if (name == "trace-x1") {
    return NormKind::TraceX1;
  }
  throw InvalidArgument("unknown norm kind '" + std::string(name) + "'");
}

void NormSpec::validate() const
{
  if (!(p > 1.0) || !std::isfinite(p) || !(q > 1.0) || !std::isfinite(q)) {
    throw InvalidArgument("norm exponents must satisfy 1 < p, q < infinity");
  }
  if (kind == NormKind::Besov && !(smoothness > 0.0)) {
    throw InvalidArgument("besov norm requires positive smoothness");
  }
  if (order < 0) {
    throw InvalidArgument("norm order must be non-negative");
  }
}

} // namespace coe
