#include "coe/symbols.hpp"

#include <cmath>
#include <limits>

#include "coe/errors.hpp"

namespace coe {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex ipow(double xi, int k)
{
  // (i xi)^k without pow() so that xi^k stays exact for small k.
  Complex result{1.0, 0.0};
  const Complex ixi{0.0, xi};
  for (int j = 0; j < k; ++j) {
    result *= ixi;
  }
  return result;
}

Complex central_difference(const std::function<Complex(double)>& f, double xi, double step)
{
  return (f(xi + step) - f(xi - step)) / (2.0 * step);
}

} // namespace

KernelKind kernel_kind_from_string(std::string_view name)
{
  if (name == "dirac-scaled") {
    return KernelKind::DiracScaled;
  }
  if (name == "exponential-paper") {
    return KernelKind::ExponentialPaper;
  }
  if (name == "exponential-standard") {
    return KernelKind::ExponentialStandard;
  }
  if (name == "gaussian") {
    return KernelKind::Gaussian;
  }
  if (name == "custom-closed-form") {
    return KernelKind::Custom;
  }
  throw UnsupportedKernel("unsupported kernel kind '" + std::string(name) + "'");
}

std::string to_string(KernelKind kind)
{
  switch (kind) {
    case KernelKind::DiracScaled:
      return "dirac-scaled";
    case KernelKind::ExponentialPaper:
      return "exponential-paper";
    case KernelKind::ExponentialStandard:
      return "exponential-standard";
    case KernelKind::Gaussian:
      return "gaussian";
    case KernelKind::Custom:
      return "custom-closed-form";
  }
  throw UnsupportedKernel("unsupported kernel kind");
}

Kernel::Kernel(KernelKind kind, double rate, double amplitude)
  : kind_(kind), rate_(rate), amplitude_(amplitude)
{
  if (kind != KernelKind::DiracScaled && kind != KernelKind::Custom && !(rate > 0.0)) {
    throw InvalidArgument("kernel decay rate must be positive");
  }
}

Kernel Kernel::dirac(double amplitude)
{
  return Kernel(KernelKind::DiracScaled, 1.0, amplitude);
}

Kernel Kernel::exponential_paper(double rate, double amplitude)
{
  return Kernel(KernelKind::ExponentialPaper, rate, amplitude);
}

Kernel Kernel::exponential_standard(double rate, double amplitude)
{
  return Kernel(KernelKind::ExponentialStandard, rate, amplitude);
}

Kernel Kernel::gaussian(double rate, double amplitude)
{
  return Kernel(KernelKind::Gaussian, rate, amplitude);
}

Kernel Kernel::custom(Symbol fourier, Symbol fourier_deriv)
{
  if (!fourier) {
    throw UnsupportedKernel("custom kernel requires a closed-form symbol");
  }
  Kernel kernel(KernelKind::Custom, 1.0, 1.0);
  kernel.custom_ = std::move(fourier);
  kernel.custom_deriv_ = std::move(fourier_deriv);
  return kernel;
}

Complex Kernel::fourier(double xi) const
{
  const double k = rate_;
  switch (kind_) {
    case KernelKind::DiracScaled:
      return amplitude_;
    case KernelKind::ExponentialPaper:
      return amplitude_ * 2.0 * kI * xi / (k * k + xi * xi);
    case KernelKind::ExponentialStandard:
      return amplitude_ * 2.0 * k / (k * k + xi * xi);
    case KernelKind::Gaussian:
      return amplitude_ * std::sqrt(kPi / k) * std::exp(-xi * xi / (4.0 * k));
    case KernelKind::Custom:
      return custom_(xi);
  }
  throw UnsupportedKernel("unsupported kernel kind");
}

Complex Kernel::fourier_deriv(double xi) const
{
  const double k = rate_;
  switch (kind_) {
    case KernelKind::DiracScaled:
      return 0.0;
    case KernelKind::ExponentialPaper: {
      const double d = k * k + xi * xi;
      return amplitude_ * 2.0 * kI * (k * k - xi * xi) / (d * d);
    }
    case KernelKind::ExponentialStandard: {
      const double d = k * k + xi * xi;
      return -amplitude_ * 4.0 * k * xi / (d * d);
    }
    case KernelKind::Gaussian:
      return fourier(xi) * (-xi / (2.0 * k));
    case KernelKind::Custom:
      if (custom_deriv_) {
        return custom_deriv_(xi);
      }
      return central_difference(custom_, xi, 1e-5 * std::max(std::abs(xi), 1.0));
  }
  throw UnsupportedKernel("unsupported kernel kind");
}

Complex kernel_fourier(const Kernel& kernel, double xi)
{
  if (!std::isfinite(xi)) {
    throw InvalidArgument("kernel_fourier: xi must be finite");
  }
  return kernel.fourier(xi);
}

void SymbolSet::validate()
{
  if (order < 0) {
    throw InvalidArgument("symbol order must be non-negative");
  }
  if (b.size() != static_cast<std::size_t>(order) + 1) {
    throw InvalidArgument("expected " + std::to_string(order + 1) + " coefficients b_0..b_l, got " +
                          std::to_string(b.size()));
  }
  if (a_kernels.size() > b.size()) {
    throw InvalidArgument("more convolution kernels than derivative orders");
  }
  a_kernels.resize(b.size());
}

SymbolSet SymbolSet::validated() const
{
  SymbolSet copy = *this;
  copy.validate();
  return copy;
}

bool SymbolSet::has_kernel(int k) const
{
  return k >= 0 && static_cast<std::size_t>(k) < a_kernels.size() && a_kernels[k].has_value();
}

Complex SymbolSet::a_hat(int k, double xi) const
{
  return has_kernel(k) ? a_kernels[k]->fourier(xi) : Complex{};
}

Complex SymbolSet::a_hat_deriv(int k, double xi) const
{
  return has_kernel(k) ? a_kernels[k]->fourier_deriv(xi) : Complex{};
}

Complex SymbolSet::mu_hat(double xi) const
{
  return mu_kernel ? mu_kernel->fourier(xi) : Complex{};
}

Complex SymbolSet::mu_hat_deriv(double xi) const
{
  return mu_kernel ? mu_kernel->fourier_deriv(xi) : Complex{};
}

Complex mu_plus_nu(const SymbolSet& symbols, double xi)
{
  return symbols.mu_hat(xi) + symbols.nu;
}

Complex char_poly_N(const SymbolSet& symbols, double xi)
{
  Complex sum{};
  for (int k = 0; k <= symbols.order; ++k) {
    sum += (symbols.b.at(k) + symbols.a_hat(k, xi)) * ipow(xi, k);
  }
  return sum;
}

Complex eta(const SymbolSet& symbols, double xi)
{
  const Complex denom = mu_plus_nu(symbols, xi);
  if (std::abs(denom) < kDegenerateFloor) {
    throw DegenerateSymbol("|mu_hat + nu| vanishes at xi = " + std::to_string(xi));
  }
  return char_poly_N(symbols, xi) / denom;
}

double lambda_weight(double abs_lambda, int k, int order)
{
  if (order == 0) {
    return abs_lambda;
  }
  const double exponent = 1.0 - static_cast<double>(k) / order;
  if (exponent == 0.0) {
    return 1.0;
  }
  return std::pow(abs_lambda, exponent);
}

Sector::Sector(double phi) : angle(phi)
{
  if (!(phi >= 0.0 && phi < kPi)) {
    throw InvalidArgument("sector angle must lie in [0, pi)");
  }
}

bool Sector::contains(Complex z, double angle_tol) const
{
  if (z == Complex{}) {
    return true;
  }
  return std::abs(std::arg(z)) <= angle + angle_tol;
}

std::vector<double> log_xi_grid(double lo, double hi, std::size_t points_per_side)
{
  if (!(lo > 0.0) || !(hi > lo) || points_per_side < 2) {
    throw InvalidArgument("log_xi_grid requires 0 < lo < hi and at least two points");
  }
  std::vector<double> grid;
  grid.reserve(2 * points_per_side);
  const double log_lo = std::log10(lo);
  const double step = (std::log10(hi) - log_lo) / static_cast<double>(points_per_side - 1);
  for (std::size_t i = points_per_side; i-- > 0;) {
    grid.push_back(-std::pow(10.0, log_lo + step * static_cast<double>(i)));
  }
  for (std::size_t i = 0; i < points_per_side; ++i) {
    grid.push_back(std::pow(10.0, log_lo + step * static_cast<double>(i)));
  }
  return grid;
}

ConditionReport check_condition31(const SymbolSet& raw_symbols, const std::vector<double>& xi_grid, double phi2)
{
  if (xi_grid.empty()) {
    throw InvalidArgument("check_condition31: empty xi grid");
  }
  const SymbolSet symbols = raw_symbols.validated();
  const Sector lambda_sector(phi2);

  ConditionReport report;
  report.phi2 = lambda_sector.angle;
  report.c_mu = std::numeric_limits<double>::infinity();
  report.c_n = std::numeric_limits<double>::infinity();
  bool eta_defined = true;

  for (const double xi : xi_grid) {
    if (xi == 0.0 || !std::isfinite(xi)) {
      throw InvalidArgument("check_condition31: grid must exclude 0 and be finite");
    }
    const double axi = std::abs(xi);
    const Complex denom = mu_plus_nu(symbols, xi);
    const Complex n = char_poly_N(symbols, xi);
    report.c_mu = std::min(report.c_mu, std::abs(denom));
    report.c_n = std::min(report.c_n, std::abs(n) / std::pow(axi, symbols.order));

    for (int k = 0; k <= symbols.order; ++k) {
      if (!symbols.has_kernel(k)) {
        continue;
      }
      report.c1 = std::max({report.c1, std::abs(symbols.a_hat(k, xi)), std::abs(xi * symbols.a_hat_deriv(k, xi))});
    }
    if (symbols.mu_kernel) {
      report.c2 = std::max({report.c2, std::abs(symbols.mu_hat(xi)), std::abs(xi * symbols.mu_hat_deriv(xi))});
    }

    if (std::abs(denom) < kDegenerateFloor) {
      eta_defined = false;
    } else {
      const Complex e = n / denom;
      if (e != Complex{}) {
        report.phi1 = std::max(report.phi1, std::abs(std::arg(e)));
      }
    }
  }
  if (!eta_defined) {
    // eta has no argument where it is undefined; clause (3) cannot hold.
    report.phi1 = kPi;
  }

  report.pass[0] = report.c_mu > 0.0;
  report.pass[1] = report.c_n > 0.0;
  report.pass[2] = report.phi1 < kPi && report.phi1 + report.phi2 < kPi;
  report.pass[3] = std::isfinite(report.c1) && std::isfinite(report.c2);
  return report;
}

MultiplierIndex multiplier_from_string(std::string_view name)
{
  if (name == "m0") {
    return MultiplierIndex::M0;
  }
  if (name == "m1") {
    return MultiplierIndex::M1;
  }
  if (name == "m2") {
    return MultiplierIndex::M2;
  }
  if (name == "m3") {
    return MultiplierIndex::M3;
  }
  if (name == "m4") {
    return MultiplierIndex::M4;
  }
  if (name == "sigma") {
    return MultiplierIndex::Sigma;
  }
  throw InvalidArgument("unknown multiplier family '" + std::string(name) + "'");
}

std::string to_string(MultiplierIndex index)
{
  switch (index) {
    case MultiplierIndex::M0:
      return "m0";
    case MultiplierIndex::M1:
      return "m1";
    case MultiplierIndex::M2:
      return "m2";
    case MultiplierIndex::M3:
      return "m3";
    case MultiplierIndex::M4:
      return "m4";
    case MultiplierIndex::Sigma:
      return "sigma";
  }
  return "?";
}

ScalarPrefactor scalar_prefactor(const SymbolSet& symbols, MultiplierIndex index, double xi, Complex lambda)
{
  const Complex denom = mu_plus_nu(symbols, xi);
  if (std::abs(denom) < kDegenerateFloor) {
    throw DegenerateSymbol("|mu_hat + nu| vanishes at xi = " + std::to_string(xi));
  }
  const Complex inv = 1.0 / denom;
  const double abs_lambda = std::abs(lambda);

  switch (index) {
    case MultiplierIndex::M0:
      return {inv, false};
    case MultiplierIndex::M1: {
      Complex sum{};
      for (int k = 0; k <= symbols.order; ++k) {
        sum += lambda_weight(abs_lambda, k, symbols.order) * ipow(xi, k);
      }
      return {sum * inv, false};
    }
    case MultiplierIndex::M2:
      return {inv, true};
    case MultiplierIndex::M3: {
      Complex sum{};
      for (int k = 0; k <= symbols.order; ++k) {
        sum += lambda_weight(abs_lambda, k, symbols.order) * symbols.a_hat(k, xi) * ipow(xi, k);
      }
      return {sum * inv, false};
    }
    case MultiplierIndex::M4:
      return {symbols.mu_hat(xi) * inv, true};
    case MultiplierIndex::Sigma:
      return {(1.0 + lambda) * inv, false};
  }
  throw InvalidArgument("unknown multiplier family");
}

Complex scalar_symbol(const SymbolSet& symbols, MultiplierIndex index, Complex a, double xi, Complex lambda)
{
  const ScalarPrefactor pre = scalar_prefactor(symbols, index, xi, lambda);
  const Complex resolvent = 1.0 / (a + eta(symbols, xi) + lambda);
  return pre.value * (pre.compose_with_A ? a : Complex{1.0, 0.0}) * resolvent;
}

double mikhlin_bound(const ParameterizedSymbol& symbol,
                     const std::vector<Complex>& h_samples,
                     const std::vector<double>& xi_grid,
                     const ParameterizedSymbol& derivative)
{
  if (h_samples.empty() || xi_grid.empty()) {
    throw InvalidArgument("mikhlin_bound: empty sample set");
  }
  double bound = 0.0;
  for (const Complex h : h_samples) {
    for (const double xi : xi_grid) {
      const Complex value = symbol(h, xi);
      Complex deriv;
      if (derivative) {
        deriv = derivative(h, xi);
      } else {
        const double step = 1e-5 * std::abs(xi);
        if (step == 0.0) {
          deriv = 0.0;
        } else {
          deriv = (symbol(h, xi + step) - symbol(h, xi - step)) / (2.0 * step);
        }
      }
      const double weighted = std::abs(xi * deriv);
      if (!std::isfinite(std::abs(value)) || !std::isfinite(weighted)) {
        throw SymbolBlowup("symbol is not finite at h = (" + std::to_string(h.real()) + ", " +
                           std::to_string(h.imag()) + "), xi = " + std::to_string(xi));
      }
      bound = std::max({bound, std::abs(value), weighted});
    }
  }
  return bound;
}

} // namespace coe
