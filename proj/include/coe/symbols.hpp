#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coe/types.hpp"

namespace coe {

enum class KernelKind
{
  DiracScaled,         ///< amplitude * delta(x); symbol is the constant amplitude
  ExponentialPaper,    ///< symbol 2i xi / (k^2 + xi^2), odd and purely imaginary
  ExponentialStandard, ///< transform of e^{-k|x|}: 2k / (k^2 + xi^2)
  Gaussian,            ///< amplitude * e^{-k x^2}
  Custom,              ///< user supplied closed form
};

KernelKind kernel_kind_from_string(std::string_view name);
std::string to_string(KernelKind kind);

/// A convolution kernel described by its closed-form Fourier transform.
///
/// The transform convention is f_hat(xi) = int f(x) e^{-i xi x} dx. All
/// built-in kinds carry an amplitude multiplier; `rate` is the decay rate k.
class Kernel
{
public:
  using Symbol = std::function<Complex(double)>;

  static Kernel dirac(double amplitude = 1.0);
  static Kernel exponential_paper(double rate, double amplitude = 1.0);
  static Kernel exponential_standard(double rate, double amplitude = 1.0);
  static Kernel gaussian(double rate, double amplitude = 1.0);
  /// Custom kernels may omit the derivative; it then falls back to central
  /// differences with step 1e-5 * max(|xi|, 1).
  static Kernel custom(Symbol fourier, Symbol fourier_deriv = {});

  KernelKind kind() const { return kind_; }
  double rate() const { return rate_; }
  double amplitude() const { return amplitude_; }

  Complex fourier(double xi) const;
  Complex fourier_deriv(double xi) const;

private:
  Kernel(KernelKind kind, double rate, double amplitude);

  KernelKind kind_;
  double rate_ = 1.0;
  double amplitude_ = 1.0;
  Symbol custom_;
  Symbol custom_deriv_;
};

Complex kernel_fourier(const Kernel& kernel, double xi);

/// Scalar data of the convolution operator equation: order l, coefficients
/// b_0..b_l, nu, and optional kernels a_0..a_l and mu. Absent kernels are the
/// zero symbol.
struct SymbolSet
{
  int order = 0;
  std::vector<Complex> b;
  Complex nu{1.0, 0.0};
  std::vector<std::optional<Kernel>> a_kernels;
  std::optional<Kernel> mu_kernel;

  /// Checks b.size() == order + 1 and pads a_kernels to the same length.
  void validate();
  SymbolSet validated() const;

  Complex a_hat(int k, double xi) const;
  Complex a_hat_deriv(int k, double xi) const;
  Complex mu_hat(double xi) const;
  Complex mu_hat_deriv(double xi) const;
  bool has_kernel(int k) const;
};

/// mu_hat(xi) + nu, the scalar factor in front of A.
Complex mu_plus_nu(const SymbolSet& symbols, double xi);

/// N(xi) = sum_k (b_k + a_k_hat(xi)) (i xi)^k.
Complex char_poly_N(const SymbolSet& symbols, double xi);

/// eta(xi) = N(xi) / (mu_hat(xi) + nu). Throws DegenerateSymbol when the
/// denominator falls below kDegenerateFloor.
Complex eta(const SymbolSet& symbols, double xi);

/// Weight |lambda|^{1 - k/l} of the k-th term in the coercive estimate. For
/// l = 0 the single k = 0 term has weight |lambda|.
double lambda_weight(double abs_lambda, int k, int order);

/// Closed sector S_phi = {z != 0 : |arg z| <= phi} with 0 always a member.
struct Sector
{
  double angle = 0.0;

  explicit Sector(double phi = 0.0);
  bool contains(Complex z, double angle_tol = 1e-12) const;
};

/// Log-spaced grid on [lo, hi] together with its mirror image on the negative
/// axis; zero is never included. Refining with 2*points_per_side - 1 keeps
/// every old point.
std::vector<double> log_xi_grid(double lo = 1e-3, double hi = 1e3, std::size_t points_per_side = 2001);

struct ConditionReport
{
  double c_mu = 0.0;
  double c_n = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  std::array<bool, 4> pass{};

  bool all_pass() const { return pass[0] && pass[1] && pass[2] && pass[3]; }
  /// min(C_mu, C_N); its inverse bounds the scalar multipliers.
  double m_inverse() const { return std::min(c_mu, c_n); }
};

/// Grid estimates of the constants C_mu, C_N, C_1, C_2 and of phi_1, with the
/// pass flag of each clause for the requested lambda-sector angle phi2.
ConditionReport check_condition31(const SymbolSet& symbols, const std::vector<double>& xi_grid, double phi2);

enum class MultiplierIndex
{
  M0,
  M1,
  M2,
  M3,
  M4,
  Sigma,
};

MultiplierIndex multiplier_from_string(std::string_view name);
std::string to_string(MultiplierIndex index);

struct ScalarPrefactor
{
  Complex value;
  /// The family also carries a factor A in front of the resolvent (m2, m4).
  bool compose_with_A = false;
};

/// Scalar coefficient in front of [A + eta(xi) + lambda]^{-1} for the family.
ScalarPrefactor scalar_prefactor(const SymbolSet& symbols, MultiplierIndex index, double xi, Complex lambda);

/// The family reduced to one eigenvalue `a` of A: prefactor * (a if composed)
/// / (a + eta(xi) + lambda). For diagonalizable A the operator norm of m_i is
/// the maximum of this over the spectrum.
Complex scalar_symbol(const SymbolSet& symbols, MultiplierIndex index, Complex a, double xi, Complex lambda);

using ParameterizedSymbol = std::function<Complex(Complex h, double xi)>;

/// sup over h and xi of max(|m_h(xi)|, |xi m_h'(xi)|). The derivative is the
/// central difference with relative step 1e-5 unless `derivative` is given.
double mikhlin_bound(const ParameterizedSymbol& symbol,
                     const std::vector<Complex>& h_samples,
                     const std::vector<double>& xi_grid,
                     const ParameterizedSymbol& derivative = {});

} // namespace coe
