#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "coe/field.hpp"
#include "coe/operators.hpp"
#include "coe/spectral.hpp"
#include "coe/symbols.hpp"

namespace fixture {

using coe::CMatrix;
using coe::Complex;
using coe::kPi;

/// l = 2, b = (0, 0, -1), a_2 the odd exponential kernel -sign(x) e^{-|x|}, nu = 1, mu = 0.
inline coe::SymbolSet example43_symbols()
{
  coe::SymbolSet s;
  s.order = 2;
  s.b = {0.0, 0.0, -1.0};
  s.nu = 1.0;
  s.a_kernels = {std::nullopt, std::nullopt, coe::Kernel::exponential_paper(1.0)};
  s.validate();
  return s;
}

inline coe::OperatorRealization diag12()
{
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  return coe::OperatorRealization::dense(a);
}

/// The example-4.3 system on [-16 pi, 16 pi) with the condition already checked at phi2.
inline coe::DiscretizedProblem example43_problem(std::size_t n = 256, double phi2 = kPi / 2.0)
{
  coe::DiscretizedProblem problem(coe::Grid(16.0 * kPi, n), example43_symbols(), diag12());
  problem.check_condition(phi2);
  return problem;
}

/// l = 2, b = (0, 0, -1), nu = 1, no kernels: symbol xi^2.
inline coe::SymbolSet heat_symbols()
{
  coe::SymbolSet s;
  s.order = 2;
  s.b = {0.0, 0.0, -1.0};
  s.nu = 1.0;
  s.validate();
  return s;
}

/// l = 0 with constant symbol b0.
inline coe::SymbolSet constant_symbols(Complex b0, Complex nu = 1.0)
{
  coe::SymbolSet s;
  s.order = 0;
  s.b = {b0};
  s.nu = nu;
  s.validate();
  return s;
}

inline coe::DiscretizedProblem scalar_heat(double c, double half_width = 16.0 * kPi, std::size_t n = 512,
                                           double phi2 = kPi / 2.0)
{
  coe::DiscretizedProblem problem(coe::Grid(half_width, n), heat_symbols(), coe::OperatorRealization::scalar(c));
  problem.check_condition(phi2);
  return problem;
}

/// Real band-limited field: random amplitudes on wavenumbers 1..modes with 1/k decay.
inline coe::Field bandlimited(const coe::Grid& grid, std::size_t dim, std::size_t modes, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  coe::Field f(grid, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t k = 0; k <= modes; ++k) {
      const double a = g(rng) / static_cast<double>(k + 1);
      const double b = g(rng) / static_cast<double>(k + 1);
      const double w = kPi * static_cast<double>(k) / grid.half_width;
      for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) +=
          a * std::cos(w * x) + (k > 0 ? b * std::sin(w * x) : 0.0);
      }
    }
  }
  return f;
}

inline double max_abs_diff(const coe::Field& a, const coe::Field& b)
{
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

} // namespace fixture
