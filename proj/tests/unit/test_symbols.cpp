#include <cmath>
#include <random>

#include <doctest.h>

#include "coe/errors.hpp"
#include "coe/symbols.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using coe::Complex;
using coe::Kernel;
using coe::kPi;
using coe::MultiplierIndex;

TEST_CASE("kernel symbols at reference points")
{
  CHECK(std::abs(coe::kernel_fourier(Kernel::exponential_paper(1.0), 1.0) - Complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(coe::kernel_fourier(Kernel::exponential_paper(1.0), 0.0)) == 0.0);
  CHECK(std::abs(coe::kernel_fourier(Kernel::exponential_standard(1.0), 1.0) - 1.0) < 1e-15);
  CHECK(std::abs(coe::kernel_fourier(Kernel::dirac(2.5), 7.0) - 2.5) < 1e-15);
}

TEST_CASE("standard exponential kernel matches quadrature of its transform")
{
  for (const double xi : {0.0, 0.5, 1.0, 3.0}) {
    const double q = 2.0 * oracle::adaptive_simpson([xi](double x) { return std::exp(-x) * std::cos(xi * x); }, 0.0,
                                                    40.0);
    CHECK(std::abs(Kernel::exponential_standard(1.0).fourier(xi) - q) < 1e-10);
  }
}

TEST_CASE("odd exponential kernel matches quadrature of -sign(x) e^{-k|x|}")
{
  for (const double k : {0.5, 1.0, 2.0}) {
    for (const double xi : {-2.0, 0.3, 1.0, 4.0}) {
      CHECK(std::abs(Kernel::exponential_paper(k).fourier(xi) - oracle::odd_exponential_transform_quadrature(k, xi)) <
            1e-9);
    }
  }
}

TEST_CASE("gaussian kernel matches quadrature")
{
  const Kernel g = Kernel::gaussian(0.7, 1.3);
  for (const double xi : {0.0, 1.0, 2.5}) {
    const double q =
      1.3 * oracle::adaptive_simpson([xi](double x) { return std::exp(-0.7 * x * x) * std::cos(xi * x); }, -30.0, 30.0);
    CHECK(std::abs(g.fourier(xi) - q) < 1e-10);
  }
}

TEST_CASE("kernel derivatives agree with central differences")
{
  const std::vector<Kernel> kernels{Kernel::exponential_paper(1.0), Kernel::exponential_standard(2.0),
                                    Kernel::gaussian(0.5), Kernel::dirac(3.0)};
  for (const Kernel& k : kernels) {
    for (const double xi : coe::log_xi_grid(1e-2, 1e2, 41)) {
      const double h = 1e-5 * std::max(std::abs(xi), 1.0);
      const Complex fd = (k.fourier(xi + h) - k.fourier(xi - h)) / (2.0 * h);
      const Complex exact = k.fourier_deriv(xi);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(std::abs(exact), 1e-3));
    }
  }
}

TEST_CASE("custom kernel falls back to finite differences")
{
  const Kernel k = Kernel::custom([](double xi) { return Complex(std::sin(xi), 0.0); });
  CHECK(std::abs(k.fourier_deriv(0.4) - std::cos(0.4)) < 1e-8);
}

TEST_CASE("real kernels have Hermitian symbols")
{
  const std::vector<Kernel> kernels{Kernel::exponential_paper(1.0), Kernel::exponential_standard(1.5),
                                    Kernel::gaussian(2.0)};
  for (const Kernel& k : kernels) {
    for (const double xi : coe::log_xi_grid(1e-3, 1e3, 101)) {
      CHECK(std::abs(k.fourier(-xi) - std::conj(k.fourier(xi))) <= 1e-12);
    }
  }
}

TEST_CASE("characteristic function N")
{
  CHECK(std::abs(coe::char_poly_N(fixture::heat_symbols(), 2.0) - 4.0) < 1e-14);
  CHECK(std::abs(coe::char_poly_N(fixture::example43_symbols(), 1.0) - Complex(1.0, -1.0)) < 1e-14);
  coe::SymbolSet s;
  s.order = 1;
  s.b = {Complex(0.5, 0.25), 2.0};
  s.a_kernels = {Kernel::exponential_standard(1.0), std::nullopt};
  s.validate();
  CHECK(std::abs(coe::char_poly_N(s, 0.0) - (Complex(0.5, 0.25) + 2.0)) < 1e-14);
}

TEST_CASE("eta")
{
  CHECK(std::abs(coe::eta(fixture::example43_symbols(), 1.0) - Complex(1.0, -1.0)) < 1e-14);
  CHECK(std::abs(coe::eta(fixture::example43_symbols(), 0.0)) == 0.0);
  CHECK(std::abs(coe::eta(fixture::constant_symbols(1.0), 5.0) - 1.0) < 1e-15);
  for (const double xi : {0.3, 2.0, 7.0}) {
    const Complex expected = xi * xi - Complex(0.0, 2.0) * xi * xi * xi / (1.0 + xi * xi);
    CHECK(std::abs(coe::eta(fixture::example43_symbols(), xi) - expected) < 1e-12 * std::abs(expected));
  }
  CHECK_THROWS_AS(coe::eta(fixture::constant_symbols(1.0, 0.0), 1.0), coe::DegenerateSymbol);
}

TEST_CASE("symbol set validation")
{
  coe::SymbolSet s;
  s.order = 2;
  s.b = {1.0, 2.0};
  CHECK_THROWS_AS(s.validate(), coe::InvalidArgument);
  s.b = {1.0, 2.0, 3.0};
  s.validate();
  CHECK(s.a_kernels.size() == 3);
  CHECK(std::abs(s.a_hat(1, 3.0)) == 0.0);
}

TEST_CASE("sector membership")
{
  const coe::Sector s(kPi / 4.0);
  CHECK(s.contains(0.0));
  CHECK(s.contains(std::polar(3.0, kPi / 4.0)));
  CHECK(!s.contains(std::polar(3.0, kPi / 4.0 + 1e-6)));
  CHECK(s.contains(std::polar(3.0, -kPi / 4.0)));
  CHECK(!s.contains(-1.0));
  CHECK_THROWS_AS(coe::Sector{kPi}, coe::InvalidArgument);
  CHECK_THROWS_AS(coe::Sector{-0.1}, coe::InvalidArgument);
}

TEST_CASE("condition check on the exponential-kernel system")
{
  const coe::ConditionReport r = coe::check_condition31(fixture::example43_symbols(), coe::log_xi_grid(), kPi / 2.0);
  CHECK(std::abs(r.c_mu - 1.0) <= 1e-12);
  CHECK(r.c_n >= 0.99);
  CHECK(r.c_n <= 1.01);
  CHECK(std::abs(r.phi1 - kPi / 4.0) <= 0.02);
  CHECK(r.all_pass());
  CHECK(r.c1 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.c2 == 0.0);
}

TEST_CASE("condition check detects a vanishing mu_hat + nu")
{
  const coe::ConditionReport r = coe::check_condition31(fixture::constant_symbols(1.0, 0.0), coe::log_xi_grid(), 0.5);
  CHECK(!r.pass[0]);
  CHECK(!r.all_pass());
}

TEST_CASE("condition check with a first-order term: clause 2 holds, clause 3 hinges on the sector")
{
  coe::SymbolSet s;
  s.order = 2;
  s.b = {0.0, 1.0, -1.0};
  s.validate();
  // N = xi^2 + i xi, so |N| >= xi^2 and arg N tends to pi/2 as xi -> 0.
  const coe::ConditionReport r = coe::check_condition31(s, coe::log_xi_grid(), kPi / 2.0);
  CHECK(r.pass[1]);
  CHECK(r.c_n == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.phi1 == doctest::Approx(kPi / 2.0).epsilon(1e-2));
  CHECK(r.phi1 < kPi / 2.0);
  CHECK(coe::check_condition31(s, coe::log_xi_grid(), kPi / 2.0 - 0.05).pass[2]);
  CHECK(!coe::check_condition31(s, coe::log_xi_grid(), kPi / 2.0 + 0.05).pass[2]);
}

TEST_CASE("condition check refinement is monotone")
{
  const std::vector<coe::SymbolSet> sets{fixture::example43_symbols(), fixture::heat_symbols()};
  for (const coe::SymbolSet& s : sets) {
    coe::ConditionReport coarse = coe::check_condition31(s, coe::log_xi_grid(1e-3, 1e3, 101), kPi / 2.0);
    for (const std::size_t pps : {201, 401, 801}) {
      const coe::ConditionReport fine = coe::check_condition31(s, coe::log_xi_grid(1e-3, 1e3, pps), kPi / 2.0);
      CHECK(fine.c_mu <= coarse.c_mu);
      CHECK(fine.c_n <= coarse.c_n);
      CHECK(fine.c1 >= coarse.c1);
      CHECK(fine.c2 >= coarse.c2);
      CHECK(fine.phi1 >= coarse.phi1);
      coarse = fine;
    }
  }
}

TEST_CASE("scalar prefactors")
{
  const coe::SymbolSet heat = fixture::heat_symbols();
  CHECK(std::abs(coe::scalar_prefactor(heat, MultiplierIndex::M0, 3.0, 7.0).value - 1.0) < 1e-15);
  CHECK(std::abs(coe::scalar_prefactor(heat, MultiplierIndex::M1, 1.0, 4.0).value - Complex(3.0, 2.0)) < 1e-14);
  CHECK(std::abs(coe::scalar_prefactor(heat, MultiplierIndex::Sigma, 2.0, 0.0).value - 1.0) < 1e-15);
  CHECK(coe::scalar_prefactor(heat, MultiplierIndex::M2, 2.0, 1.0).compose_with_A);
}

TEST_CASE("weighted sum is bounded by l(|lambda| + |xi|^l)")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logu(-4.0, 4.0);
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  for (const int l : {1, 2, 4}) {
    coe::SymbolSet s;
    s.order = l;
    s.b.assign(static_cast<std::size_t>(l) + 1, 0.0);
    s.b.back() = 1.0;
    s.validate();
    for (int trial = 0; trial < 3400; ++trial) {
      const double xi = (trial % 2 == 0 ? 1.0 : -1.0) * std::pow(10.0, logu(rng));
      const Complex lambda = std::polar(std::pow(10.0, logu(rng)), angle(rng));
      const double lhs = std::abs(coe::scalar_prefactor(s, MultiplierIndex::M1, xi, lambda).value);
      const double rhs = l * (std::abs(lambda) + std::pow(std::abs(xi), l));
      REQUIRE(lhs <= rhs * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("Mikhlin bounds of reference symbols")
{
  const std::vector<Complex> one{0.0};
  const std::vector<double> xi = coe::log_xi_grid(1e-4, 1e4, 2001);
  CHECK(coe::mikhlin_bound([](Complex, double) { return Complex(2.0, -1.0); }, one, xi) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK(coe::mikhlin_bound([](Complex, double x) { return Complex(x * x / (1.0 + x * x)); }, one, xi) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(coe::mikhlin_bound([](Complex, double x) { return Complex(0.0, x / std::abs(x)); }, one, xi) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Mikhlin bounds of the multiplier families are uniform in lambda")
{
  const coe::SymbolSet s = fixture::example43_symbols();
  const coe::Sector sector(kPi / 2.0);
  const std::vector<double> xi = coe::log_xi_grid(1e-3, 1e3, 401);
  const std::vector<Complex> base = coe::sector_samples(sector, 1e-2, 1e4, 25);
  std::vector<Complex> extended = base;
  for (const Complex z : coe::sector_samples(sector, 1e4, 1e5, 7)) {
    extended.push_back(z);
  }
  for (const MultiplierIndex idx :
       {MultiplierIndex::M0, MultiplierIndex::M1, MultiplierIndex::M2, MultiplierIndex::M3, MultiplierIndex::M4}) {
    double b0 = 0.0;
    double b1 = 0.0;
    for (const Complex a : {Complex(1.0), Complex(2.0)}) {
      const coe::ParameterizedSymbol m = [&](Complex h, double x) { return coe::scalar_symbol(s, idx, a, x, h); };
      b0 = std::max(b0, coe::mikhlin_bound(m, base, xi));
      b1 = std::max(b1, coe::mikhlin_bound(m, extended, xi));
    }
    INFO("family " << coe::to_string(idx) << " bound " << b0 << " extended " << b1);
    CHECK(std::isfinite(b0));
    CHECK(std::abs(b1 - b0) <= 0.05 * std::max(b0, 1e-300));
  }
}

TEST_CASE("log xi grid refinement keeps every old point")
{
  const std::vector<double> coarse = coe::log_xi_grid(1e-2, 1e2, 11);
  const std::vector<double> fine = coe::log_xi_grid(1e-2, 1e2, 21);
  for (const double x : coarse) {
    bool found = false;
    for (const double y : fine) {
      found = found || std::abs(x - y) <= 1e-12 * std::abs(x);
    }
    CHECK(found);
  }
  for (const double x : fine) {
    CHECK(x != 0.0);
  }
}
