#include <cmath>
#include <fstream>

#include <doctest.h>

#include "coe/errors.hpp"
#include "coe/operators.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using coe::CMatrix;
using coe::Complex;
using coe::CVector;
using coe::kPi;
using coe::OperatorRealization;

namespace {

std::vector<OperatorRealization> corpus()
{
  CMatrix m(3, 3);
  m << Complex(2, 0), Complex(0.5, 0.1), Complex(0, 0), Complex(0, 0.2), Complex(3, 0), Complex(1, 0), Complex(0.1, 0),
    Complex(0, 0), Complex(1.5, 0.5);
  return {OperatorRealization::dense(m), OperatorRealization::periodic_sturm_liouville(16, 1.0),
          OperatorRealization::dirichlet_laplacian_2d(4, 5, 0.5), fixture::diag12()};
}

} // namespace

TEST_CASE("apply on reference operators")
{
  CVector v(2);
  v << 1.0, 1.0;
  CVector expected(2);
  expected << 1.0, 2.0;
  CHECK((fixture::diag12().apply(v) - expected).norm() < 1e-15);

  const OperatorRealization sl = OperatorRealization::periodic_sturm_liouville(4, 0.0);
  CHECK(sl.apply(CVector::Ones(4)).norm() < 1e-12);

  const OperatorRealization lap = OperatorRealization::dirichlet_laplacian_2d(3, 3, 0.0);
  const double h = 0.25;
  CVector mode(9);
  for (int iy = 0; iy < 3; ++iy) {
    for (int iz = 0; iz < 3; ++iz) {
      mode[iy * 3 + iz] = std::sin(kPi * (iy + 1) * h) * std::sin(kPi * (iz + 1) * h);
    }
  }
  const double eig = 2.0 / (h * h) * (2.0 - 2.0 * std::cos(kPi * h));
  CHECK((lap.apply(mode) - eig * mode).norm() < 1e-10 * eig);
}

TEST_CASE("structured eigenvalues match a dense eigendecomposition")
{
  for (const OperatorRealization& A :
       {OperatorRealization::periodic_sturm_liouville(12, 0.7), OperatorRealization::dirichlet_laplacian_2d(4, 3, 2.0)}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.to_dense().real());
    std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const CVector fast = A.eigenvalues();
    std::vector<double> mine;
    for (Eigen::Index i = 0; i < fast.size(); ++i) {
      mine.push_back(fast[i].real());
    }
    std::sort(mine.begin(), mine.end());
    REQUIRE(mine.size() == dense.size());
    for (std::size_t i = 0; i < mine.size(); ++i) {
      CHECK(std::abs(mine[i] - dense[i]) < 1e-9 * std::max(1.0, dense[i]));
    }
    CHECK(*std::min_element(mine.begin(), mine.end()) >= A.shift() - 1e-12);
  }
}

TEST_CASE("Sturm-Liouville matrix is the shifted circulant second difference")
{
  const std::size_t n = 6;
  const OperatorRealization A = OperatorRealization::periodic_sturm_liouville(n, 1.5);
  const CMatrix d = A.to_dense();
  const double n2 = static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(d(i, i) - (2.0 * n2 + 1.5)) < 1e-12);
    CHECK(std::abs(d(i, (i + 1) % n) + n2) < 1e-12);
    CHECK(std::abs(d(i, (i + n - 1) % n) + n2) < 1e-12);
  }
  CHECK((d - d.adjoint()).norm() < 1e-12);
}

TEST_CASE("resolvent solve on reference operators")
{
  CVector w(2);
  w << 5.0, 10.0;
  CVector x = OperatorRealization::dense(2.0 * CMatrix::Identity(2, 2)).resolvent_solve(3.0, w);
  CHECK(std::abs(x[0] - 1.0) < 1e-15);
  CHECK(std::abs(x[1] - 2.0) < 1e-15);
  w << 1.0, 1.0;
  x = fixture::diag12().resolvent_solve(1.0, w);
  CHECK(std::abs(x[0] - 0.5) < 1e-15);
  CHECK(std::abs(x[1] - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("structured resolvents match the dense LU oracle")
{
  const OperatorRealization sl = OperatorRealization::periodic_sturm_liouville(64, 1.0);
  const CVector w = oracle::random_complex(64, 3);
  CMatrix shifted = sl.to_dense();
  shifted.diagonal().array() += 1.0;
  CHECK((sl.resolvent_solve(1.0, w) - oracle::lu_solve(shifted, w)).norm() < 1e-10 * w.norm());

  const OperatorRealization lap = OperatorRealization::dirichlet_laplacian_2d(6, 7, 0.0);
  const Complex z(0.3, 2.0);
  const CVector w2 = oracle::random_complex(42, 4);
  CMatrix m = lap.to_dense();
  m.diagonal().array() += z;
  CHECK((lap.resolvent_solve(z, w2) - oracle::lu_solve(m, w2)).norm() < 1e-10 * w2.norm());
}

TEST_CASE("resolvent identity and inversion")
{
  unsigned seed = 100;
  for (const OperatorRealization& A : corpus()) {
    for (const auto& [z1, z2] : {std::pair{Complex(0.5, 1.0), Complex(3.0, -2.0)}, std::pair{Complex(10.0, 0.0),
                                                                                             Complex(0.1, 0.1)}}) {
      const CVector w = oracle::random_complex(A.dim(), seed++);
      const CVector lhs = A.resolvent_solve(z1, w) - A.resolvent_solve(z2, w);
      const CVector rhs = (z2 - z1) * A.resolvent_solve(z1, A.resolvent_solve(z2, w));
      CHECK((lhs - rhs).norm() <= 1e-8 * std::max(1.0, lhs.norm()));
      const CVector r = A.resolvent_solve(z1, w);
      CHECK((A.apply(r) + z1 * r - w).norm() <= 1e-10 * w.norm() * std::max(1.0, A.to_dense().norm() / 100.0));
    }
  }
}

TEST_CASE("mode transforms invert each other")
{
  for (const OperatorRealization& A :
       {OperatorRealization::periodic_sturm_liouville(16, 1.0), OperatorRealization::dirichlet_laplacian_2d(5, 4, 0.0)}) {
    const CVector v = oracle::random_complex(A.dim(), 9);
    CHECK((A.from_modes(A.to_modes(v)) - v).norm() < 1e-12 * v.norm());
    const CVector modes = A.to_modes(v);
    CVector scaled = modes;
    for (Eigen::Index i = 0; i < scaled.size(); ++i) {
      scaled[i] *= A.mode_eigenvalues()[i];
    }
    CHECK((A.from_modes(scaled) - A.apply(v)).norm() < 1e-9 * A.apply(v).norm());
  }
}

TEST_CASE("dense construction rejects spectra outside the right half-plane")
{
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(OperatorRealization::dense(m), coe::InvalidArgument);
  CHECK_THROWS_AS(OperatorRealization::dense(CMatrix(2, 3)), coe::InvalidArgument);
}

TEST_CASE("dense matrices load from CSV")
{
  const auto path = std::filesystem::temp_directory_path() / "coe_operator_test.csv";
  {
    std::ofstream out(path);
    out << "1,0,0.5,0\n0,0,2,1\n";
  }
  const OperatorRealization A = OperatorRealization::from_csv(path);
  CHECK(A.dim() == 2);
  CHECK(std::abs(A.dense_matrix()(0, 1) - 0.5) < 1e-15);
  CHECK(std::abs(A.dense_matrix()(1, 1) - Complex(2.0, 1.0)) < 1e-15);
  std::filesystem::remove(path);
}

TEST_CASE("positivity scans")
{
  const coe::PositivityReport r = coe::positivity_scan(fixture::diag12(), coe::Sector(0.0),
                                                       coe::sector_samples(coe::Sector(0.0), 1e-3, 1e6, 60));
  CHECK(r.m_bound == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& [lambda, value] : r.samples) {
    CHECK(value <= r.m_bound);
  }

  const coe::Sector quarter(kPi / 4.0);
  const coe::PositivityReport one =
    coe::positivity_scan(OperatorRealization::scalar(1.0), quarter, coe::sector_samples(quarter, 1e-3, 1e6, 80));
  CHECK(one.m_bound <= 2.0);
  CHECK(one.m_bound >= 1.0);

  CHECK_THROWS_AS(coe::positivity_scan(fixture::diag12(), quarter, {}), coe::InvalidArgument);
  CHECK_THROWS_AS(coe::positivity_scan(fixture::diag12(), quarter, {Complex(-1.0, 0.0)}), coe::InvalidArgument);
}

TEST_CASE("positivity bound is non-decreasing as samples are added")
{
  const coe::Sector s(kPi / 3.0);
  const std::vector<Complex> all = coe::sector_samples(s, 1e-2, 1e4, 30);
  double previous = 0.0;
  const OperatorRealization A = OperatorRealization::periodic_sturm_liouville(16, 0.5);
  for (std::size_t k = 1; k <= all.size(); k += 7) {
    const std::vector<Complex> part(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    const double m = coe::positivity_scan(A, s, part).m_bound;
    CHECK(m >= previous);
    previous = m;
  }
}
