#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coe/symbols.hpp"
#include "coe/types.hpp"

namespace coe {

enum class OperatorKind
{
  DenseMatrix,
  PeriodicSturmLiouville,
  DirichletLaplacian2d,
};

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(std::string_view name);

/// Finite-dimensional stand-in for the operator A acting in E.
///
/// The two structured kinds are normal with a fast eigenbasis:
///   - periodic Sturm-Liouville -u'' + b u on [0, 1) with n points, diagonalized
///     by the DFT, eigenvalues b + 4 n^2 sin^2(pi j / n);
///   - Dirichlet -Delta + c on the unit square with ny x nz interior points,
///     diagonalized by the 2D DST-I.
/// Dense matrices must have spectrum in the open right half-plane.
///
/// Instances are immutable; copies share a resolvent factorization cache that
/// is safe for concurrent readers.
class OperatorRealization
{
public:
  static OperatorRealization dense(CMatrix matrix);
  static OperatorRealization scalar(Complex value);
  static OperatorRealization periodic_sturm_liouville(std::size_t n = 128, double shift = 1.0);
  static OperatorRealization dirichlet_laplacian_2d(std::size_t ny = 32, std::size_t nz = 32, double shift = 0.0);
  /// Each line holds one matrix row as comma separated "re,im" pairs.
  static OperatorRealization from_csv(const std::filesystem::path& path);

  OperatorKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double shift() const { return shift_; }
  std::pair<std::size_t, std::size_t> grid_shape() const { return {ny_, nz_}; }

  CVector apply(const CVector& v) const;
  /// Solves (A + z I) v = w.
  CVector resolvent_solve(Complex z, const CVector& w) const;
  CMatrix to_dense() const;
  /// Eigenvalues in no particular order (mode order for structured kinds).
  CVector eigenvalues() const;

  bool has_mode_basis() const { return kind_ != OperatorKind::DenseMatrix; }
  /// Coordinates in the orthogonal eigenbasis (structured kinds only).
  CVector to_modes(const CVector& v) const;
  CVector from_modes(const CVector& modes) const;
  const RVector& mode_eigenvalues() const { return mode_eigenvalues_; }

  const CMatrix& dense_matrix() const { return matrix_; }

private:
  struct ResolventCache;

  OperatorRealization() = default;
  void check_dim(const CVector& v) const;

  OperatorKind kind_ = OperatorKind::DenseMatrix;
  std::size_t dim_ = 0;
  double shift_ = 0.0;
  std::size_t ny_ = 0;
  std::size_t nz_ = 0;
  CMatrix matrix_;
  RVector mode_eigenvalues_;
  std::shared_ptr<ResolventCache> cache_;
};

struct PositivityReport
{
  Sector sector;
  /// sup over samples of (1 + |lambda|) ||(A + lambda)^{-1}||_2.
  double m_bound = 0.0;
  std::vector<std::pair<Complex, double>> samples;
};

/// Spectral-norm scan of (1 + |lambda|) ||(A + lambda)^{-1}|| over samples in
/// the sector. Samples outside the sector are rejected.
PositivityReport positivity_scan(const OperatorRealization& A, const Sector& sector,
                                 const std::vector<Complex>& lambda_samples);

/// Samples on both boundary rays and the positive real axis with moduli
/// log-spaced over [min_modulus, max_modulus].
std::vector<Complex> sector_samples(const Sector& sector, double min_modulus = 1e-2, double max_modulus = 1e6,
                                    std::size_t per_ray = 41);

} // namespace coe
