#include "coe/operators.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "coe/errors.hpp"
#include "coe/fft.hpp"

namespace coe {

namespace {

constexpr std::size_t kMaxCachedFactorizations = 512;
constexpr double kSingularTolerance = 1e-13;

std::vector<double> split_numbers(const std::string& line)
{
  std::vector<double> values;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) {
    std::size_t used = 0;
    try {
      values.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw InvalidArgument("matrix csv: cannot parse '" + cell + "'");
    }
  }
  return values;
}

} // namespace

struct OperatorRealization::ResolventCache
{
  std::shared_mutex mutex;
  std::map<std::pair<double, double>, std::shared_ptr<const Eigen::PartialPivLU<CMatrix>>> factors;
};

std::string to_string(OperatorKind kind)
{
  switch (kind) {
    case OperatorKind::DenseMatrix:
      return "dense-matrix";
    case OperatorKind::PeriodicSturmLiouville:
      return "periodic-sturm-liouville";
    case OperatorKind::DirichletLaplacian2d:
      return "dirichlet-laplacian-2d";
  }
  return "?";
}

OperatorKind operator_kind_from_string(std::string_view name)
{
  if (name == "dense-matrix") {
    return OperatorKind::DenseMatrix;
  }
  if (name == "periodic-sturm-liouville") {
    return OperatorKind::PeriodicSturmLiouville;
  }
  if (name == "dirichlet-laplacian-2d") {
    return OperatorKind::DirichletLaplacian2d;
  }
  throw InvalidArgument("unknown operator kind '" + std::string(name) + "'");
}

OperatorRealization OperatorRealization::dense(CMatrix matrix)
{
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw InvalidArgument("dense operator must be a non-empty square matrix");
  }
  const Eigen::ComplexEigenSolver<CMatrix> solver(matrix, false);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    if (!(solver.eigenvalues()[i].real() > 0.0)) {
      throw InvalidArgument("dense operator has an eigenvalue with non-positive real part");
    }
  }
  OperatorRealization op;
  op.kind_ = OperatorKind::DenseMatrix;
  op.dim_ = static_cast<std::size_t>(matrix.rows());
  op.matrix_ = std::move(matrix);
  op.cache_ = std::make_shared<ResolventCache>();
  return op;
}

OperatorRealization OperatorRealization::scalar(Complex value)
{
  CMatrix m(1, 1);
  m(0, 0) = value;
  return dense(std::move(m));
}

OperatorRealization OperatorRealization::periodic_sturm_liouville(std::size_t n, double shift)
{
  if (n < 3) {
    throw InvalidArgument("periodic Sturm-Liouville realization needs at least 3 points");
  }
  OperatorRealization op;
  op.kind_ = OperatorKind::PeriodicSturmLiouville;
  op.dim_ = n;
  op.shift_ = shift;
  op.ny_ = n;
  op.nz_ = 1;
  op.mode_eigenvalues_.resize(static_cast<Eigen::Index>(n));
  const double nn = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::sin(kPi * static_cast<double>(j) / nn);
    op.mode_eigenvalues_[static_cast<Eigen::Index>(j)] = shift + 4.0 * nn * nn * s * s;
  }
  return op;
}

OperatorRealization OperatorRealization::dirichlet_laplacian_2d(std::size_t ny, std::size_t nz, double shift)
{
  if (ny == 0 || nz == 0) {
    throw InvalidArgument("Dirichlet Laplacian needs a non-empty interior grid");
  }
  OperatorRealization op;
  op.kind_ = OperatorKind::DirichletLaplacian2d;
  op.dim_ = ny * nz;
  op.shift_ = shift;
  op.ny_ = ny;
  op.nz_ = nz;
  op.mode_eigenvalues_.resize(static_cast<Eigen::Index>(op.dim_));
  const double hy = 1.0 / static_cast<double>(ny + 1);
  const double hz = 1.0 / static_cast<double>(nz + 1);
  for (std::size_t j = 0; j < ny; ++j) {
    const double sy = std::sin(kPi * static_cast<double>(j + 1) * hy / 2.0);
    for (std::size_t k = 0; k < nz; ++k) {
      const double sz = std::sin(kPi * static_cast<double>(k + 1) * hz / 2.0);
      op.mode_eigenvalues_[static_cast<Eigen::Index>(j * nz + k)] =
        shift + 4.0 * sy * sy / (hy * hy) + 4.0 * sz * sz / (hz * hz);
    }
  }
  return op;
}

OperatorRealization OperatorRealization::from_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot open matrix csv '" + path.string() + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    rows.push_back(split_numbers(line));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(2 * n)) {
      throw InvalidArgument("matrix csv row " + std::to_string(i) + " must hold " + std::to_string(n) +
                            " re,im pairs");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = Complex(rows[i][2 * j], rows[i][2 * j + 1]);
    }
  }
  return dense(std::move(m));
}

void OperatorRealization::check_dim(const CVector& v) const
{
  if (static_cast<std::size_t>(v.size()) != dim_) {
    throw InvalidArgument("vector of length " + std::to_string(v.size()) + " does not match operator dimension " +
                          std::to_string(dim_));
  }
}

CVector OperatorRealization::apply(const CVector& v) const
{
  check_dim(v);
  switch (kind_) {
    case OperatorKind::DenseMatrix:
      return matrix_ * v;
    case OperatorKind::PeriodicSturmLiouville: {
      const auto n = static_cast<Eigen::Index>(dim_);
      const double inv_h2 = static_cast<double>(n) * static_cast<double>(n);
      CVector out(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Complex left = v[(i + n - 1) % n];
        const Complex right = v[(i + 1) % n];
        out[i] = (2.0 * v[i] - left - right) * inv_h2 + shift_ * v[i];
      }
      return out;
    }
    case OperatorKind::DirichletLaplacian2d: {
      const auto ny = static_cast<Eigen::Index>(ny_);
      const auto nz = static_cast<Eigen::Index>(nz_);
      const double inv_hy2 = static_cast<double>((ny + 1) * (ny + 1));
      const double inv_hz2 = static_cast<double>((nz + 1) * (nz + 1));
      CVector out(v.size());
      for (Eigen::Index j = 0; j < ny; ++j) {
        for (Eigen::Index k = 0; k < nz; ++k) {
          const Eigen::Index idx = j * nz + k;
          const Complex up = j > 0 ? v[idx - nz] : Complex{};
          const Complex down = j + 1 < ny ? v[idx + nz] : Complex{};
          const Complex west = k > 0 ? v[idx - 1] : Complex{};
          const Complex east = k + 1 < nz ? v[idx + 1] : Complex{};
          out[idx] = (2.0 * v[idx] - up - down) * inv_hy2 + (2.0 * v[idx] - west - east) * inv_hz2 + shift_ * v[idx];
        }
      }
      return out;
    }
  }
  throw InvalidArgument("unknown operator kind");
}

CVector OperatorRealization::to_modes(const CVector& v) const
{
  check_dim(v);
  switch (kind_) {
    case OperatorKind::PeriodicSturmLiouville:
      return fft::forward(v);
    case OperatorKind::DirichletLaplacian2d: {
      const auto n = static_cast<Eigen::Index>(dim_);
      RVector re = v.real();
      RVector im = v.imag();
      fft::dst1_2d(re.data(), static_cast<int>(ny_), static_cast<int>(nz_));
      fft::dst1_2d(im.data(), static_cast<int>(ny_), static_cast<int>(nz_));
      CVector out(n);
      out.real() = re;
      out.imag() = im;
      return out;
    }
    case OperatorKind::DenseMatrix:
      break;
  }
  throw InvalidArgument("dense operators have no fast eigenbasis");
}

CVector OperatorRealization::from_modes(const CVector& modes) const
{
  check_dim(modes);
  switch (kind_) {
    case OperatorKind::PeriodicSturmLiouville:
      return fft::inverse(modes);
    case OperatorKind::DirichletLaplacian2d: {
      const auto n = static_cast<Eigen::Index>(dim_);
      RVector re = modes.real();
      RVector im = modes.imag();
      fft::dst1_2d(re.data(), static_cast<int>(ny_), static_cast<int>(nz_));
      fft::dst1_2d(im.data(), static_cast<int>(ny_), static_cast<int>(nz_));
      const double scale = 1.0 / (4.0 * static_cast<double>(ny_ + 1) * static_cast<double>(nz_ + 1));
      CVector out(n);
      out.real() = re * scale;
      out.imag() = im * scale;
      return out;
    }
    case OperatorKind::DenseMatrix:
      break;
  }
  throw InvalidArgument("dense operators have no fast eigenbasis");
}

CVector OperatorRealization::resolvent_solve(Complex z, const CVector& w) const
{
  check_dim(w);
  if (has_mode_basis()) {
    CVector modes = to_modes(w);
    for (Eigen::Index k = 0; k < modes.size(); ++k) {
      const Complex d = mode_eigenvalues_[k] + z;
      if (std::abs(d) < kSingularTolerance * std::max(1.0, std::abs(mode_eigenvalues_[k]))) {
        throw SingularResolvent("A + z I is singular for z = (" + std::to_string(z.real()) + ", " +
                                std::to_string(z.imag()) + ")");
      }
      modes[k] /= d;
    }
    return from_modes(modes);
  }

  const std::pair<double, double> key{z.real(), z.imag()};
  std::shared_ptr<const Eigen::PartialPivLU<CMatrix>> lu;
  {
    std::shared_lock lock(cache_->mutex);
    if (auto it = cache_->factors.find(key); it != cache_->factors.end()) {
      lu = it->second;
    }
  }
  if (!lu) {
    CMatrix shifted = matrix_;
    shifted.diagonal().array() += z;
    auto fresh = std::make_shared<const Eigen::PartialPivLU<CMatrix>>(shifted);
    if (!(fresh->rcond() > kSingularTolerance)) {
      throw SingularResolvent("A + z I is singular for z = (" + std::to_string(z.real()) + ", " +
                              std::to_string(z.imag()) + ")");
    }
    std::unique_lock lock(cache_->mutex);
    if (cache_->factors.size() >= kMaxCachedFactorizations) {
      cache_->factors.clear();
    }
    cache_->factors.emplace(key, fresh);
    lu = std::move(fresh);
  }
  return lu->solve(w);
}

CMatrix OperatorRealization::to_dense() const
{
  if (kind_ == OperatorKind::DenseMatrix) {
    return matrix_;
  }
  const auto n = static_cast<Eigen::Index>(dim_);
  CMatrix out(n, n);
  CVector e = CVector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    out.col(j) = apply(e);
    e[j] = 0.0;
  }
  return out;
}

CVector OperatorRealization::eigenvalues() const
{
  if (has_mode_basis()) {
    return mode_eigenvalues_.cast<Complex>();
  }
  return Eigen::ComplexEigenSolver<CMatrix>(matrix_, false).eigenvalues();
}

PositivityReport positivity_scan(const OperatorRealization& A, const Sector& sector,
                                 const std::vector<Complex>& lambda_samples)
{
  if (lambda_samples.empty()) {
    throw InvalidArgument("positivity_scan: empty lambda sample list");
  }
  PositivityReport report{sector, 0.0, {}};
  report.samples.reserve(lambda_samples.size());
  for (const Complex lambda : lambda_samples) {
    if (!sector.contains(lambda)) {
      throw InvalidArgument("positivity_scan: sample lies outside the sector");
    }
    double resolvent_norm = 0.0;
    if (A.has_mode_basis()) {
      // Normal operator: the norm is the reciprocal distance to the spectrum.
      double dist = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < A.mode_eigenvalues().size(); ++k) {
        dist = std::min(dist, std::abs(A.mode_eigenvalues()[k] + lambda));
      }
      resolvent_norm = 1.0 / dist;
    } else {
      CMatrix shifted = A.dense_matrix();
      shifted.diagonal().array() += lambda;
      const Eigen::BDCSVD<CMatrix> svd(shifted);
      resolvent_norm = 1.0 / svd.singularValues().minCoeff();
    }
    const double value = (1.0 + std::abs(lambda)) * resolvent_norm;
    report.samples.emplace_back(lambda, value);
    report.m_bound = std::max(report.m_bound, value);
  }
  return report;
}

std::vector<Complex> sector_samples(const Sector& sector, double min_modulus, double max_modulus, std::size_t per_ray)
{
  if (!(min_modulus > 0.0) || !(max_modulus >= min_modulus) || per_ray == 0) {
    throw InvalidArgument("sector_samples: invalid modulus range");
  }
  std::vector<double> moduli;
  const double lo = std::log10(min_modulus);
  const double hi = std::log10(max_modulus);
  for (std::size_t i = 0; i < per_ray; ++i) {
    const double frac = per_ray == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(per_ray - 1);
    moduli.push_back(std::pow(10.0, lo + frac * (hi - lo)));
  }
  std::vector<Complex> out;
  std::vector<double> angles{0.0};
  if (sector.angle > 0.0) {
    angles.push_back(sector.angle);
    angles.push_back(-sector.angle);
  }
  for (const double angle : angles) {
    for (const double r : moduli) {
      out.push_back(std::polar(r, angle));
    }
  }
  return out;
}

} // namespace coe
