#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coe/spectral.hpp"
#include "coe/types.hpp"

namespace coe {

enum class SampleMode
{
  Exhaustive,
  Sampled,
};

std::string to_string(SampleMode mode);

/// Sign patterns for a Rademacher average over m terms: every pattern once
/// when 2^m <= 4096, otherwise `draws` (>= 4096) uniform random patterns.
struct RademacherSample
{
  std::size_t m = 0;
  SampleMode mode = SampleMode::Exhaustive;
  std::uint64_t seed = 0;
  std::vector<std::vector<signed char>> signs;

  static RademacherSample make(std::size_t m, std::uint64_t seed = 0, std::size_t draws = 4096);
};

/// (mean over patterns of ||sum_j s_j v_j||^p)^{1/p}, Euclidean norm.
double rademacher_lp_norm(const std::vector<CVector>& vectors, double p, const RademacherSample& sample);
double rademacher_lp_norm(const std::vector<CVector>& vectors, double p);

/// A member of an operator family: a dense matrix or a diagonal.
class FamilyOperator
{
public:
  static FamilyOperator matrix(CMatrix m);
  static FamilyOperator diagonal(CVector d);

  std::size_t dim() const;
  CVector apply(const CVector& v) const;
  /// Spectral norm and a unit vector attaining it.
  double norm() const;
  CVector maximizer() const;

private:
  FamilyOperator() = default;
  void analyse();

  bool is_diagonal_ = false;
  CMatrix matrix_;
  CVector diagonal_;
  double norm_ = 0.0;
  CVector maximizer_;
};

struct RBoundEstimate
{
  double value = 0.0; ///< lower estimate of the R-bound
  std::size_t tuples_tested = 0;
  SampleMode mode = SampleMode::Exhaustive;
  std::uint64_t seed = 0;
  double uniform_bound = 0.0; ///< max operator norm in the family

  nlohmann::ordered_json to_json() const;
};

/// Largest ratio of Rademacher norms sum T_j x_j over sum x_j found among
/// single-member tuples at the top singular vector and `trials` random tuples
/// of up to eight members with standard Gaussian x_j.
RBoundEstimate empirical_rbound(const std::vector<FamilyOperator>& family, double p, std::size_t trials,
                                std::uint64_t seed = 0);

/// ||sum alpha_j r_j x_j|| / ||sum beta_j r_j x_j|| for |alpha_j| <= |beta_j|.
double kahane_check(const std::vector<Complex>& alpha, const std::vector<Complex>& beta,
                    const std::vector<CVector>& vectors, double p);

/// (1 + lambda)(mu_hat(xi) + nu)^{-1} (A + eta(xi) + lambda)^{-1}.
FamilyOperator sigma_operator(const DiscretizedProblem& problem, double xi, Complex lambda);

/// Empirical R-bound of the sigma family. Samples are paired index by index
/// when both lists have equal length and crossed otherwise.
RBoundEstimate rpositivity_of_L(const DiscretizedProblem& problem, const std::vector<double>& xi_samples,
                                const std::vector<Complex>& lambda_samples, double p, std::size_t trials,
                                std::uint64_t seed = 0);

} // namespace coe
