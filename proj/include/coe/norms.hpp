#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "coe/field.hpp"
#include "coe/operators.hpp"

namespace coe {

/// (h sum_i ||u_i||_E^p)^{1/p}, ||.||_E Euclidean.
double lp_norm(const Field& field, double p);

double sup_norm(const Field& field);

/// Inner L_q in x, outer L_p in t, rectangle rule in both variables.
double mixed_norm(const SpaceTimeField& field, double p, double q);

/// ||u|| + ||Au|| + sum_{k=0}^{l} ||u^{(k)}||, every term in L_p.
double sobolev_norm(const Field& field, int order, double p, const OperatorRealization& A);

/// Index of the dyadic annulus holding frequency xi: 0 for |xi| <= 1, j for
/// 2^{j-1} < |xi| <= 2^j.
int dyadic_index(double xi);

/// Sharp-cutoff Littlewood-Paley projection onto annulus j.
Field dyadic_block(const Field& field, int j);

/// ||S_0 u||_q + (sum_{j>=1} (2^{js} ||Delta_j u||_q)^p)^{1/p}.
double besov_norm(const Field& field, double s, double q, double p, std::optional<double> m_cap = std::nullopt);

struct TraceExponents
{
  double s0;     ///< l (2p - 1) / (2p)
  double s1;     ///< l (p - 1) / (2p)
  double theta0; ///< 1 / (2p)
  double theta1; ///< (p + 1) / (2p)
};

TraceExponents trace_exponents(int order, double p);

/// Smoothness l / p' (p' = p / (p - 1)) of admissible initial data for the
/// parabolic problem.
double initial_data_exponent(int order, double p);

struct TraceNorms
{
  double x0 = 0.0;
  double x1 = 0.0;
};

/// Trace-space norms of boundary data. The operator part uses the surrogate
/// ||u_i||^{1-theta} ||A u_i||^{theta} pointwise, measured in L_q.
TraceNorms trace_space_norms(const Field& u0, const Field& u1, int order, double p, double q,
                             const OperatorRealization& A);

enum class NormKind
{
  Lp,
  MixedPQ,
  Sobolev,
  Besov,
  TraceX0,
  TraceX1,
};

NormKind norm_kind_from_string(std::string_view name);

struct NormSpec
{
  NormKind kind = NormKind::Lp;
  double p = 2.0;
  double q = 2.0;
  double smoothness = 1.0;
  int order = 0;

  /// 1 < p, q < infinity; besov additionally needs s > 0.
  void validate() const;
};

} // namespace coe
