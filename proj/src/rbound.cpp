#include "coe/rbound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "coe/errors.hpp"

namespace coe {

namespace {

constexpr std::size_t kMaxExhaustive = 4096;
constexpr std::size_t kMaxTupleSize = 8;

} // namespace

std::string to_string(SampleMode mode)
{
  return mode == SampleMode::Exhaustive ? "exhaustive" : "sampled";
}

RademacherSample RademacherSample::make(std::size_t m, std::uint64_t seed, std::size_t draws)
{
  if (m == 0) {
    throw InvalidArgument("Rademacher sample needs at least one term");
  }
  RademacherSample sample;
  sample.m = m;
  sample.seed = seed;
  if (m < 63 && (std::size_t{1} << m) <= kMaxExhaustive) {
    sample.mode = SampleMode::Exhaustive;
    const std::size_t count = std::size_t{1} << m;
    sample.signs.reserve(count);
    for (std::size_t pattern = 0; pattern < count; ++pattern) {
      std::vector<signed char> s(m);
      for (std::size_t j = 0; j < m; ++j) {
        s[j] = (pattern >> j) & 1U ? -1 : 1;
      }
      sample.signs.push_back(std::move(s));
    }
    return sample;
  }
  sample.mode = SampleMode::Sampled;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  const std::size_t count = std::max(draws, kMaxExhaustive);
  sample.signs.reserve(count);
  for (std::size_t d = 0; d < count; ++d) {
    std::vector<signed char> s(m);
    for (auto& v : s) {
      v = coin(rng) ? 1 : -1;
    }
    sample.signs.push_back(std::move(s));
  }
  return sample;
}

double rademacher_lp_norm(const std::vector<CVector>& vectors, double p, const RademacherSample& sample)
{
  if (vectors.empty()) {
    throw InvalidArgument("Rademacher norm of an empty list");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("Rademacher norm exponent must be finite and >= 1");
  }
  if (sample.m != vectors.size()) {
    throw InvalidArgument("sign sample length does not match the number of vectors");
  }
  const Eigen::Index dim = vectors.front().size();
  for (const CVector& v : vectors) {
    if (v.size() != dim) {
      throw InvalidArgument("Rademacher norm needs vectors of equal dimension");
    }
  }
  double sum = 0.0;
  CVector acc(dim);
  for (const auto& s : sample.signs) {
    acc.setZero();
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (s[j] > 0) {
        acc += vectors[j];
      } else {
        acc -= vectors[j];
      }
    }
    sum += std::pow(acc.norm(), p);
  }
  return std::pow(sum / static_cast<double>(sample.signs.size()), 1.0 / p);
}

double rademacher_lp_norm(const std::vector<CVector>& vectors, double p)
{
  if (vectors.empty()) {
    throw InvalidArgument("Rademacher norm of an empty list");
  }
  return rademacher_lp_norm(vectors, p, RademacherSample::make(vectors.size()));
}

FamilyOperator FamilyOperator::matrix(CMatrix m)
{
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidArgument("family operators must be square and nonempty");
  }
  FamilyOperator op;
  op.matrix_ = std::move(m);
  op.analyse();
  return op;
}

FamilyOperator FamilyOperator::diagonal(CVector d)
{
  if (d.size() == 0) {
    throw InvalidArgument("family operators must be nonempty");
  }
  FamilyOperator op;
  op.is_diagonal_ = true;
  op.diagonal_ = std::move(d);
  op.analyse();
  return op;
}

void FamilyOperator::analyse()
{
  if (is_diagonal_) {
    Eigen::Index best = 0;
    norm_ = diagonal_.cwiseAbs().maxCoeff(&best);
    maximizer_ = CVector::Unit(diagonal_.size(), best);
    return;
  }
  Eigen::JacobiSVD<CMatrix> svd(matrix_, Eigen::ComputeFullV);
  norm_ = svd.singularValues()(0);
  maximizer_ = svd.matrixV().col(0);
}

std::size_t FamilyOperator::dim() const
{
  return static_cast<std::size_t>(is_diagonal_ ? diagonal_.size() : matrix_.rows());
}

CVector FamilyOperator::apply(const CVector& v) const
{
  if (static_cast<std::size_t>(v.size()) != dim()) {
    throw InvalidArgument("family operator applied to a vector of the wrong dimension");
  }
  if (is_diagonal_) {
    return diagonal_.cwiseProduct(v);
  }
  return matrix_ * v;
}

double FamilyOperator::norm() const
{
  return norm_;
}

CVector FamilyOperator::maximizer() const
{
  return maximizer_;
}

nlohmann::ordered_json RBoundEstimate::to_json() const
{
  nlohmann::ordered_json j;
  j["value"] = value;
  j["tuples_tested"] = tuples_tested;
  j["mode"] = to_string(mode);
  j["seed"] = seed;
  j["uniform_bound"] = uniform_bound;
  return j;
}

RBoundEstimate empirical_rbound(const std::vector<FamilyOperator>& family, double p, std::size_t trials,
                                std::uint64_t seed)
{
  if (family.empty()) {
    throw InvalidArgument("empirical R-bound of an empty family");
  }
  if (trials < 100) {
    throw InvalidArgument("empirical R-bound needs at least 100 trials");
  }
  const std::size_t dim = family.front().dim();
  for (const FamilyOperator& op : family) {
    if (op.dim() != dim) {
      throw InvalidArgument("family operators must share their dimension");
    }
  }

  RBoundEstimate est;
  est.seed = seed;
  est.mode = SampleMode::Exhaustive;
  bool any = false;

  auto consider = [&](const std::vector<CVector>& xs, const std::vector<std::size_t>& members,
                      const RademacherSample& sample) {
    ++est.tuples_tested;
    const double denom = rademacher_lp_norm(xs, p, sample);
    if (!(denom > 0.0)) {
      return;
    }
    std::vector<CVector> txs;
    txs.reserve(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
      txs.push_back(family[members[j]].apply(xs[j]));
    }
    const double ratio = rademacher_lp_norm(txs, p, sample) / denom;
    if (std::isfinite(ratio)) {
      est.value = std::max(est.value, ratio);
      any = true;
    }
  };

  const RademacherSample single = RademacherSample::make(1);
  for (std::size_t i = 0; i < family.size(); ++i) {
    est.uniform_bound = std::max(est.uniform_bound, family[i].norm());
    consider({family[i].maximizer()}, {i}, single);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t max_m = std::min(kMaxTupleSize, family.size());
  std::vector<RademacherSample> samples;
  for (std::size_t m = 1; m <= max_m; ++m) {
    samples.push_back(RademacherSample::make(m, seed));
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t m = 1 + t % max_m;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<CVector> xs;
    xs.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
      CVector x(static_cast<Eigen::Index>(dim));
      for (Eigen::Index d = 0; d < x.size(); ++d) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        x[d] = Complex{re, im};
      }
      xs.push_back(std::move(x));
    }
    consider(xs, members, samples[m - 1]);
  }

  if (!any) {
    throw DegenerateSample("every sampled tuple had a vanishing denominator");
  }
  return est;
}

double kahane_check(const std::vector<Complex>& alpha, const std::vector<Complex>& beta,
                    const std::vector<CVector>& vectors, double p)
{
  if (alpha.size() != beta.size() || alpha.size() != vectors.size() || alpha.empty()) {
    throw InvalidArgument("kahane_check needs equally long nonempty coefficient and vector lists");
  }
  bool nonzero = false;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (std::abs(alpha[j]) > std::abs(beta[j]) * (1.0 + 1e-12)) {
      throw InvalidArgument("kahane_check requires |alpha_j| <= |beta_j|");
    }
    nonzero = nonzero || beta[j] != Complex{};
  }
  if (!nonzero) {
    throw InvalidArgument("kahane_check requires some nonzero beta_j");
  }
  std::vector<CVector> a;
  std::vector<CVector> b;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    a.push_back(alpha[j] * vectors[j]);
    b.push_back(beta[j] * vectors[j]);
  }
  const RademacherSample sample = RademacherSample::make(vectors.size());
  const double denom = rademacher_lp_norm(b, p, sample);
  if (!(denom > 0.0)) {
    throw InvalidArgument("kahane_check denominator vanishes");
  }
  return rademacher_lp_norm(a, p, sample) / denom;
}

FamilyOperator sigma_operator(const DiscretizedProblem& problem, double xi, Complex lambda)
{
  const SymbolSet& sym = problem.symbols();
  const Complex scale = (1.0 + lambda) / mu_plus_nu(sym, xi);
  const Complex z = eta(sym, xi) + lambda;
  const OperatorRealization& A = problem.op();
  if (A.has_mode_basis()) {
    const RVector& ev = A.mode_eigenvalues();
    CVector d(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      const Complex denom = ev[k] + z;
      if (std::abs(denom) == 0.0) {
        throw SingularResolvent("A + z I is singular in the sigma family");
      }
      d[k] = scale / denom;
    }
    return FamilyOperator::diagonal(std::move(d));
  }
  const auto n = static_cast<Eigen::Index>(A.dim());
  CMatrix inv(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    inv.col(j) = A.resolvent_solve(z, CVector::Unit(n, j));
  }
  return FamilyOperator::matrix(scale * inv);
}

RBoundEstimate rpositivity_of_L(const DiscretizedProblem& problem, const std::vector<double>& xi_samples,
                                const std::vector<Complex>& lambda_samples, double p, std::size_t trials,
                                std::uint64_t seed)
{
  problem.require_admissible();
  if (xi_samples.empty() || lambda_samples.empty()) {
    throw InvalidArgument("R-positivity estimate needs xi and lambda samples");
  }
  for (const Complex lambda : lambda_samples) {
    problem.require_lambda(lambda);
  }
  std::vector<FamilyOperator> family;
  if (xi_samples.size() == lambda_samples.size()) {
    for (std::size_t i = 0; i < xi_samples.size(); ++i) {
      family.push_back(sigma_operator(problem, xi_samples[i], lambda_samples[i]));
    }
  } else {
    for (const double xi : xi_samples) {
      for (const Complex lambda : lambda_samples) {
        family.push_back(sigma_operator(problem, xi, lambda));
      }
    }
  }
  return empirical_rbound(family, p, trials, seed);
}

} // namespace coe
