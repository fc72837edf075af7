#include "coe/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "coe/errors.hpp"
#include "coe/format.hpp"

namespace coe {

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_table()
{
  static const std::vector<std::pair<Scenario, std::string>> table{
    {Scenario::CheckCondition, "check-condition"}, {Scenario::SolveLinear, "solve-linear"},
    {Scenario::LambdaSweep, "lambda-sweep"},       {Scenario::Mikhlin, "mikhlin"},
    {Scenario::RBound, "rbound"},                  {Scenario::SolveParabolic, "solve-parabolic"},
    {Scenario::SolveElliptic, "solve-elliptic"},   {Scenario::NormsReport, "norms-report"},
  };
  return table;
}

} // namespace

std::string to_string(Scenario scenario)
{
  for (const auto& [s, name] : scenario_table()) {
    if (s == scenario) {
      return name;
    }
  }
  return "?";
}

Scenario scenario_from_string(std::string_view name)
{
  for (const auto& [s, n] : scenario_table()) {
    if (n == name) {
      return s;
    }
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

const std::vector<std::string>& scenario_names()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : scenario_table()) {
      out.push_back(entry.second);
    }
    return out;
  }();
  return names;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message)
{
  throw ConfigError(path + ": " + message);
}

std::string child(const std::string& path, std::string_view key)
{
  return path + "." + std::string(key);
}

std::string index_path(const std::string& path, std::size_t i)
{
  return path + "[" + std::to_string(i) + "]";
}

void expect_object(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed)
{
  if (!j.is_object()) {
    fail(path, "expected an object");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      fail(child(path, item.key()), "unknown key '" + item.key() + "'");
    }
  }
}

double as_number(const Json& j, const std::string& path)
{
  if (!j.is_number()) {
    fail(path, "expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    fail(path, "expected a finite number");
  }
  return v;
}

Complex as_complex(const Json& j, const std::string& path)
{
  if (j.is_number()) {
    return {as_number(j, path), 0.0};
  }
  if (j.is_array() && j.size() == 2) {
    return {as_number(j[0], index_path(path, 0)), as_number(j[1], index_path(path, 1))};
  }
  fail(path, "expected a number or a [re, im] pair");
}

std::size_t as_count(const Json& j, const std::string& path)
{
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string as_string(const Json& j, const std::string& path)
{
  if (!j.is_string()) {
    fail(path, "expected a string");
  }
  return j.get<std::string>();
}

bool as_bool(const Json& j, const std::string& path)
{
  if (!j.is_boolean()) {
    fail(path, "expected a boolean");
  }
  return j.get<bool>();
}

template <typename T, typename F>
T optional_value(const Json& obj, const std::string& path, std::string_view key, T fallback, F convert)
{
  const std::string k(key);
  if (!obj.contains(k)) {
    return fallback;
  }
  return convert(obj.at(k), child(path, key));
}

double number_or(const Json& obj, const std::string& path, std::string_view key, double fallback)
{
  return optional_value(obj, path, key, fallback, as_number);
}

std::size_t count_or(const Json& obj, const std::string& path, std::string_view key, std::size_t fallback)
{
  return optional_value(obj, path, key, fallback, as_count);
}

Complex complex_or(const Json& obj, const std::string& path, std::string_view key, Complex fallback)
{
  return optional_value(obj, path, key, fallback, as_complex);
}

const Json& required(const Json& obj, const std::string& path, std::string_view key)
{
  const std::string k(key);
  if (!obj.contains(k)) {
    fail(child(path, key), "missing required key '" + k + "'");
  }
  return obj.at(k);
}

template <typename F>
auto guarded(const std::string& path, F&& build) -> decltype(build())
{
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    fail(path, err.what());
  }
}

std::optional<Kernel> parse_kernel(const Json& j, const std::string& path)
{
  if (j.is_null()) {
    return std::nullopt;
  }
  expect_object(j, path, {"kind", "rate", "amplitude"});
  const std::string kind_name = as_string(required(j, path, "kind"), child(path, "kind"));
  const double rate = number_or(j, path, "rate", 1.0);
  const double amplitude = number_or(j, path, "amplitude", 1.0);
  return guarded(path, [&]() -> std::optional<Kernel> {
    switch (kernel_kind_from_string(kind_name)) {
      case KernelKind::DiracScaled:
        return Kernel::dirac(amplitude);
      case KernelKind::ExponentialPaper:
        return Kernel::exponential_paper(rate, amplitude);
      case KernelKind::ExponentialStandard:
        return Kernel::exponential_standard(rate, amplitude);
      case KernelKind::Gaussian:
        return Kernel::gaussian(rate, amplitude);
      case KernelKind::Custom:
        break;
    }
    throw ConfigError(child(path, "kind") + ": custom kernels cannot be configured from a file");
  });
}

SymbolSet parse_symbols(const Json& j, const std::string& path)
{
  expect_object(j, path, {"order", "b", "nu", "a_kernels", "mu_kernel"});
  SymbolSet s;
  const Json& order = required(j, path, "order");
  if (!order.is_number_integer() || order.get<long long>() < 0) {
    fail(child(path, "order"), "expected a non-negative integer");
  }
  s.order = order.get<int>();
  const Json& b = required(j, path, "b");
  if (!b.is_array()) {
    fail(child(path, "b"), "expected an array");
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    s.b.push_back(as_complex(b[i], index_path(child(path, "b"), i)));
  }
  s.nu = complex_or(j, path, "nu", Complex{1.0, 0.0});
  if (j.contains("a_kernels")) {
    const Json& a = j.at("a_kernels");
    const std::string apath = child(path, "a_kernels");
    if (!a.is_array()) {
      fail(apath, "expected an array");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      s.a_kernels.push_back(parse_kernel(a[i], index_path(apath, i)));
    }
  }
  if (j.contains("mu_kernel")) {
    s.mu_kernel = parse_kernel(j.at("mu_kernel"), child(path, "mu_kernel"));
  }
  guarded(path, [&] {
    s.validate();
    return 0;
  });
  return s;
}

OperatorRealization parse_operator(const Json& j, const std::string& path, const std::filesystem::path& base_dir)
{
  expect_object(j, path, {"kind", "matrix", "csv", "n", "shift", "ny", "nz", "value"});
  const std::string kind_name = as_string(required(j, path, "kind"), child(path, "kind"));
  return guarded(path, [&]() {
    switch (operator_kind_from_string(kind_name)) {
      case OperatorKind::DenseMatrix: {
        if (j.contains("csv")) {
          std::filesystem::path file = as_string(j.at("csv"), child(path, "csv"));
          if (file.is_relative() && !base_dir.empty()) {
            file = base_dir / file;
          }
          return OperatorRealization::from_csv(file);
        }
        if (j.contains("value")) {
          return OperatorRealization::scalar(as_complex(j.at("value"), child(path, "value")));
        }
        const Json& rows = required(j, path, "matrix");
        const std::string mpath = child(path, "matrix");
        if (!rows.is_array() || rows.empty()) {
          fail(mpath, "expected a nonempty array of rows");
        }
        const auto n = static_cast<Eigen::Index>(rows.size());
        CMatrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
          const Json& row = rows[static_cast<std::size_t>(r)];
          const std::string rpath = index_path(mpath, static_cast<std::size_t>(r));
          if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            fail(rpath, "expected a row of length " + std::to_string(n));
          }
          for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = as_complex(row[static_cast<std::size_t>(c)], index_path(rpath, static_cast<std::size_t>(c)));
          }
        }
        return OperatorRealization::dense(std::move(m));
      }
      case OperatorKind::PeriodicSturmLiouville:
        return OperatorRealization::periodic_sturm_liouville(count_or(j, path, "n", 128),
                                                             number_or(j, path, "shift", 1.0));
      case OperatorKind::DirichletLaplacian2d:
        return OperatorRealization::dirichlet_laplacian_2d(count_or(j, path, "ny", 32), count_or(j, path, "nz", 32),
                                                           number_or(j, path, "shift", 0.0));
    }
    fail(child(path, "kind"), "unsupported operator kind");
  });
}

Grid parse_grid(const Json& j, const std::string& path)
{
  expect_object(j, path, {"half_width", "n"});
  const double x = number_or(j, path, "half_width", 16.0 * kPi);
  const std::size_t n = count_or(j, path, "n", 512);
  return guarded(path, [&] { return Grid(x, n); });
}

FieldSpec parse_field_spec(const Json& j, const std::string& path)
{
  expect_object(j, path, {"kind", "amplitude", "center", "width", "frequency", "modes", "e_profile"});
  FieldSpec spec;
  const std::string kind = as_string(required(j, path, "kind"), child(path, "kind"));
  if (kind == "zero") {
    spec.kind = FieldSpec::Kind::Zero;
  } else if (kind == "gaussian") {
    spec.kind = FieldSpec::Kind::Gaussian;
  } else if (kind == "cosine") {
    spec.kind = FieldSpec::Kind::Cosine;
  } else if (kind == "random-bandlimited") {
    spec.kind = FieldSpec::Kind::RandomBandlimited;
  } else {
    fail(child(path, "kind"), "unknown field kind '" + kind + "'");
  }
  spec.amplitude = complex_or(j, path, "amplitude", Complex{1.0, 0.0});
  spec.center = number_or(j, path, "center", 0.0);
  spec.width = number_or(j, path, "width", 1.0);
  spec.frequency = number_or(j, path, "frequency", 1.0);
  spec.modes = static_cast<int>(count_or(j, path, "modes", 8));
  if (j.contains("e_profile")) {
    spec.e_profile = as_string(j.at("e_profile"), child(path, "e_profile"));
    if (spec.e_profile != "uniform" && spec.e_profile != "first-mode") {
      fail(child(path, "e_profile"), "expected 'uniform' or 'first-mode'");
    }
  }
  if (!(spec.width > 0.0)) {
    fail(child(path, "width"), "must be positive");
  }
  return spec;
}

Nonlinearity parse_nonlinearity(const Json& j, const std::string& path)
{
  expect_object(j, path, {"kind", "terms", "name", "arity"});
  const std::string kind = as_string(required(j, path, "kind"), child(path, "kind"));
  const NonlinearityKind k = guarded(path, [&] { return nonlinearity_kind_from_string(kind); });
  if (k == NonlinearityKind::None) {
    return Nonlinearity::none();
  }
  if (k == NonlinearityKind::Polynomial) {
    const Json& terms = required(j, path, "terms");
    const std::string tpath = child(path, "terms");
    if (!terms.is_array() || terms.empty()) {
      fail(tpath, "expected a nonempty array");
    }
    std::vector<PolynomialTerm> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string ipath = index_path(tpath, i);
      expect_object(terms[i], ipath, {"coeff", "powers", "t_power"});
      PolynomialTerm term;
      term.coeff = complex_or(terms[i], ipath, "coeff", Complex{1.0, 0.0});
      const Json& powers = required(terms[i], ipath, "powers");
      if (!powers.is_array()) {
        fail(child(ipath, "powers"), "expected an array");
      }
      for (std::size_t d = 0; d < powers.size(); ++d) {
        term.powers.push_back(static_cast<int>(as_count(powers[d], index_path(child(ipath, "powers"), d))));
      }
      term.t_power = static_cast<int>(count_or(terms[i], ipath, "t_power", 0));
      out.push_back(std::move(term));
    }
    return guarded(path, [&] { return Nonlinearity::polynomial(std::move(out)); });
  }
  const std::string name = as_string(required(j, path, "name"), child(path, "name"));
  const int arity = static_cast<int>(count_or(j, path, "arity", 0));
  if (name == "sine") {
    return Nonlinearity::closed_form(arity, false, [](const std::vector<CMatrix>& d, const CMatrix*) {
      return CMatrix(d.front().array().sin().matrix());
    });
  }
  if (name == "logistic") {
    return Nonlinearity::closed_form(arity, false, [](const std::vector<CMatrix>& d, const CMatrix*) {
      return CMatrix((d.front().array() * (1.0 - d.front().array())).matrix());
    });
  }
  fail(child(path, "name"), "unknown closed-form nonlinearity '" + name + "'");
}

std::vector<Complex> parse_complex_list(const Json& j, const std::string& path)
{
  if (!j.is_array() || j.empty()) {
    fail(path, "expected a nonempty array");
  }
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_complex(j[i], index_path(path, i)));
  }
  return out;
}

void parse_problem(const Json& j, const std::string& path, const std::filesystem::path& base_dir,
                   ScenarioConfig& cfg)
{
  expect_object(j, path, {"symbols", "operator", "grid", "p", "phi2"});
  cfg.symbols = parse_symbols(required(j, path, "symbols"), child(path, "symbols"));
  cfg.op = parse_operator(required(j, path, "operator"), child(path, "operator"), base_dir);
  cfg.grid = j.contains("grid") ? parse_grid(j.at("grid"), child(path, "grid")) : Grid(16.0 * kPi, 512);
  cfg.p = number_or(j, path, "p", 2.0);
  if (!(cfg.p > 1.0)) {
    fail(child(path, "p"), "must satisfy 1 < p < infinity");
  }
  cfg.phi2 = number_or(j, path, "phi2", kPi / 2.0);
  if (!(cfg.phi2 >= 0.0 && cfg.phi2 < kPi)) {
    fail(child(path, "phi2"), "must lie in [0, pi)");
  }
}

} // namespace

Field make_field(const FieldSpec& spec, const Grid& grid, const OperatorRealization& A, std::uint64_t seed)
{
  const auto dim = static_cast<Eigen::Index>(A.dim());
  const auto n = static_cast<Eigen::Index>(grid.n);
  CVector profile = CVector::Ones(dim);
  if (spec.e_profile == "first-mode" && A.kind() == OperatorKind::DirichletLaplacian2d) {
    const auto [ny, nz] = A.grid_shape();
    for (std::size_t iy = 0; iy < ny; ++iy) {
      for (std::size_t iz = 0; iz < nz; ++iz) {
        profile[static_cast<Eigen::Index>(iy * nz + iz)] =
          std::sin(kPi * static_cast<double>(iy + 1) / static_cast<double>(ny + 1)) *
          std::sin(kPi * static_cast<double>(iz + 1) / static_cast<double>(nz + 1));
      }
    }
  }

  Field out(grid, static_cast<std::size_t>(dim));
  switch (spec.kind) {
    case FieldSpec::Kind::Zero:
      return out;
    case FieldSpec::Kind::Gaussian:
    case FieldSpec::Kind::Cosine: {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = grid.x(static_cast<std::size_t>(i));
        const double shape = spec.kind == FieldSpec::Kind::Gaussian
                               ? std::exp(-std::pow((x - spec.center) / spec.width, 2))
                               : std::cos(spec.frequency * x);
        out.values.row(i) = (spec.amplitude * shape) * profile.transpose();
      }
      return out;
    }
    case FieldSpec::Kind::RandomBandlimited: {
      if (spec.modes < 0 || 2 * static_cast<std::size_t>(spec.modes) >= grid.n) {
        throw InvalidArgument("band limit must stay below the Nyquist bin");
      }
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      CMatrix spec_values = CMatrix::Zero(n, dim);
      const double scale = static_cast<double>(grid.n) / 2.0;
      for (Eigen::Index d = 0; d < dim; ++d) {
        spec_values(0, d) = gauss(rng) * scale;
        for (int k = 1; k <= spec.modes; ++k) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          const Complex c = Complex(re, im) * scale / static_cast<double>(k);
          spec_values(k, d) = c;
          spec_values(n - k, d) = std::conj(c);
        }
      }
      out = from_spectrum(grid, spec_values);
      for (Eigen::Index i = 0; i < n; ++i) {
        out.values.row(i) = spec.amplitude * out.values.row(i).cwiseProduct(profile.transpose());
      }
      return out;
    }
  }
  return out;
}

ScenarioConfig parse_config(const Json& document, const std::filesystem::path& base_dir)
{
  const std::string root = "$";
  expect_object(document, root,
                {"scenario", "description", "seed", "problem", "condition", "forcing", "lambda", "lambdas", "mikhlin",
                 "rbound", "parabolic", "elliptic", "norms"});
  ScenarioConfig cfg;
  cfg.source = document;
  {
    const std::string name = as_string(required(document, root, "scenario"), child(root, "scenario"));
    try {
      cfg.scenario = scenario_from_string(name);
    } catch (const ConfigError& err) {
      fail(child(root, "scenario"), err.what());
    }
  }
  if (document.contains("description")) {
    as_string(document.at("description"), child(root, "description"));
  }
  cfg.seed = count_or(document, root, "seed", 0);
  parse_problem(required(document, root, "problem"), child(root, "problem"), base_dir, cfg);

  if (document.contains("condition")) {
    const std::string path = child(root, "condition");
    const Json& j = document.at("condition");
    expect_object(j, path, {"xi_min", "xi_max", "points_per_side"});
    cfg.condition.xi_min = number_or(j, path, "xi_min", cfg.condition.xi_min);
    cfg.condition.xi_max = number_or(j, path, "xi_max", cfg.condition.xi_max);
    cfg.condition.points_per_side = count_or(j, path, "points_per_side", cfg.condition.points_per_side);
    if (!(cfg.condition.xi_min > 0.0 && cfg.condition.xi_max > cfg.condition.xi_min) ||
        cfg.condition.points_per_side < 2) {
      fail(path, "need 0 < xi_min < xi_max and at least two points per side");
    }
  }
  if (document.contains("forcing")) {
    cfg.forcing = parse_field_spec(document.at("forcing"), child(root, "forcing"));
  }
  if (document.contains("lambda")) {
    cfg.lambdas = {as_complex(document.at("lambda"), child(root, "lambda"))};
  }
  if (document.contains("lambdas")) {
    cfg.lambdas = parse_complex_list(document.at("lambdas"), child(root, "lambdas"));
  }
  if (document.contains("mikhlin")) {
    const std::string path = child(root, "mikhlin");
    const Json& j = document.at("mikhlin");
    expect_object(j, path, {"families", "lambda_min", "lambda_max", "per_ray", "xi_points_per_side"});
    if (j.contains("families")) {
      const Json& fams = j.at("families");
      if (!fams.is_array() || fams.empty()) {
        fail(child(path, "families"), "expected a nonempty array");
      }
      cfg.mikhlin.families.clear();
      for (std::size_t i = 0; i < fams.size(); ++i) {
        const std::string fpath = index_path(child(path, "families"), i);
        cfg.mikhlin.families.push_back(guarded(fpath, [&] { return multiplier_from_string(as_string(fams[i], fpath)); }));
      }
    }
    cfg.mikhlin.lambda_min = number_or(j, path, "lambda_min", cfg.mikhlin.lambda_min);
    cfg.mikhlin.lambda_max = number_or(j, path, "lambda_max", cfg.mikhlin.lambda_max);
    cfg.mikhlin.per_ray = count_or(j, path, "per_ray", cfg.mikhlin.per_ray);
    cfg.mikhlin.xi_points_per_side = count_or(j, path, "xi_points_per_side", cfg.mikhlin.xi_points_per_side);
    if (!(cfg.mikhlin.lambda_min > 0.0 && cfg.mikhlin.lambda_max > cfg.mikhlin.lambda_min) ||
        cfg.mikhlin.per_ray < 2 || cfg.mikhlin.xi_points_per_side < 2) {
      fail(path, "need 0 < lambda_min < lambda_max and at least two samples per ray");
    }
  }
  if (document.contains("rbound")) {
    const std::string path = child(root, "rbound");
    const Json& j = document.at("rbound");
    expect_object(j, path, {"xi_count", "lambda_per_ray", "lambda_min", "lambda_max", "trials"});
    cfg.rbound.xi_count = count_or(j, path, "xi_count", cfg.rbound.xi_count);
    cfg.rbound.lambda_per_ray = count_or(j, path, "lambda_per_ray", cfg.rbound.lambda_per_ray);
    cfg.rbound.lambda_min = number_or(j, path, "lambda_min", cfg.rbound.lambda_min);
    cfg.rbound.lambda_max = number_or(j, path, "lambda_max", cfg.rbound.lambda_max);
    cfg.rbound.trials = count_or(j, path, "trials", cfg.rbound.trials);
    if (cfg.rbound.xi_count < 2 || cfg.rbound.lambda_per_ray < 2 || cfg.rbound.trials < 100 ||
        !(cfg.rbound.lambda_min > 0.0 && cfg.rbound.lambda_max > cfg.rbound.lambda_min)) {
      fail(path, "need xi_count >= 2, lambda_per_ray >= 2, trials >= 100 and 0 < lambda_min < lambda_max");
    }
  }
  if (document.contains("parabolic")) {
    const std::string path = child(root, "parabolic");
    const Json& j = document.at("parabolic");
    expect_object(j, path,
                  {"T", "dt", "initial", "forcing", "nonlinearity", "snapshot_every", "blowup_threshold",
                   "step_tolerance"});
    ParabolicSpec& s = cfg.parabolic;
    s.T = number_or(j, path, "T", s.T);
    s.dt = number_or(j, path, "dt", s.dt);
    if (!(s.T >= 0.0) || !(s.dt > 0.0)) {
      fail(path, "need T >= 0 and dt > 0");
    }
    s.initial = parse_field_spec(required(j, path, "initial"), child(path, "initial"));
    if (j.contains("forcing")) {
      s.forcing = parse_field_spec(j.at("forcing"), child(path, "forcing"));
    }
    if (j.contains("nonlinearity")) {
      s.nonlinearity = parse_nonlinearity(j.at("nonlinearity"), child(path, "nonlinearity"));
    }
    s.snapshot_every = count_or(j, path, "snapshot_every", 0);
    s.tolerances.blowup_threshold = number_or(j, path, "blowup_threshold", s.tolerances.blowup_threshold);
    s.tolerances.step_tolerance = number_or(j, path, "step_tolerance", s.tolerances.step_tolerance);
  }
  if (document.contains("elliptic")) {
    const std::string path = child(root, "elliptic");
    const Json& j = document.at("elliptic");
    expect_object(j, path,
                  {"T", "m", "alpha1", "beta1", "alpha2", "beta2", "f1", "f2", "forcing", "nonlinearity", "max_iter",
                   "tol", "require_nondegenerate"});
    EllipticSpec& s = cfg.elliptic;
    s.T = number_or(j, path, "T", s.T);
    s.m = count_or(j, path, "m", s.m);
    guarded(path, [&] { return TGrid(s.T, s.m); });
    s.alpha1 = complex_or(j, path, "alpha1", s.alpha1);
    s.beta1 = complex_or(j, path, "beta1", s.beta1);
    s.alpha2 = complex_or(j, path, "alpha2", s.alpha2);
    s.beta2 = complex_or(j, path, "beta2", s.beta2);
    if (j.contains("f1")) {
      s.f1 = parse_field_spec(j.at("f1"), child(path, "f1"));
    }
    if (j.contains("f2")) {
      s.f2 = parse_field_spec(j.at("f2"), child(path, "f2"));
    }
    if (j.contains("forcing")) {
      s.forcing = parse_field_spec(j.at("forcing"), child(path, "forcing"));
    }
    if (j.contains("nonlinearity")) {
      s.nonlinearity = parse_nonlinearity(j.at("nonlinearity"), child(path, "nonlinearity"));
    }
    s.max_iter = count_or(j, path, "max_iter", s.max_iter);
    s.tol = number_or(j, path, "tol", s.tol);
    if (j.contains("require_nondegenerate")) {
      s.require_nondegenerate = as_bool(j.at("require_nondegenerate"), child(path, "require_nondegenerate"));
    }
    if (s.max_iter == 0 || !(s.tol > 0.0)) {
      fail(path, "need max_iter >= 1 and tol > 0");
    }
  }
  if (document.contains("norms")) {
    const std::string path = child(root, "norms");
    const Json& j = document.at("norms");
    expect_object(j, path, {"field", "q", "s"});
    cfg.norms.field = parse_field_spec(required(j, path, "field"), child(path, "field"));
    cfg.norms.q = number_or(j, path, "q", cfg.norms.q);
    cfg.norms.smoothness = number_or(j, path, "s", cfg.norms.smoothness);
    if (!(cfg.norms.q > 1.0) || !(cfg.norms.smoothness > 0.0)) {
      fail(path, "need q > 1 and s > 0");
    }
  }

  switch (cfg.scenario) {
    case Scenario::SolveLinear:
      if (!cfg.forcing) {
        fail(child(root, "forcing"), "solve-linear needs a forcing");
      }
      if (cfg.lambdas.size() != 1) {
        fail(child(root, "lambda"), "solve-linear needs exactly one lambda");
      }
      break;
    case Scenario::LambdaSweep:
      if (!cfg.forcing) {
        fail(child(root, "forcing"), "lambda-sweep needs a forcing");
      }
      if (cfg.lambdas.empty()) {
        fail(child(root, "lambdas"), "lambda-sweep needs a lambda list");
      }
      break;
    case Scenario::SolveParabolic:
      required(document, root, "parabolic");
      break;
    case Scenario::SolveElliptic:
      required(document, root, "elliptic");
      break;
    case Scenario::NormsReport:
      required(document, root, "norms");
      break;
    default:
      break;
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string() + ": cannot open config file");
  }
  Json document;
  try {
    document = Json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
  return parse_config(document, path.parent_path());
}

std::string config_hash(const Json& document)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : document.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

} // namespace coe
