#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coe/elliptic.hpp"
#include "coe/evolution.hpp"
#include "coe/field.hpp"
#include "coe/nonlinearity.hpp"
#include "coe/operators.hpp"
#include "coe/symbols.hpp"

namespace coe {

using Json = nlohmann::ordered_json;

enum class Scenario
{
  CheckCondition,
  SolveLinear,
  LambdaSweep,
  Mikhlin,
  RBound,
  SolveParabolic,
  SolveElliptic,
  NormsReport,
};

std::string to_string(Scenario scenario);
Scenario scenario_from_string(std::string_view name);
const std::vector<std::string>& scenario_names();

/// A field profile on the x grid times a vector profile in E.
struct FieldSpec
{
  enum class Kind
  {
    Zero,
    Gaussian,
    Cosine,
    RandomBandlimited,
  };
  Kind kind = Kind::Zero;
  Complex amplitude{1.0, 0.0};
  double center = 0.0;
  double width = 1.0;
  double frequency = 1.0;
  int modes = 8;
  /// "uniform" (all ones) or "first-mode" (lowest eigenvector of A).
  std::string e_profile = "uniform";
};

/// Samples the field description; random kinds draw from a generator seeded with `seed`.
Field make_field(const FieldSpec& spec, const Grid& grid, const OperatorRealization& A, std::uint64_t seed);

struct ConditionGridSpec
{
  double xi_min = 1e-3;
  double xi_max = 1e3;
  std::size_t points_per_side = 2001;
};

struct MikhlinSpec
{
  std::vector<MultiplierIndex> families{MultiplierIndex::M0, MultiplierIndex::M1, MultiplierIndex::M2,
                                        MultiplierIndex::M3, MultiplierIndex::M4};
  double lambda_min = 1e-2;
  double lambda_max = 1e4;
  std::size_t per_ray = 25;
  std::size_t xi_points_per_side = 401;
};

struct RBoundSpec
{
  std::size_t xi_count = 8;
  std::size_t lambda_per_ray = 8;
  double lambda_min = 1e-2;
  double lambda_max = 1e4;
  std::size_t trials = 200;
};

struct ParabolicSpec
{
  double T = 1.0;
  double dt = 1e-2;
  FieldSpec initial;
  std::optional<FieldSpec> forcing;
  Nonlinearity nonlinearity = Nonlinearity::none();
  std::size_t snapshot_every = 0;
  ContinuationTolerances tolerances;
};

struct EllipticSpec
{
  double T = 1.0;
  std::size_t m = 64;
  Complex alpha1{1.0, 0.0};
  Complex beta1{0.0, 0.0};
  Complex alpha2{0.0, 0.0};
  Complex beta2{1.0, 0.0};
  FieldSpec f1;
  FieldSpec f2;
  std::optional<FieldSpec> forcing;
  Nonlinearity nonlinearity = Nonlinearity::none();
  std::size_t max_iter = 30;
  double tol = 1e-8;
  bool require_nondegenerate = true;
};

struct NormsReportSpec
{
  FieldSpec field;
  double q = 2.0;
  double smoothness = 1.0;
};

/// Parsed and validated scenario configuration.
struct ScenarioConfig
{
  Scenario scenario = Scenario::CheckCondition;
  std::uint64_t seed = 0;
  Json source; ///< the document as given

  SymbolSet symbols;
  std::optional<OperatorRealization> op;
  Grid grid;
  double p = 2.0;
  double phi2 = kPi / 2.0;

  ConditionGridSpec condition;
  std::optional<FieldSpec> forcing;
  std::vector<Complex> lambdas;
  MikhlinSpec mikhlin;
  RBoundSpec rbound;
  ParabolicSpec parabolic;
  EllipticSpec elliptic;
  NormsReportSpec norms;
};

/// Strict parse: unknown keys and type errors raise ConfigError naming the
/// JSON path. Paths inside the document are resolved against `base_dir`.
ScenarioConfig parse_config(const Json& document, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the compact dump of `document`, as 16 hex digits.
std::string config_hash(const Json& document);

} // namespace coe
