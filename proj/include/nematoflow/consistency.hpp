#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nematoflow/parameters.hpp"

namespace nematoflow::material {

/// Box over which the inequalities are sampled. rho defaults to the
/// ParameterSet's constant density when no range is given; giving a range
/// also enables the compressible refined inequality.
struct SamplingDomain {
  double theta_min = 0.5;
  double theta_max = 2.0;
  double tau_min = 0.0;
  double tau_max = 1.0;
  std::optional<std::pair<double, double>> rho_range;
  std::size_t samples = 4096;
  std::uint64_t seed = 0;
};

/// Which family an inequality belongs to:
///  consist - non-strict thermodynamic consistency set
///  refined - the sharper incompressible/compressible replacements for
///            mu_0, mu_L >= 0
///  stable  - strict set used for equilibria and stability, including the
///            well-posedness condition lambda + 2 tau dlambda/dtau > 0
enum class InequalitySet { consist, refined, stable };

struct InequalityResult {
  std::string id;  // "<set>/<name>", e.g. "consist/alpha_0+alpha_1"
  InequalitySet set = InequalitySet::consist;
  bool strict = false;
  double min_slack = 0.0;
  double arg_min_theta = 0.0;
  double arg_min_tau = 0.0;
  double arg_min_rho = 0.0;
  bool pass = true;
};

struct ConsistencyReport {
  std::vector<InequalityResult> rows;
  double c0_estimate = 0.0;
  double c0_residual = 0.0;
  std::size_t sample_count = 0;

  /// Non-strict verdict: the consist set passes, or it passes except for
  /// mu_0 / mu_L and the refined set passes.
  bool consistent() const;
  /// Strict verdict: every stable-set row passes.
  bool stable() const;
  const InequalityResult* find(const std::string& id) const;
  std::vector<std::string> failures() const;

  std::string table() const;
  /// Columns: inequality_id, min_slack, arg_min_theta, arg_min_tau, pass.
  std::string csv() const;
};

/// Radical-inverse Halton points in [0,1)^3 (bases 2, 3, 5) starting at
/// index offset + 1.
std::vector<std::array<double, 3>> halton(std::size_t count, std::uint64_t offset);

ConsistencyReport check_consistency(const FreeEnergy& fe, const ParameterSet& p,
                                    const SamplingDomain& domain);

}  // namespace nematoflow::material
