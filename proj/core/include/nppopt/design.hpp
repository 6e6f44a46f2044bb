#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "nppopt/criteria.hpp"
#include "nppopt/families.hpp"

namespace nppopt::design {

struct DeriveKl {
  criteria::KlConfig base;
};

struct DeriveMse {
  criteria::MseConfig base;
  double grid_lo = 0.5;
  double grid_hi = 6.0;
  double step = 0.5;
};

using FittingPrior = std::variant<BetaParams, DeriveKl, DeriveMse>;

struct PowerConfig {
  families::FitResult historical;
  families::DesignSpec design = families::two_arm();
  std::size_t index = 1;
  std::vector<std::size_t> ns{50, 75, 100};
  FittingPrior prior = BetaParams{1.0, 1.0};
  double gamma = 0.975;
  std::size_t reps = 2000;
  std::size_t sampling_draws = 4000;
  std::uint64_t seed = 1;
  void validate() const;
};

struct PowerPoint {
  std::size_t n = 0;
  double power = 0.0;
  double mc_se = 0.0;
  BetaParams prior;
};

// Draws from the normal approximation to the historical-only posterior.
std::vector<Eigen::VectorXd> sampling_prior_draws(const PowerConfig& cfg);

BetaParams resolve_prior(const PowerConfig& cfg, std::size_t n, const numerics::QuadratureRule& rule);

PowerPoint simulate_power(const PowerConfig& cfg, std::size_t n, const numerics::QuadratureRule& rule);

// Same simulated trials for every fitting prior.
std::vector<PowerPoint> simulate_power_many(const PowerConfig& cfg, std::size_t n,
                                            const std::vector<BetaParams>& priors,
                                            const numerics::QuadratureRule& rule);

std::vector<PowerPoint> power_curve(const PowerConfig& cfg, const numerics::QuadratureRule& rule);

}  // namespace nppopt::design
