#pragma once

#include <cstddef>
#include <vector>

#include "nppopt/npp.hpp"

namespace nppopt::asymptotics {

using npp::DensityGrid;
using numerics::QuadratureRule;

struct ConvergenceReport {
  std::vector<std::size_t> schedule;
  std::vector<double> mass_below_eps;
  double epsilon = 0.05;
  bool monotone = false;
};

DensityGrid limiting_density_iid(double r, const BetaParams& prior, const QuadratureRule& rule);

DensityGrid limiting_density_glm(std::size_t p, const BetaParams& prior, const QuadratureRule& rule);

struct NormalSetup {
  std::size_t n = 30;
  std::size_t n0 = 30;
  double sigma2 = 1.0;
  double sigma02 = 1.0;
};

// F_d - F_0 at every node of the rule, with 0 at non-interior nodes.
std::vector<double> cdf_gap(double d, const NormalSetup& base, const BetaParams& prior,
                            const QuadratureRule& rule);

// Minimum of F_d - F_0 over nodes where min(F_0, 1 - F_0) exceeds 1e-10.
double check_cdf_dominance(double d, const NormalSetup& base, const BetaParams& prior,
                           const QuadratureRule& rule);

// Posterior mass of a0 in (0, epsilon) for the asymptotic i.i.d. kernel.
double mass_below(const npp::DiscrepancyScenario& scenario, double bddot, double bddot0,
                  double epsilon, const BetaParams& prior, const QuadratureRule& rule);

ConvergenceReport convergence_diagnostic(double delta, double r,
                                         const std::vector<std::size_t>& schedule, double epsilon,
                                         const BetaParams& prior, const QuadratureRule& rule,
                                         double bddot = 1.0, double bddot0 = 1.0);

inline std::vector<std::size_t> default_schedule() { return {30, 50, 100, 200, 500}; }

}  // namespace nppopt::asymptotics
