#include <algorithm>
#include <cmath>
#include <limits>

#include "nppopt/asymptotics.hpp"
#include "nppopt/errors.hpp"

namespace nppopt::asymptotics {

DensityGrid limiting_density_iid(double r, const BetaParams& prior, const QuadratureRule& rule) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("limiting density: r must be positive");
  return npp::posterior_from_kernel(
      npp::tabulate([r](double a, double) { return 0.5 * std::log(a * r / (1.0 + a * r)); }, rule),
      prior, rule);
}

DensityGrid limiting_density_glm(std::size_t p, const BetaParams& prior, const QuadratureRule& rule) {
  if (p < 1) throw DomainError("limiting density: p must be at least 1");
  const double half_p = 0.5 * static_cast<double>(p);
  return npp::posterior_from_kernel(
      npp::tabulate([half_p](double a, double) { return half_p * std::log(a / (a + 1.0)); }, rule),
      prior, rule);
}

std::vector<double> cdf_gap(double d, const NormalSetup& base, const BetaParams& prior,
                            const QuadratureRule& rule) {
  if (!std::isfinite(d) || d < 0.0) throw DomainError("cdf dominance: d must be non-negative");
  const families::NormalSummary hist{base.n0, 0.0, base.sigma02};
  const auto g0 = npp::marginal_a0_exact(families::NormalSummary{base.n, 0.0, base.sigma2}, hist,
                                         prior, npp::InitialPrior::flat(), rule);
  const auto gd = npp::marginal_a0_exact(families::NormalSummary{base.n, d, base.sigma2}, hist,
                                         prior, npp::InitialPrior::flat(), rule);
  const auto F0 = g0.cdf(), Fd = gd.cdf(), U0 = g0.upper_tail(), Ud = gd.upper_tail();
  std::vector<double> gap(rule.size(), 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (std::min(F0[i], U0[i]) <= 1e-10) continue;
    gap[i] = F0[i] <= U0[i] ? Fd[i] - F0[i] : U0[i] - Ud[i];
  }
  return gap;
}

double check_cdf_dominance(double d, const NormalSetup& base, const BetaParams& prior,
                           const QuadratureRule& rule) {
  if (!std::isfinite(d) || d < 0.0) throw DomainError("cdf dominance: d must be non-negative");
  const auto F0 = npp::marginal_a0_exact(families::NormalSummary{base.n, 0.0, base.sigma2},
                                         families::NormalSummary{base.n0, 0.0, base.sigma02}, prior,
                                         npp::InitialPrior::flat(), rule);
  const auto lower = F0.cdf(), upper = F0.upper_tail();
  const auto gap = cdf_gap(d, base, prior, rule);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gap.size(); ++i)
    if (std::min(lower[i], upper[i]) > 1e-10) m = std::min(m, gap[i]);
  return m;
}

double mass_below(const npp::DiscrepancyScenario& scenario, double bddot, double bddot0,
                  double epsilon, const BetaParams& prior, const QuadratureRule& rule) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("mass below: epsilon must lie in (0,1)");
  const auto kernel = npp::asymptotic_iid_kernel(scenario, bddot, bddot0);
  const auto full = npp::posterior_from_kernel(npp::tabulate(kernel, rule), prior, rule);
  const auto sub = numerics::map_rule(rule, 0.0, epsilon);
  double s = 0.0;
  for (std::size_t i = 0; i < sub.size(); ++i)
    s += sub.weights[i] * std::exp(kernel(sub.nodes[i], sub.complements[i]) +
                                   prior.log_density(sub.nodes[i], sub.complements[i]) -
                                   full.log_normalizer);
  return std::clamp(s, 0.0, 1.0);
}

ConvergenceReport convergence_diagnostic(double delta, double r,
                                         const std::vector<std::size_t>& schedule, double epsilon,
                                         const BetaParams& prior, const QuadratureRule& rule,
                                         double bddot, double bddot0) {
  if (delta == 0.0 || !std::isfinite(delta))
    throw DomainError("convergence diagnostic: delta must be non-zero; use the limiting density");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("convergence diagnostic: epsilon must lie in (0,1)");
  if (schedule.empty()) throw DomainError("convergence diagnostic: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw DomainError("convergence diagnostic: schedule must increase");
  ConvergenceReport rep;
  rep.schedule = schedule;
  rep.epsilon = epsilon;
  for (std::size_t n : schedule)
    rep.mass_below_eps.push_back(mass_below({delta, r, n}, bddot, bddot0, epsilon, prior, rule));
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.mass_below_eps.size(); ++i)
    rep.monotone = rep.monotone && rep.mass_below_eps[i] > rep.mass_below_eps[i - 1];
  return rep;
}

}  // namespace nppopt::asymptotics
