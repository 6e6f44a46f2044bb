#include "nppopt/design.hpp"

#include <cmath>

#include "nppopt/errors.hpp"

namespace nppopt::design {

void PowerConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("power config: gamma must lie in (0,1)");
  if (reps < 500) throw DomainError("power config: reps must be at least 500");
  if (sampling_draws < 1) throw DomainError("power config: sampling_draws must be positive");
  if (ns.empty()) throw DomainError("power config: no sample sizes given");
  for (std::size_t n : ns)
    if (n < design.p() + 1) throw DomainError("power config: sample size too small for the design");
  const auto p = static_cast<Eigen::Index>(design.p());
  if (historical.beta_hat.size() != p || historical.P.rows() != p || historical.P.cols() != p)
    throw DomainError("power config: historical fit does not match the design dimension");
  if (historical.n < 1) throw DomainError("power config: historical fit has no observations");
  if (index >= design.p()) throw DomainError("power config: coefficient index out of range");
  if (const auto* b = std::get_if<BetaParams>(&prior)) b->validate();
}

std::vector<Eigen::VectorXd> sampling_prior_draws(const PowerConfig& cfg) {
  const Eigen::MatrixXd cov =
      (static_cast<double>(cfg.historical.n) * cfg.historical.P).inverse();
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw EvaluationError("sampling prior: historical covariance is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  numerics::RngStream rng(cfg.seed, 2);
  const auto p = cfg.historical.beta_hat.size();
  std::vector<Eigen::VectorXd> draws(cfg.sampling_draws);
  Eigen::VectorXd z(p);
  for (auto& d : draws) {
    for (Eigen::Index j = 0; j < p; ++j) z[j] = rng.normal();
    d = cfg.historical.beta_hat + L * z;
  }
  return draws;
}

namespace {

template <class Cfg>
Cfg with_current_n(Cfg base, std::size_t n) {
  std::visit([n](auto& m) { m.n = n; }, base.model);
  return base;
}

}  // namespace

BetaParams resolve_prior(const PowerConfig& cfg, std::size_t n, const numerics::QuadratureRule& rule) {
  if (const auto* b = std::get_if<BetaParams>(&cfg.prior)) return *b;
  if (const auto* k = std::get_if<DeriveKl>(&cfg.prior))
    return criteria::derive_optimal_kl(with_current_n(k->base, n), rule).params;
  const auto& m = std::get<DeriveMse>(cfg.prior);
  return criteria::derive_optimal_mse(with_current_n(m.base, n), rule, m.grid_lo, m.grid_hi, m.step)
      .params;
}

std::vector<PowerPoint> simulate_power_many(const PowerConfig& cfg, std::size_t n,
                                            const std::vector<BetaParams>& priors,
                                            const numerics::QuadratureRule& rule) {
  cfg.validate();
  for (const auto& p : priors) p.validate();
  const auto draws = sampling_prior_draws(cfg);
  const numerics::RngStream base(cfg.seed, 3);
  std::vector<std::size_t> wins(priors.size(), 0);
  for (std::size_t r = 0; r < cfg.reps; ++r) {
    numerics::RngStream rng = base.substream(r);
    const auto pick = std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(draws.size())),
                               draws.size() - 1);
    const Eigen::VectorXd& truth = draws[pick];
    const Eigen::MatrixXd X = families::simulate_design(cfg.design, n, rng);
    families::FitResult fit;
    for (int attempt = 0;; ++attempt) {
      try {
        fit = families::fit_glm_mle(
            families::simulate_outcomes(X, truth, families::GlmFamily::Logistic, 1.0, rng));
        break;
      } catch (const ConvergenceError&) {
        if (attempt >= 50) throw;
      }
    }
    for (std::size_t k = 0; k < priors.size(); ++k)
      if (npp::posterior_prob_positive(fit, cfg.historical, priors[k], rule, cfg.index) > cfg.gamma)
        ++wins[k];
  }
  std::vector<PowerPoint> out;
  const double R = static_cast<double>(cfg.reps);
  for (std::size_t k = 0; k < priors.size(); ++k) {
    const double pw = static_cast<double>(wins[k]) / R;
    out.push_back({n, pw, std::sqrt(pw * (1.0 - pw) / R), priors[k]});
  }
  return out;
}

PowerPoint simulate_power(const PowerConfig& cfg, std::size_t n, const numerics::QuadratureRule& rule) {
  return simulate_power_many(cfg, n, {resolve_prior(cfg, n, rule)}, rule).front();
}

std::vector<PowerPoint> power_curve(const PowerConfig& cfg, const numerics::QuadratureRule& rule) {
  std::vector<PowerPoint> out;
  for (std::size_t n : cfg.ns) out.push_back(simulate_power(cfg, n, rule));
  return out;
}

}  // namespace nppopt::design
