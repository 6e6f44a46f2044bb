#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nppopt/criteria.hpp"
#include "nppopt/errors.hpp"

namespace nppopt::criteria {

void MseConfig::validate() const {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("MSE config: w must lie in [0,1]");
  if (!std::isfinite(d_mtd)) throw DomainError("MSE config: d_mtd must be finite");
  if (mc_reps < 100) throw DomainError("MSE config: mc_reps must be at least 100");
  if (std::holds_alternative<BernoulliModel>(model))
    throw DomainError("MSE config: Bernoulli models are not supported by the MSE criterion");
  std::visit(
      [](const auto& m) {
        if (m.n < 1 || m.n0 < 1) throw DomainError("model: sample sizes must be at least 1");
      },
      model);
}

std::vector<double> beta_log_prior(const BetaParams& params, const QuadratureRule& rule) {
  params.validate();
  std::vector<double> lp(rule.size());
  for (std::size_t i = 0; i < lp.size(); ++i) lp[i] = params.log_density(rule.nodes[i], rule.complements[i]);
  return lp;
}

std::vector<double> mixture_log_prior(double c, const QuadratureRule& rule) {
  const auto l1 = beta_log_prior({1.0, c}, rule);
  const auto l2 = beta_log_prior({c, 1.0}, rule);
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = std::max(l1[i], l2[i]);
    out[i] = std::log(0.5) + m + std::log(std::exp(l1[i] - m) + std::exp(l2[i] - m));
  }
  return out;
}

MsePieces pieces_from_estimates(const std::vector<double>& estimates, double truth) {
  const double R = static_cast<double>(estimates.size());
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= R;
  double var = 0.0, mse = 0.0, mse2 = 0.0;
  for (double e : estimates) {
    var += (e - mean) * (e - mean);
    const double se = (e - truth) * (e - truth);
    mse += se;
    mse2 += se * se;
  }
  var /= R;
  mse /= R;
  mse2 /= R;
  MsePieces p;
  p.mse = mse;
  p.bias_sq = (mean - truth) * (mean - truth);
  p.variance = var;
  p.mc_se = std::sqrt(std::max(mse2 - mse * mse, 0.0) / R);
  return p;
}

MseBank::MseBank(const MseConfig& cfg, double truth, double hist_center, std::uint64_t stream,
                 const QuadratureRule& rule)
    : truth_(truth), reps_(cfg.mc_reps), nodes_(rule.size()) {
  cfg.validate();
  rule.validate();
  log_weights_.resize(nodes_);
  for (std::size_t i = 0; i < nodes_; ++i) log_weights_[i] = std::log(rule.weights[i]);
  kernel_.resize(reps_ * nodes_);
  cmean_.resize(reps_ * nodes_);
  row_max_.resize(reps_);
  stat_.resize(reps_);
  numerics::RngStream base(cfg.seed, stream);

  if (const auto* m = std::get_if<NormalModel>(&cfg.model)) {
    const double n = static_cast<double>(m->n), n0 = static_cast<double>(m->n0);
    const double sd = std::sqrt(m->sigma2 / n);
    numerics::RngStream rng = base;
    for (std::size_t r = 0; r < reps_; ++r) {
      const double ybar = truth + sd * rng.normal();
      stat_[r] = ybar;
      const double d = ybar - hist_center;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < nodes_; ++i) {
        const double a = rule.nodes[i];
        const double v = m->sigma2 / n + m->sigma02 / (a * n0);
        const double k = -0.5 * std::log(v) - d * d / (2.0 * v);
        kernel_[r * nodes_ + i] = k;
        mx = std::max(mx, k);
        cmean_[r * nodes_ + i] = (n * ybar / m->sigma2 + a * n0 * hist_center / m->sigma02) /
                                 (n / m->sigma2 + a * n0 / m->sigma02);
      }
      row_max_[r] = mx;
    }
    return;
  }

  const auto& model = std::get<RegressionModel>(cfg.model);
  const RegressionPlugin pl = regression_plugin(model, cfg.d_mtd);
  const families::FitResult fit0{model.beta_hist, pl.P_hist, model.n0};
  numerics::RngStream design_rng(model.design_seed, 1);
  const Eigen::MatrixXd X = families::simulate_design(model.design, model.n, design_rng);
  Eigen::VectorXd beta = model.beta_hist;
  beta[static_cast<Eigen::Index>(model.shift_index)] = truth;
  for (std::size_t r = 0; r < reps_; ++r) {
    families::FitResult fit;
    for (std::uint64_t attempt = 0;; ++attempt) {
      numerics::RngStream rng = base.substream(r + attempt * reps_);
      try {
        fit = families::fit_glm_mle(families::simulate_outcomes(X, beta, model.family, model.sigma2, rng));
        break;
      } catch (const ConvergenceError&) {
        ++refits_;
        if (attempt >= 20) throw;
      }
    }
    stat_[r] = fit.beta_hat[static_cast<Eigen::Index>(model.shift_index)];
    const npp::GlmGaussianKernel k(fit, fit0);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_; ++i) {
      double mean;
      const double lk = k.log_kernel_and_mean(rule.nodes[i], model.shift_index, mean);
      kernel_[r * nodes_ + i] = lk;
      cmean_[r * nodes_ + i] = mean;
      mx = std::max(mx, lk);
    }
    row_max_[r] = mx;
  }
}

std::vector<double> MseBank::posterior_means(const std::vector<double>& log_prior) const {
  if (log_prior.size() != nodes_) throw DomainError("MSE bank: prior size does not match the rule");
  std::vector<double> lpw(nodes_);
  double lpw_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes_; ++i) {
    lpw[i] = log_prior[i] + log_weights_[i];
    lpw_max = std::max(lpw_max, lpw[i]);
  }
  std::vector<double> out(reps_);
  for (std::size_t r = 0; r < reps_; ++r) {
    const double* k = &kernel_[r * nodes_];
    const double* cm = &cmean_[r * nodes_];
    double shift = row_max_[r] + lpw_max;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < nodes_; ++i) {
      const double e = std::exp(k[i] + lpw[i] - shift);
      num += e * cm[i];
      den += e;
    }
    if (!(den > 1e-250)) {
      shift = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < nodes_; ++i) shift = std::max(shift, k[i] + lpw[i]);
      num = den = 0.0;
      for (std::size_t i = 0; i < nodes_; ++i) {
        const double e = std::exp(k[i] + lpw[i] - shift);
        num += e * cm[i];
        den += e;
      }
    }
    out[r] = num / den;
  }
  return out;
}

std::vector<double> MseBank::squared_errors(const std::vector<double>& log_prior) const {
  std::vector<double> e = posterior_means(log_prior);
  for (double& x : e) x = (x - truth_) * (x - truth_);
  return e;
}

MsePieces MseBank::pieces(const std::vector<double>& log_prior) const {
  return pieces_from_estimates(posterior_means(log_prior), truth_);
}

std::pair<MseScenario, MseScenario> mse_scenarios(const MseConfig& cfg) {
  cfg.validate();
  if (const auto* m = std::get_if<NormalModel>(&cfg.model)) {
    if (cfg.fixed_current_mean) return {{m->ybar0, m->ybar0}, {m->ybar0, m->ybar0 - cfg.d_mtd}};
    return {{m->ybar0, m->ybar0}, {m->ybar0 + cfg.d_mtd, m->ybar0}};
  }
  const auto& r = std::get<RegressionModel>(cfg.model);
  const double b = r.beta_hist[static_cast<Eigen::Index>(r.shift_index)];
  return {{b, b}, {b + cfg.d_mtd, b}};
}

MsePieces mse_of_posterior_mean(double mu_star, const BetaParams& params, const MseConfig& cfg,
                                const QuadratureRule& rule) {
  const double center = std::holds_alternative<NormalModel>(cfg.model)
                            ? std::get<NormalModel>(cfg.model).ybar0
                            : 0.0;
  const MseBank bank(cfg, mu_star, center, 1, rule);
  return bank.pieces(beta_log_prior(params, rule));
}

MseObjective::MseObjective(const MseConfig& cfg, const QuadratureRule& rule) : cfg_(cfg), rule_(rule) {
  const auto [s1, s2] = mse_scenarios(cfg);
  bank_star_ = std::make_shared<MseBank>(cfg, s1.truth, s1.hist_center, 1, rule);
  bank_mtd_ = std::make_shared<MseBank>(cfg, s2.truth, s2.hist_center, 1, rule);
}

double MseObjective::evaluate(const std::vector<double>& log_prior) const {
  double v = 0.0;
  if (cfg_.w > 0.0) v += cfg_.w * bank_star_->pieces(log_prior).mse;
  if (cfg_.w < 1.0) v += (1.0 - cfg_.w) * bank_mtd_->pieces(log_prior).mse;
  return v;
}

double MseObjective::operator()(const BetaParams& params) const {
  return evaluate(beta_log_prior(params, rule_));
}

MsePieces MseObjective::compatible(const BetaParams& params) const {
  return bank_star_->pieces(beta_log_prior(params, rule_));
}

MsePieces MseObjective::mtd(const BetaParams& params) const {
  return bank_mtd_->pieces(beta_log_prior(params, rule_));
}

MsePieces MseObjective::summed(const BetaParams& params) const {
  const MsePieces a = compatible(params), b = mtd(params);
  return {a.mse + b.mse, a.bias_sq + b.bias_sq, a.variance + b.variance,
          std::sqrt(a.mc_se * a.mc_se + b.mc_se * b.mc_se)};
}

double mse_objective(const BetaParams& params, const MseConfig& cfg, const QuadratureRule& rule) {
  return MseObjective(cfg, rule)(params);
}

OptimResult derive_optimal_mse(const MseObjective& objective, double grid_lo, double grid_hi,
                               double step) {
  return numerics::grid_search_min([&](double a, double b) { return objective({a, b}); }, grid_lo,
                                   grid_hi, step);
}

OptimResult derive_optimal_mse(const MseConfig& cfg, const QuadratureRule& rule, double grid_lo,
                               double grid_hi, double step) {
  return derive_optimal_mse(MseObjective(cfg, rule), grid_lo, grid_hi, step);
}

namespace {

double log_normal_pdf(double x, double mu, double var) {
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - (x - mu) * (x - mu) / (2.0 * var);
}

}  // namespace

std::vector<ComparisonRow> compare_estimators(const MseConfig& cfg, const std::vector<double>& d_obs,
                                              const std::vector<Candidate>& candidates,
                                              const QuadratureRule& rule) {
  const auto* m = std::get_if<NormalModel>(&cfg.model);
  if (!m) throw DomainError("compare_estimators: only the normal i.i.d. model is supported");
  std::vector<ComparisonRow> rows;
  for (double d : d_obs) {
    const MseBank bank(cfg, m->ybar0 + d, m->ybar0, 1, rule);
    for (const auto& c : candidates) {
      MsePieces p;
      switch (c.kind) {
        case Candidate::Kind::OptimalBeta:
          p = bank.pieces(beta_log_prior(c.params, rule));
          break;
        case Candidate::Kind::MixtureBeta:
          p = bank.pieces(mixture_log_prior(c.c, rule));
          break;
        case Candidate::Kind::RobustMixture: {
          if (!(c.informative_weight >= 0.0 && c.informative_weight <= 1.0))
            throw DomainError("robust mixture: informative weight must lie in [0,1]");
          const double n = static_cast<double>(m->n);
          const double se2 = m->sigma2 / n;
          const double tau_inf = m->sigma02 / static_cast<double>(m->n0);
          const double tau_vag = c.vague_sd * c.vague_sd;
          std::vector<double> est(bank.reps());
          for (std::size_t r = 0; r < bank.reps(); ++r) {
            const double y = bank.statistics()[r];
            const double mi = (y / se2 + m->ybar0 / tau_inf) / (1.0 / se2 + 1.0 / tau_inf);
            const double mv = (y / se2 + m->ybar0 / tau_vag) / (1.0 / se2 + 1.0 / tau_vag);
            if (c.informative_weight <= 0.0) {
              est[r] = mv;
            } else if (c.informative_weight >= 1.0) {
              est[r] = mi;
            } else {
              const double li = std::log(c.informative_weight) + log_normal_pdf(y, m->ybar0, tau_inf + se2);
              const double lv = std::log1p(-c.informative_weight) + log_normal_pdf(y, m->ybar0, tau_vag + se2);
              const double wi = 1.0 / (1.0 + std::exp(lv - li));
              est[r] = wi * mi + (1.0 - wi) * mv;
            }
          }
          p = pieces_from_estimates(est, bank.truth());
          break;
        }
      }
      rows.push_back({d, c.name, p});
    }
  }
  return rows;
}

BetaParams prior_from_mean(double mean, double concentration) {
  if (!(mean > 0.0 && mean < 1.0)) throw DomainError("prior mean must lie in (0,1)");
  if (!(concentration > 0.0)) throw DomainError("prior concentration must be positive");
  return {concentration * mean, concentration * (1.0 - mean)};
}

std::vector<SweepRow> sweep_mse_vs_prior_mean(const SweepConfig& cfg, const QuadratureRule& rule) {
  if (cfg.total_n < 2) throw DomainError("sweep: total_n must be at least 2");
  std::vector<SweepRow> rows;
  for (double ratio : cfg.ratios) {
    if (!(ratio > 0.0)) throw DomainError("sweep: ratios must be positive");
    const double tot = static_cast<double>(cfg.total_n);
    auto n = static_cast<std::size_t>(std::lround(tot * ratio / (1.0 + ratio)));
    n = std::clamp<std::size_t>(n, 1, cfg.total_n - 1);
    const std::size_t n0 = cfg.total_n - n;
    MseConfig mc;
    mc.w = 1.0;
    mc.d_mtd = 0.0;
    mc.model = NormalModel{n, n0, cfg.ybar0, cfg.sigma2, cfg.sigma2};
    mc.mc_reps = cfg.mc_reps;
    mc.seed = cfg.seed;
    const MseBank bank(mc, cfg.ybar0, cfg.ybar0, 1, rule);
    for (double m : cfg.prior_means) {
      const BetaParams prior = prior_from_mean(m, cfg.concentration);
      rows.push_back({ratio, n, n0, m, prior, bank.pieces(beta_log_prior(prior, rule))});
    }
  }
  return rows;
}

}  // namespace nppopt::criteria
