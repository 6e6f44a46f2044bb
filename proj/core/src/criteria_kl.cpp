#include <cmath>
#include <limits>
#include <string>

#include "nppopt/criteria.hpp"
#include "nppopt/errors.hpp"

namespace nppopt::criteria {

namespace {

void validate_model(const ModelSpec& model) {
  std::visit(
      [](const auto& m) {
        if (m.n < 1 || m.n0 < 1) throw DomainError("model: sample sizes must be at least 1");
      },
      model);
  if (const auto* r = std::get_if<RegressionModel>(&model)) {
    if (r->beta_hist.size() != static_cast<Eigen::Index>(r->design.p()))
      throw DomainError("regression model: coefficient count does not match the design");
    if (r->shift_index >= r->design.p()) throw DomainError("regression model: shift index out of range");
  }
}

}  // namespace

void KlConfig::validate() const {
  if (!(w > 0.0 && w < 1.0)) throw DomainError("KL config: w must lie in (0,1)");
  if (!(c > 1.0) || !std::isfinite(c)) throw DomainError("KL config: c must exceed 1");
  if (!std::isfinite(d_mtd)) throw DomainError("KL config: d_mtd must be finite");
  validate_model(model);
}

double beta_log_density(double alpha, double beta, double a, double one_minus_a) {
  return BetaParams{alpha, beta}.log_density(a, one_minus_a);
}

double kl_divergence(const DensityGrid& p, const npp::LogKernel& log_q) {
  if (!p.normalized) throw DomainError("kl_divergence: reference density is not normalized");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.density(i);
    if (!(pi > 0.0)) continue;
    const double lq = log_q(p.rule.nodes[i], p.rule.complements[i]);
    if (!std::isfinite(lq))
      throw EvaluationError("kl_divergence: target density vanishes or is non-finite at node " +
                            std::to_string(i));
    s += p.rule.weights[i] * pi * (p.log_density[i] - lq);
  }
  return s;
}

RegressionPlugin regression_plugin(const RegressionModel& model, double d_mtd) {
  numerics::RngStream rng(model.design_seed, 0);
  const Eigen::MatrixXd X = families::simulate_design(model.design, model.design_rows, rng);
  RegressionPlugin out;
  out.P_hist = families::unit_information(X, model.beta_hist, model.family, model.sigma2);
  out.beta_mtd = model.beta_hist;
  out.beta_mtd[static_cast<Eigen::Index>(model.shift_index)] += d_mtd;
  out.P_mtd = families::unit_information(X, out.beta_mtd, model.family, model.sigma2);
  return out;
}

KlObjective::KlObjective(const KlConfig& cfg, const QuadratureRule& rule) : cfg_(cfg), rule_(rule) {
  cfg.validate();
  rule.validate();
  const double d = cfg.d_mtd;
  if (const auto* m = std::get_if<NormalModel>(&cfg.model)) {
    const families::NormalSummary hist{m->n0, m->ybar0, m->sigma02};
    k_star_ = npp::tabulate(npp::exact_kernel(families::NormalSummary{m->n, m->ybar0, m->sigma2}, hist), rule);
    k_mtd_ = npp::tabulate(npp::exact_kernel(families::NormalSummary{m->n, m->ybar0 + d, m->sigma2}, hist), rule);
  } else if (const auto* b = std::get_if<BernoulliModel>(&cfg.model)) {
    const double n = static_cast<double>(b->n), n0 = static_cast<double>(b->n0);
    const double h_mtd = b->symmetric ? b->ybar0 - 0.5 * d : b->ybar0;
    const double c_mtd = b->symmetric ? b->ybar0 + 0.5 * d : b->ybar0 + d;
    if (!(h_mtd >= 0.0 && h_mtd <= 1.0 && c_mtd >= 0.0 && c_mtd <= 1.0))
      throw DomainError("KL config: hypothetical Bernoulli means leave [0,1]");
    k_star_ = npp::tabulate(npp::exact_kernel(families::BernoulliSummary{b->n, b->ybar0 * n},
                                              families::BernoulliSummary{b->n0, b->ybar0 * n0}),
                            rule);
    k_mtd_ = npp::tabulate(npp::exact_kernel(families::BernoulliSummary{b->n, c_mtd * n},
                                             families::BernoulliSummary{b->n0, h_mtd * n0}),
                           rule);
  } else {
    const auto& r = std::get<RegressionModel>(cfg.model);
    const RegressionPlugin pl = regression_plugin(r, d);
    const families::FitResult fit0{r.beta_hist, pl.P_hist, r.n0};
    const npp::GlmGaussianKernel ks(families::FitResult{r.beta_hist, pl.P_hist, r.n}, fit0);
    const npp::GlmGaussianKernel km(families::FitResult{pl.beta_mtd, pl.P_mtd, r.n}, fit0);
    k_star_ = npp::tabulate([&](double a, double) { return ks.log_kernel(a); }, rule);
    k_mtd_ = npp::tabulate([&](double a, double) { return km.log_kernel(a); }, rule);
  }
  log_t1_.resize(rule.size());
  log_t2_.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    log_t1_[i] = beta_log_density(cfg.c, 1.0, rule.nodes[i], rule.complements[i]);
    log_t2_[i] = beta_log_density(1.0, cfg.c, rule.nodes[i], rule.complements[i]);
  }
}

namespace {

double kl_term(const std::vector<double>& kernel, const std::vector<double>& log_prior,
               const std::vector<double>& log_target, const QuadratureRule& rule) {
  const std::size_t m = kernel.size();
  std::vector<double> lp(m);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    lp[i] = kernel[i] + log_prior[i];
    mx = std::max(mx, lp[i]);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) z += rule.weights[i] * std::exp(lp[i] - mx);
  const double lz = mx + std::log(z);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double l = lp[i] - lz;
    s += rule.weights[i] * std::exp(l) * (l - log_target[i]);
  }
  return s;
}

}  // namespace

double KlObjective::operator()(const BetaParams& params) const {
  params.validate();
  std::vector<double> lp(rule_.size());
  for (std::size_t i = 0; i < lp.size(); ++i) lp[i] = params.log_density(rule_.nodes[i], rule_.complements[i]);
  return cfg_.w * kl_term(k_star_, lp, log_t1_, rule_) +
         (1.0 - cfg_.w) * kl_term(k_mtd_, lp, log_t2_, rule_);
}

DensityGrid KlObjective::compatible_posterior(const BetaParams& params) const {
  return npp::posterior_from_kernel(k_star_, params, rule_);
}

DensityGrid KlObjective::mtd_posterior(const BetaParams& params) const {
  return npp::posterior_from_kernel(k_mtd_, params, rule_);
}

double kl_objective(const BetaParams& params, const KlConfig& cfg, const QuadratureRule& rule) {
  return KlObjective(cfg, rule)(params);
}

OptimResult derive_optimal_kl(const KlConfig& cfg, const QuadratureRule& rule,
                              const numerics::HyperSearchOptions& opts) {
  const KlObjective obj(cfg, rule);
  OptimResult r = numerics::minimize_beta_hyper([&](const BetaParams& p) { return obj(p); }, opts);
  if (!r.converged) throw ConvergenceError("derive_optimal_kl: no restart converged");
  return r;
}

OptimResult derive_optimal_kl_fixed(const KlConfig& cfg, const QuadratureRule& rule,
                                    numerics::FixedShape which, double fixed_value,
                                    const numerics::HyperSearchOptions& opts) {
  const KlObjective obj(cfg, rule);
  return numerics::minimize_beta_hyper_fixed([&](const BetaParams& p) { return obj(p); }, which,
                                             fixed_value, opts);
}

}  // namespace nppopt::criteria
