#include "nppopt/scenarios.hpp"

#include "nppopt/errors.hpp"

namespace nppopt::scenarios {

criteria::NormalModel normal_model() { return criteria::NormalModel{30, 30, 1.5, 1.0, 1.0}; }

criteria::KlConfig normal_kl(double d_mtd) {
  criteria::KlConfig cfg;
  cfg.w = 0.5;
  cfg.c = 10.0;
  cfg.d_mtd = d_mtd;
  cfg.model = normal_model();
  return cfg;
}

criteria::MseConfig normal_mse(double d_mtd, std::size_t mc_reps, std::uint64_t seed) {
  criteria::MseConfig cfg;
  cfg.w = 0.5;
  cfg.d_mtd = d_mtd;
  cfg.model = normal_model();
  cfg.mc_reps = mc_reps;
  cfg.seed = seed;
  return cfg;
}

CaseStudy lupus() {
  CaseStudy cs;
  cs.name = "lupus";
  cs.n0 = 1125;
  cs.effect0 = 0.481;
  cs.n_obs = 92;
  cs.effect_obs = 0.371;
  cs.n_sim = 100;
  cs.d_mtd = -0.481;
  cs.design = families::two_arm();
  return cs;
}

CaseStudy melanoma() {
  CaseStudy cs;
  cs.name = "melanoma";
  cs.n0 = 285;
  cs.effect0 = -0.423;
  cs.n_obs = 427;
  cs.effect_obs = 0.098;
  cs.n_sim = 400;
  cs.d_mtd = 0.423;
  cs.design = families::two_arm();
  cs.design.covariates.push_back({families::Covariate::Kind::Bernoulli, 0.4, 0.0});
  cs.design.covariates.push_back({families::Covariate::Kind::Normal, 0.0, 0.3});
  return cs;
}

CaseStudy case_by_name(const std::string& name) {
  if (name == "lupus") return lupus();
  if (name == "melanoma") return melanoma();
  throw DomainError("unknown case study '" + name + "' (expected lupus or melanoma)");
}

namespace {

Eigen::VectorXd coefficients(const CaseStudy& cs, double effect) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cs.design.p()));
  b[0] = cs.control_logit;
  b[1] = effect;
  return b;
}

}  // namespace

criteria::RegressionModel case_model(const CaseStudy& cs, std::size_t n) {
  criteria::RegressionModel m;
  m.family = families::GlmFamily::Logistic;
  m.n = n;
  m.n0 = cs.n0;
  m.beta_hist = coefficients(cs, cs.effect0);
  m.shift_index = 1;
  m.design = cs.design;
  return m;
}

families::FitResult case_historical_fit(const CaseStudy& cs) {
  const auto m = case_model(cs, cs.n_obs);
  return {m.beta_hist, criteria::regression_plugin(m, 0.0).P_hist, cs.n0};
}

families::FitResult case_current_fit(const CaseStudy& cs) {
  auto m = case_model(cs, cs.n_obs);
  m.beta_hist = coefficients(cs, cs.effect_obs);
  return {m.beta_hist, criteria::regression_plugin(m, 0.0).P_hist, cs.n_obs};
}

criteria::KlConfig case_kl(const CaseStudy& cs) {
  criteria::KlConfig cfg;
  cfg.w = 0.5;
  cfg.c = 10.0;
  cfg.d_mtd = cs.d_mtd;
  cfg.model = case_model(cs, cs.n_sim);
  return cfg;
}

criteria::MseConfig case_mse(const CaseStudy& cs, std::size_t mc_reps, std::uint64_t seed) {
  criteria::MseConfig cfg;
  cfg.w = 0.5;
  cfg.d_mtd = cs.d_mtd;
  cfg.model = case_model(cs, cs.n_sim);
  cfg.mc_reps = mc_reps;
  cfg.seed = seed;
  return cfg;
}

design::PowerConfig case_power(const CaseStudy& cs, design::FittingPrior prior, std::size_t reps,
                               std::uint64_t seed) {
  design::PowerConfig cfg;
  cfg.historical = case_historical_fit(cs);
  cfg.design = cs.design;
  cfg.index = 1;
  cfg.prior = std::move(prior);
  cfg.reps = reps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace nppopt::scenarios
