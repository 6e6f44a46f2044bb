#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nppopt/families.hpp"
#include "nppopt/npp.hpp"
#include "nppopt/numerics.hpp"

namespace nppopt::criteria {

using npp::DensityGrid;
using numerics::QuadratureRule;

struct NormalModel {
  std::size_t n = 30;
  std::size_t n0 = 30;
  double ybar0 = 1.5;
  double sigma2 = 1.0;
  double sigma02 = 1.0;
};

struct BernoulliModel {
  std::size_t n = 30;
  std::size_t n0 = 30;
  double ybar0 = 0.5;
  // Place the historical and hypothetical current means symmetrically about
  // ybar0 so the binomial variance is the same in both.
  bool symmetric = false;
};

// Regression models are described by the historical coefficient vector and
// a covariate design; information matrices are population averages over a
// seeded design of design_rows rows. The MTD scenario shifts coefficient
// shift_index by d_mtd.
struct RegressionModel {
  families::GlmFamily family = families::GlmFamily::Logistic;
  std::size_t n = 100;
  std::size_t n0 = 100;
  Eigen::VectorXd beta_hist;
  std::size_t shift_index = 0;
  families::DesignSpec design;
  double sigma2 = 1.0;
  std::size_t design_rows = 20000;
  std::uint64_t design_seed = 1;
};

using ModelSpec = std::variant<NormalModel, BernoulliModel, RegressionModel>;

struct KlConfig {
  double w = 0.5;
  double c = 10.0;
  double d_mtd = 1.0;
  ModelSpec model = NormalModel{};
  void validate() const;
};

double kl_divergence(const DensityGrid& p, const npp::LogKernel& log_q);

double beta_log_density(double alpha, double beta, double a, double one_minus_a);

// Caches the prior-free likelihood kernels of the compatible and MTD
// scenarios so each evaluation only adds the beta log prior.
class KlObjective {
 public:
  KlObjective(const KlConfig& cfg, const QuadratureRule& rule);

  double operator()(const BetaParams& params) const;
  DensityGrid compatible_posterior(const BetaParams& params) const;
  DensityGrid mtd_posterior(const BetaParams& params) const;

  const std::vector<double>& compatible_kernel() const { return k_star_; }
  const std::vector<double>& mtd_kernel() const { return k_mtd_; }

 private:
  KlConfig cfg_;
  QuadratureRule rule_;
  std::vector<double> k_star_, k_mtd_, log_t1_, log_t2_;
};

double kl_objective(const BetaParams& params, const KlConfig& cfg, const QuadratureRule& rule);

OptimResult derive_optimal_kl(const KlConfig& cfg, const QuadratureRule& rule,
                              const numerics::HyperSearchOptions& opts = {});

OptimResult derive_optimal_kl_fixed(const KlConfig& cfg, const QuadratureRule& rule,
                                    numerics::FixedShape which, double fixed_value,
                                    const numerics::HyperSearchOptions& opts = {});

// Population information and MTD truth used by the regression paths.
struct RegressionPlugin {
  Eigen::MatrixXd P_hist;
  Eigen::VectorXd beta_mtd;
  Eigen::MatrixXd P_mtd;
};

RegressionPlugin regression_plugin(const RegressionModel& model, double d_mtd);

struct MseConfig {
  double w = 0.5;
  double d_mtd = 1.0;
  ModelSpec model = NormalModel{};
  std::size_t mc_reps = 10000;
  std::uint64_t seed = 1;
  // Hold the true current mean fixed at ybar0 and move the historical mean
  // by -d_mtd instead of moving the truth.
  bool fixed_current_mean = false;
  void validate() const;
};

struct MsePieces {
  double mse = 0.0;
  double bias_sq = 0.0;
  double variance = 0.0;
  double mc_se = 0.0;
};

// Monte Carlo replicate bank for one true value: per replicate, the a0
// likelihood kernel and the conditional posterior mean at every node. Any a0
// prior is then evaluated without re-simulating.
class MseBank {
 public:
  // For normal models hist_center is the historical mean; regression models
  // take the historical fit from the model and ignore it.
  MseBank(const MseConfig& cfg, double truth, double hist_center, std::uint64_t stream,
          const QuadratureRule& rule);

  double truth() const { return truth_; }
  // Per-replicate current-data statistic (sample mean for normal models).
  const std::vector<double>& statistics() const { return stat_; }
  std::size_t reps() const { return reps_; }

  std::vector<double> posterior_means(const std::vector<double>& log_prior) const;
  std::vector<double> squared_errors(const std::vector<double>& log_prior) const;
  MsePieces pieces(const std::vector<double>& log_prior) const;
  std::size_t refits() const { return refits_; }

 private:
  double truth_;
  std::size_t reps_;
  std::size_t nodes_;
  std::vector<double> log_weights_;
  std::vector<double> kernel_;  // reps x nodes
  std::vector<double> row_max_;
  std::vector<double> cmean_;   // reps x nodes
  std::vector<double> stat_;
  std::size_t refits_ = 0;
};

std::vector<double> beta_log_prior(const BetaParams& params, const QuadratureRule& rule);
std::vector<double> mixture_log_prior(double c, const QuadratureRule& rule);

struct MseScenario {
  double truth;
  double hist_center;
};

// Compatible and MTD scenarios of the objective.
std::pair<MseScenario, MseScenario> mse_scenarios(const MseConfig& cfg);

MsePieces pieces_from_estimates(const std::vector<double>& estimates, double truth);

MsePieces mse_of_posterior_mean(double mu_star, const BetaParams& params, const MseConfig& cfg,
                                const QuadratureRule& rule);

class MseObjective {
 public:
  MseObjective(const MseConfig& cfg, const QuadratureRule& rule);

  double operator()(const BetaParams& params) const;
  double evaluate(const std::vector<double>& log_prior) const;
  MsePieces compatible(const BetaParams& params) const;
  MsePieces mtd(const BetaParams& params) const;
  // Sum of the two MSEs and of their bias and variance parts.
  MsePieces summed(const BetaParams& params) const;

  const MseBank& compatible_bank() const { return *bank_star_; }
  const MseBank& mtd_bank() const { return *bank_mtd_; }
  const QuadratureRule& rule() const { return rule_; }

 private:
  MseConfig cfg_;
  QuadratureRule rule_;
  std::shared_ptr<MseBank> bank_star_, bank_mtd_;
};

double mse_objective(const BetaParams& params, const MseConfig& cfg, const QuadratureRule& rule);

OptimResult derive_optimal_mse(const MseConfig& cfg, const QuadratureRule& rule,
                               double grid_lo = 0.5, double grid_hi = 6.0, double step = 0.5);

OptimResult derive_optimal_mse(const MseObjective& objective, double grid_lo = 0.5,
                               double grid_hi = 6.0, double step = 0.5);

struct Candidate {
  enum class Kind { OptimalBeta, MixtureBeta, RobustMixture };
  Kind kind = Kind::OptimalBeta;
  std::string name;
  BetaParams params;         // OptimalBeta
  double c = 1000.0;         // MixtureBeta
  double informative_weight = 0.5;  // RobustMixture
  double vague_sd = 100.0;          // RobustMixture
};

struct ComparisonRow {
  double d_obs;
  std::string candidate;
  MsePieces pieces;
};

std::vector<ComparisonRow> compare_estimators(const MseConfig& cfg,
                                              const std::vector<double>& d_obs,
                                              const std::vector<Candidate>& candidates,
                                              const QuadratureRule& rule);

struct SweepConfig {
  std::size_t total_n = 60;
  std::vector<double> ratios{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> prior_means{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double concentration = 2.0;
  double ybar0 = 1.5;
  double sigma2 = 1.0;
  std::size_t mc_reps = 10000;
  std::uint64_t seed = 1;
};

struct SweepRow {
  double ratio;
  std::size_t n;
  std::size_t n0;
  double prior_mean;
  BetaParams prior;
  MsePieces pieces;
};

BetaParams prior_from_mean(double mean, double concentration);

std::vector<SweepRow> sweep_mse_vs_prior_mean(const SweepConfig& cfg, const QuadratureRule& rule);

}  // namespace nppopt::criteria
