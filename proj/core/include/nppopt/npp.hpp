#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nppopt/families.hpp"
#include "nppopt/numerics.hpp"
#include "nppopt/types.hpp"

namespace nppopt::npp {

using families::BernoulliSummary;
using families::DataSummary;
using families::FitResult;
using families::NormalSummary;
using families::RegressionDataset;
using numerics::QuadratureRule;

struct InitialPrior {
  // Flat: improper uniform on the mean (normal) or beta(1,1) on the success
  // probability (Bernoulli). Logistic: independent standard logistic
  // densities on each coefficient, i.e. uniform on an intercept's success
  // probability.
  enum class Kind { Flat, Normal, Logistic };
  Kind kind = Kind::Flat;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  static InitialPrior flat() { return {}; }
  static InitialPrior normal(Eigen::VectorXd mean, Eigen::MatrixXd cov);
  static InitialPrior vague_normal(std::size_t p, double sd = 100.0);
  static InitialPrior logistic() { return {Kind::Logistic, {}, {}}; }
  void validate(std::size_t p) const;
};

struct DensityGrid {
  QuadratureRule rule;
  std::vector<double> log_density;
  bool normalized = false;
  double log_normalizer = 0.0;

  std::size_t size() const { return log_density.size(); }
  double density(std::size_t i) const;
  double integral() const;
  double mean() const;
  std::vector<double> cdf() const;
  // Tail sums from the right, accurate where the CDF is close to one.
  std::vector<double> upper_tail() const;
  double mass_above(double a) const;
};

struct DiscrepancyScenario {
  double d = 0.0;
  double r = 1.0;
  std::size_t n = 1;
  void validate() const;
};

// A log kernel in a0, supplied with both a0 and 1 - a0.
using LogKernel = std::function<double(double, double)>;

DensityGrid density_from_log_kernel(const std::vector<double>& log_kernel, const QuadratureRule& rule);

// Adds the beta log prior to a likelihood kernel on the rule's nodes and normalizes.
DensityGrid posterior_from_kernel(const std::vector<double>& log_kernel, const BetaParams& prior,
                                  const QuadratureRule& rule);

std::vector<double> tabulate(const LogKernel& kernel, const QuadratureRule& rule);

double log_norm_const(const DataSummary& historical, double a0,
                      const InitialPrior& init = InitialPrior::flat());

// Laplace approximation of log int L(beta|D0)^a0 pi0(beta) dbeta.
double log_norm_const_glm(const RegressionDataset& historical, double a0, const InitialPrior& init);

LogKernel exact_kernel(const DataSummary& current, const DataSummary& historical,
                       const InitialPrior& init = InitialPrior::flat());

DensityGrid marginal_a0_exact(const DataSummary& current, const DataSummary& historical,
                              const BetaParams& prior, const InitialPrior& init,
                              const QuadratureRule& rule);

LogKernel asymptotic_iid_kernel(const DiscrepancyScenario& scenario, double bddot, double bddot0);

DensityGrid marginal_a0_asymptotic_iid(const DiscrepancyScenario& scenario, double bddot,
                                       double bddot0, const BetaParams& prior,
                                       const QuadratureRule& rule);

// Log kernel and conditional posterior of the coefficients given a0 under the
// normal approximation, with current information J = n P and historical
// information J0 = a0 n0 P0.
class GlmGaussianKernel {
 public:
  GlmGaussianKernel(const FitResult& fit, const FitResult& fit0);

  double log_kernel(double a0) const;
  void conditional(double a0, Eigen::VectorXd& mean, Eigen::MatrixXd& cov) const;
  // Log kernel together with the conditional mean of one coefficient.
  double log_kernel_and_mean(double a0, std::size_t index, double& mean) const;
  std::size_t p() const { return static_cast<std::size_t>(beta_.size()); }

 private:
  Eigen::VectorXd beta_, beta0_, delta_, Jbeta_;
  Eigen::MatrixXd J_, P0_, Jinv_, P0inv_;
  double n0_;
  double logdet_P0_;
};

DensityGrid marginal_a0_asymptotic_glm(const FitResult& fit, const FitResult& fit0,
                                       const BetaParams& prior, const QuadratureRule& rule);

struct LaplaceTerms {
  std::vector<double> log_c1;
  std::vector<double> log_c2;
};

LaplaceTerms laplace_terms(const RegressionDataset& current, const RegressionDataset& historical,
                           const InitialPrior& init, const QuadratureRule& rule);

DensityGrid marginal_a0_laplace_glm(const RegressionDataset& current,
                                    const RegressionDataset& historical, const BetaParams& prior,
                                    const InitialPrior& init, const QuadratureRule& rule);

struct PosteriorSummary {
  double mean;
  double variance;
  double lower;
  double upper;
  double sd() const;
};

PosteriorSummary posterior_mu_summary(const DataSummary& current, const DataSummary& historical,
                                      const BetaParams& prior, const InitialPrior& init,
                                      const QuadratureRule& rule);

// Mixture summary over a normalized a0 grid, given per-node conditional moments
// and conditional CDFs.
PosteriorSummary mixture_summary(const DensityGrid& grid, const std::vector<double>& means,
                                 const std::vector<double>& variances,
                                 const std::function<double(std::size_t, double)>& cond_cdf,
                                 double level = 0.95);

PosteriorSummary posterior_beta_summary_glm(const FitResult& fit, const FitResult& fit0,
                                            const BetaParams& prior, const QuadratureRule& rule,
                                            std::size_t index);

// Posterior probability that the indexed coefficient exceeds zero.
double posterior_prob_positive(const FitResult& fit, const FitResult& fit0,
                               const BetaParams& prior, const QuadratureRule& rule,
                               std::size_t index);

}  // namespace nppopt::npp
