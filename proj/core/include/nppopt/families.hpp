#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nppopt/numerics.hpp"

namespace nppopt::families {

enum class Family { Normal, Bernoulli };
enum class GlmFamily { Logistic, Linear };

struct Cumulant {
  double b;
  double b_dot;
  double b_ddot;
};

Cumulant cumulant(Family family, double theta);
double canonical_from_mean(Family family, double mean);

struct NormalSummary {
  std::size_t n = 1;
  double ybar = 0.0;
  double sigma2 = 1.0;
  void validate() const;
};

// successes is real-valued so hypothetical plug-in datasets can carry any mean.
struct BernoulliSummary {
  std::size_t n = 1;
  double successes = 0.0;
  double mean() const { return successes / static_cast<double>(n); }
  void validate() const;
};

using DataSummary = std::variant<NormalSummary, BernoulliSummary>;

struct RegressionDataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd Y;
  GlmFamily family = GlmFamily::Logistic;
  double sigma2 = 1.0;

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }
  void validate() const;
};

// P is the per-observation information at beta_hat.
struct FitResult {
  Eigen::VectorXd beta_hat;
  Eigen::MatrixXd P;
  std::size_t n = 0;
};

struct FitOptions {
  int max_iter = 100;
  double grad_tol = 1e-8;
  double separation_bound = 30.0;
};

FitResult fit_glm_mle(const RegressionDataset& data, const FitOptions& opts = {});

// Per-observation information (1/n) sum b''(x'beta) x x' at beta.
Eigen::MatrixXd unit_information(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                                  GlmFamily family, double sigma2 = 1.0);

double log_likelihood(const RegressionDataset& data, const Eigen::VectorXd& beta);

struct Covariate {
  enum class Kind { StandardNormal, Alternating, Bernoulli, Normal };
  Kind kind = Kind::StandardNormal;
  double a = 0.0;  // Bernoulli: probability; Normal: mean
  double b = 1.0;  // Normal: standard deviation
};

struct DesignSpec {
  bool intercept = true;
  std::vector<Covariate> covariates;
  std::size_t p() const { return covariates.size() + (intercept ? 1 : 0); }
};

DesignSpec single_normal_covariate();
DesignSpec two_arm();

Eigen::MatrixXd simulate_design(const DesignSpec& spec, std::size_t n, numerics::RngStream& rng);

NormalSummary simulate_normal(double mu, double sigma2, std::size_t n, numerics::RngStream& rng);
BernoulliSummary simulate_bernoulli(double mu, std::size_t n, numerics::RngStream& rng);
RegressionDataset simulate_outcomes(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                                    GlmFamily family, double sigma2, numerics::RngStream& rng);
RegressionDataset simulate_dataset(const Eigen::VectorXd& beta, GlmFamily family,
                                   const DesignSpec& design, std::size_t n, double sigma2,
                                   numerics::RngStream& rng);

double logistic(double x);

}  // namespace nppopt::families
