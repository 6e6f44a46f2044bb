#include <cmath>
#include <string>

#include "nppopt/errors.hpp"
#include "nppopt/families.hpp"

namespace nppopt::families {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

double log1p_exp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

Cumulant cumulant(Family family, double theta) {
  if (!std::isfinite(theta)) throw DomainError("cumulant: theta must be finite");
  switch (family) {
    case Family::Normal:
      return {0.5 * theta * theta, theta, 1.0};
    case Family::Bernoulli: {
      const double mu = logistic(theta);
      return {log1p_exp(theta), mu, mu * (1.0 - mu)};
    }
  }
  throw DomainError("cumulant: unknown family");
}

double canonical_from_mean(Family family, double mean) {
  switch (family) {
    case Family::Normal:
      if (!std::isfinite(mean)) throw DomainError("canonical_from_mean: mean must be finite");
      return mean;
    case Family::Bernoulli:
      if (!(mean > 0.0 && mean < 1.0))
        throw DomainError("canonical_from_mean: Bernoulli mean must lie in (0,1)");
      return std::log(mean) - std::log1p(-mean);
  }
  throw DomainError("canonical_from_mean: unknown family");
}

void NormalSummary::validate() const {
  if (n < 1) throw DomainError("normal summary: n must be at least 1");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("normal summary: sigma2 must be positive");
  if (!std::isfinite(ybar)) throw DomainError("normal summary: ybar must be finite");
}

void BernoulliSummary::validate() const {
  if (n < 1) throw DomainError("Bernoulli summary: n must be at least 1");
  if (!(successes >= 0.0 && successes <= static_cast<double>(n)))
    throw DomainError("Bernoulli summary: successes must lie in [0, n]");
}

void RegressionDataset::validate() const {
  if (X.rows() != Y.size()) throw DomainError("regression dataset: X and Y row counts differ");
  if (X.cols() < 1) throw DomainError("regression dataset: design has no columns");
  if (X.rows() <= X.cols()) throw DomainError("regression dataset: need n > p");
  if (!X.allFinite() || !Y.allFinite()) throw DomainError("regression dataset: non-finite entries");
  if (family == GlmFamily::Logistic) {
    for (Eigen::Index i = 0; i < Y.size(); ++i)
      if (Y[i] != 0.0 && Y[i] != 1.0)
        throw DomainError("regression dataset: logistic outcome not in {0,1} at row " + std::to_string(i + 1));
  } else if (!(sigma2 > 0.0)) {
    throw DomainError("regression dataset: sigma2 must be positive");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < X.cols()) throw DomainError("regression dataset: design is rank deficient");
}

Eigen::MatrixXd unit_information(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                                  GlmFamily family, double sigma2) {
  const double n = static_cast<double>(X.rows());
  if (family == GlmFamily::Linear) return X.transpose() * X / (n * sigma2);
  const Eigen::VectorXd eta = X * beta;
  Eigen::VectorXd v(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double mu = logistic(eta[i]);
    v[i] = mu * (1.0 - mu);
  }
  return X.transpose() * v.asDiagonal() * X / n;
}

double log_likelihood(const RegressionDataset& data, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = data.X * beta;
  double ll = 0.0;
  if (data.family == GlmFamily::Linear) {
    ll = -0.5 * (data.Y - eta).squaredNorm() / data.sigma2;
  } else {
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += data.Y[i] * eta[i] - log1p_exp(eta[i]);
  }
  return ll;
}

FitResult fit_glm_mle(const RegressionDataset& data, const FitOptions& opts) {
  data.validate();
  FitResult out;
  out.n = data.n();
  const auto p = static_cast<Eigen::Index>(data.p());
  if (data.family == GlmFamily::Linear) {
    out.beta_hat = data.X.colPivHouseholderQr().solve(data.Y);
    out.P = unit_information(data.X, out.beta_hat, data.family, data.sigma2);
    return out;
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = log_likelihood(data, beta);
  for (int it = 0; it < opts.max_iter; ++it) {
    const Eigen::VectorXd eta = data.X * beta;
    Eigen::VectorXd resid(eta.size()), v(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu = logistic(eta[i]);
      resid[i] = data.Y[i] - mu;
      v[i] = mu * (1.0 - mu);
    }
    const Eigen::VectorXd grad = data.X.transpose() * resid;
    const Eigen::MatrixXd H = data.X.transpose() * v.asDiagonal() * data.X;
    const Eigen::VectorXd step = H.ldlt().solve(grad);
    const bool negligible_step = step.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + beta.lpNorm<Eigen::Infinity>()) &&
                                 grad.norm() <= opts.grad_tol * static_cast<double>(data.n());
    if (grad.norm() <= opts.grad_tol || negligible_step) {
      out.beta_hat = beta;
      out.P = unit_information(data.X, beta, data.family);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.P, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < 1e-8)
        throw ConvergenceError("fit_glm_mle: information is singular at the optimum; data appear separated");
      return out;
    }
    double t = 1.0;
    Eigen::VectorXd next = beta + step;
    double ll_next = log_likelihood(data, next);
    for (int h = 0; h < 30 && !(ll_next >= ll - 1e-13 * (1.0 + std::abs(ll))); ++h) {
      t *= 0.5;
      next = beta + t * step;
      ll_next = log_likelihood(data, next);
    }
    beta = next;
    ll = ll_next;
    if (beta.lpNorm<Eigen::Infinity>() > opts.separation_bound)
      throw ConvergenceError("fit_glm_mle: coefficients exceed bound; data appear separated");
  }
  throw ConvergenceError("fit_glm_mle: Newton iterations did not converge");
}

DesignSpec single_normal_covariate() { return {true, {Covariate{}}}; }

DesignSpec two_arm() { return {true, {Covariate{Covariate::Kind::Alternating}}}; }

Eigen::MatrixXd simulate_design(const DesignSpec& spec, std::size_t n, numerics::RngStream& rng) {
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd X(rows, static_cast<Eigen::Index>(spec.p()));
  Eigen::Index col = 0;
  if (spec.intercept) X.col(col++).setOnes();
  for (const auto& cv : spec.covariates) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      switch (cv.kind) {
        case Covariate::Kind::StandardNormal: X(i, col) = rng.normal(); break;
        case Covariate::Kind::Alternating: X(i, col) = static_cast<double>(i % 2); break;
        case Covariate::Kind::Bernoulli: X(i, col) = rng.bernoulli(cv.a) ? 1.0 : 0.0; break;
        case Covariate::Kind::Normal: X(i, col) = cv.a + cv.b * rng.normal(); break;
      }
    }
    ++col;
  }
  return X;
}

NormalSummary simulate_normal(double mu, double sigma2, std::size_t n, numerics::RngStream& rng) {
  if (!std::isfinite(mu) || !(sigma2 > 0.0) || n < 1) throw DomainError("simulate_normal: invalid truth");
  const double sd = std::sqrt(sigma2);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += mu + sd * rng.normal();
  return {n, s / static_cast<double>(n), sigma2};
}

BernoulliSummary simulate_bernoulli(double mu, std::size_t n, numerics::RngStream& rng) {
  if (!(mu > 0.0 && mu < 1.0) || n < 1) throw DomainError("simulate_bernoulli: mean must lie in (0,1)");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += rng.bernoulli(mu) ? 1.0 : 0.0;
  return {n, s};
}

RegressionDataset simulate_outcomes(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                                    GlmFamily family, double sigma2, numerics::RngStream& rng) {
  if (X.cols() != beta.size()) throw DomainError("simulate_outcomes: dimension mismatch");
  if (!beta.allFinite()) throw DomainError("simulate_outcomes: non-finite coefficients");
  RegressionDataset d{X, Eigen::VectorXd(X.rows()), family, sigma2};
  const Eigen::VectorXd eta = X * beta;
  const double sd = std::sqrt(sigma2);
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    d.Y[i] = family == GlmFamily::Linear ? eta[i] + sd * rng.normal()
                                         : (rng.bernoulli(logistic(eta[i])) ? 1.0 : 0.0);
  return d;
}

RegressionDataset simulate_dataset(const Eigen::VectorXd& beta, GlmFamily family,
                                   const DesignSpec& design, std::size_t n, double sigma2,
                                   numerics::RngStream& rng) {
  if (n < 1) throw DomainError("simulate_dataset: n must be at least 1");
  const Eigen::MatrixXd X = simulate_design(design, n, rng);
  return simulate_outcomes(X, beta, family, sigma2, rng);
}

}  // namespace nppopt::families
