#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "nppopt/errors.hpp"
#include "nppopt/npp.hpp"

namespace nppopt::npp {

using numerics::log_beta_fn;

InitialPrior InitialPrior::normal(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return {Kind::Normal, std::move(mean), std::move(cov)};
}

InitialPrior InitialPrior::vague_normal(std::size_t p, double sd) {
  const auto k = static_cast<Eigen::Index>(p);
  return normal(Eigen::VectorXd::Zero(k), Eigen::MatrixXd::Identity(k, k) * sd * sd);
}

void InitialPrior::validate(std::size_t p) const {
  if (kind != Kind::Normal) return;
  const auto k = static_cast<Eigen::Index>(p);
  if (mean.size() != k || cov.rows() != k || cov.cols() != k)
    throw DomainError("initial prior: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw DomainError("initial prior: covariance not positive definite");
}

double DensityGrid::density(std::size_t i) const { return std::exp(log_density[i]); }

double DensityGrid::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += rule.weights[i] * density(i);
  return s;
}

double DensityGrid::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += rule.weights[i] * rule.nodes[i] * density(i);
  return s;
}

std::vector<double> DensityGrid::cdf() const {
  std::vector<double> out(size());
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    s += rule.weights[i] * density(i);
    out[i] = s;
  }
  return out;
}

std::vector<double> DensityGrid::upper_tail() const {
  std::vector<double> out(size());
  double s = 0.0;
  for (std::size_t i = size(); i-- > 0;) {
    out[i] = s;
    s += rule.weights[i] * density(i);
  }
  return out;
}

double DensityGrid::mass_above(double a) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    if (rule.nodes[i] > a) s += rule.weights[i] * density(i);
  return s;
}

void DiscrepancyScenario::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("scenario: r must be positive");
  if (n < 1) throw DomainError("scenario: n must be at least 1");
  if (!std::isfinite(d)) throw EvaluationError("scenario: discrepancy is non-finite");
}

DensityGrid density_from_log_kernel(const std::vector<double>& log_kernel, const QuadratureRule& rule) {
  if (log_kernel.size() != rule.size()) throw DomainError("density: kernel and rule sizes differ");
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_kernel.size(); ++i) {
    if (!std::isfinite(log_kernel[i]))
      throw EvaluationError("density: non-finite log density at node " + std::to_string(i) +
                            " (a0 = " + std::to_string(rule.nodes[i]) + ")");
    m = std::max(m, log_kernel[i]);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < log_kernel.size(); ++i) z += rule.weights[i] * std::exp(log_kernel[i] - m);
  DensityGrid g;
  g.rule = rule;
  g.log_normalizer = m + std::log(z);
  g.log_density.resize(log_kernel.size());
  for (std::size_t i = 0; i < log_kernel.size(); ++i) g.log_density[i] = log_kernel[i] - g.log_normalizer;
  g.normalized = true;
  return g;
}

DensityGrid posterior_from_kernel(const std::vector<double>& log_kernel, const BetaParams& prior,
                                  const QuadratureRule& rule) {
  prior.validate();
  std::vector<double> lk(log_kernel);
  for (std::size_t i = 0; i < lk.size() && i < rule.size(); ++i)
    lk[i] += prior.log_density(rule.nodes[i], rule.complements[i]);
  return density_from_log_kernel(lk, rule);
}

std::vector<double> tabulate(const LogKernel& kernel, const QuadratureRule& rule) {
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out[i] = kernel(rule.nodes[i], rule.complements[i]);
    if (!std::isfinite(out[i]))
      throw EvaluationError("non-finite log kernel at node " + std::to_string(i) +
                            " (a0 = " + std::to_string(rule.nodes[i]) + ")");
  }
  return out;
}

namespace {

void check_a0(double a0) {
  if (!(a0 > 0.0 && a0 <= 1.0))
    throw DomainError("a0 = " + std::to_string(a0) + " outside the admissible range (0,1]");
}

void require_flat(const InitialPrior& init) {
  if (init.kind != InitialPrior::Kind::Flat)
    throw DomainError("exact i.i.d. paths support only the flat initial prior");
}

}  // namespace

double log_norm_const(const DataSummary& historical, double a0, const InitialPrior& init) {
  check_a0(a0);
  require_flat(init);
  if (const auto* h = std::get_if<NormalSummary>(&historical)) {
    h->validate();
    return 0.5 * std::log(2.0 * std::numbers::pi * h->sigma2 / (a0 * static_cast<double>(h->n)));
  }
  const auto& b = std::get<BernoulliSummary>(historical);
  b.validate();
  const double f0 = static_cast<double>(b.n) - b.successes;
  return log_beta_fn(a0 * b.successes + 1.0, a0 * f0 + 1.0);
}

LogKernel exact_kernel(const DataSummary& current, const DataSummary& historical,
                       const InitialPrior& init) {
  require_flat(init);
  if (current.index() != historical.index())
    throw DomainError("exact marginal: current and historical summaries are from different families");
  if (const auto* c = std::get_if<NormalSummary>(&current)) {
    const auto& h = std::get<NormalSummary>(historical);
    c->validate();
    h.validate();
    const double vc = c->sigma2 / static_cast<double>(c->n);
    const double vh = h.sigma2 / static_cast<double>(h.n);
    const double d = c->ybar - h.ybar;
    return [vc, vh, d](double a, double) {
      const double v = vc + vh / a;
      return -0.5 * std::log(v) - d * d / (2.0 * v);
    };
  }
  const auto& c = std::get<BernoulliSummary>(current);
  const auto& h = std::get<BernoulliSummary>(historical);
  c.validate();
  h.validate();
  const double s = c.successes, f = static_cast<double>(c.n) - c.successes;
  const double s0 = h.successes, f0 = static_cast<double>(h.n) - h.successes;
  return [=](double a, double) {
    return log_beta_fn(a * s0 + s + 1.0, a * f0 + f + 1.0) - log_beta_fn(a * s0 + 1.0, a * f0 + 1.0);
  };
}

DensityGrid marginal_a0_exact(const DataSummary& current, const DataSummary& historical,
                              const BetaParams& prior, const InitialPrior& init,
                              const QuadratureRule& rule) {
  prior.validate();
  return posterior_from_kernel(tabulate(exact_kernel(current, historical, init), rule), prior, rule);
}

LogKernel asymptotic_iid_kernel(const DiscrepancyScenario& scenario, double bddot, double bddot0) {
  scenario.validate();
  if (!(bddot > 0.0) || !(bddot0 > 0.0)) throw DomainError("asymptotic kernel: b'' must be positive");
  const double r = scenario.r;
  const double q = bddot0 / bddot;
  const double n = static_cast<double>(scenario.n);
  const double dd = scenario.d * scenario.d * bddot0;
  return [=](double a, double) {
    const double denom = 1.0 + a * r * q;
    return 0.5 * std::log(a * r / denom) - n * a * r * dd / (2.0 * denom);
  };
}

DensityGrid marginal_a0_asymptotic_iid(const DiscrepancyScenario& scenario, double bddot,
                                       double bddot0, const BetaParams& prior,
                                       const QuadratureRule& rule) {
  return posterior_from_kernel(tabulate(asymptotic_iid_kernel(scenario, bddot, bddot0), rule), prior,
                               rule);
}

GlmGaussianKernel::GlmGaussianKernel(const FitResult& fit, const FitResult& fit0) {
  const auto p = fit.beta_hat.size();
  if (fit0.beta_hat.size() != p || fit.P.rows() != p || fit.P.cols() != p || fit0.P.rows() != p ||
      fit0.P.cols() != p)
    throw DomainError("GLM kernel: dimension mismatch between current and historical fits");
  if (fit.n < 1 || fit0.n < 1) throw DomainError("GLM kernel: sample sizes must be positive");
  Eigen::LLT<Eigen::MatrixXd> l1(fit.P), l0(fit0.P);
  if (l1.info() != Eigen::Success || l0.info() != Eigen::Success)
    throw DomainError("GLM kernel: information matrix not positive definite");
  beta_ = fit.beta_hat;
  beta0_ = fit0.beta_hat;
  delta_ = beta_ - beta0_;
  if (!delta_.allFinite()) throw EvaluationError("GLM kernel: non-finite discrepancy");
  J_ = static_cast<double>(fit.n) * fit.P;
  P0_ = fit0.P;
  n0_ = static_cast<double>(fit0.n);
  Jbeta_ = J_ * beta_;
  const auto I = Eigen::MatrixXd::Identity(p, p);
  Jinv_ = J_.llt().solve(I);
  P0inv_ = l0.solve(I);
  logdet_P0_ = 2.0 * l0.matrixLLT().diagonal().array().log().sum();
}

double GlmGaussianKernel::log_kernel(double a0) const {
  const double p = static_cast<double>(beta_.size());
  const double logdet_J0 = p * std::log(a0 * n0_) + logdet_P0_;
  Eigen::LLT<Eigen::MatrixXd> s(J_ + (a0 * n0_) * P0_);
  if (s.info() != Eigen::Success) throw EvaluationError("GLM kernel: J + J0 not positive definite");
  const double logdet_S = 2.0 * s.matrixLLT().diagonal().array().log().sum();
  double quad = 0.0;
  if (delta_.squaredNorm() > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> m(Jinv_ + P0inv_ / (a0 * n0_));
    quad = delta_.dot(m.solve(delta_));
  }
  return 0.5 * logdet_J0 - 0.5 * logdet_S - 0.5 * quad;
}

double GlmGaussianKernel::log_kernel_and_mean(double a0, std::size_t index, double& mean) const {
  const double p = static_cast<double>(beta_.size());
  const Eigen::MatrixXd J0 = (a0 * n0_) * P0_;
  Eigen::LLT<Eigen::MatrixXd> s(J_ + J0);
  if (s.info() != Eigen::Success) throw EvaluationError("GLM kernel: J + J0 not positive definite");
  mean = s.solve(Jbeta_ + J0 * beta0_)[static_cast<Eigen::Index>(index)];
  const double logdet_S = 2.0 * s.matrixLLT().diagonal().array().log().sum();
  double quad = 0.0;
  if (delta_.squaredNorm() > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> m(Jinv_ + P0inv_ / (a0 * n0_));
    quad = delta_.dot(m.solve(delta_));
  }
  return 0.5 * (p * std::log(a0 * n0_) + logdet_P0_) - 0.5 * logdet_S - 0.5 * quad;
}

void GlmGaussianKernel::conditional(double a0, Eigen::VectorXd& mean, Eigen::MatrixXd& cov) const {
  const Eigen::MatrixXd J0 = (a0 * n0_) * P0_;
  Eigen::LLT<Eigen::MatrixXd> s(J_ + J0);
  mean = s.solve(Jbeta_ + J0 * beta0_);
  cov = s.solve(Eigen::MatrixXd::Identity(beta_.size(), beta_.size()));
}

DensityGrid marginal_a0_asymptotic_glm(const FitResult& fit, const FitResult& fit0,
                                       const BetaParams& prior, const QuadratureRule& rule) {
  const GlmGaussianKernel k(fit, fit0);
  return posterior_from_kernel(tabulate([&](double a, double) { return k.log_kernel(a); }, rule),
                               prior, rule);
}

namespace {

// Objective a_cur * l(beta|D) + a_hist * l(beta|D0) + log pi0(beta) with its
// gradient and negative Hessian.
struct LaplaceObjective {
  const RegressionDataset* cur;
  const RegressionDataset& hist;
  const InitialPrior& init;
  Eigen::MatrixXd prior_prec;

  void accumulate(const RegressionDataset& d, double scale, const Eigen::VectorXd& beta, double& f,
                  Eigen::VectorXd& g, Eigen::MatrixXd& H) const {
    const Eigen::VectorXd eta = d.X * beta;
    if (d.family == families::GlmFamily::Linear) {
      const Eigen::VectorXd res = d.Y - eta;
      f += scale * (-0.5 * res.squaredNorm() / d.sigma2);
      g += scale * d.X.transpose() * res / d.sigma2;
      H += scale * d.X.transpose() * d.X / d.sigma2;
      return;
    }
    Eigen::VectorXd res(eta.size()), v(eta.size());
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu = families::logistic(eta[i]);
      res[i] = d.Y[i] - mu;
      v[i] = mu * (1.0 - mu);
      ll += d.Y[i] * eta[i] - (eta[i] > 0.0 ? eta[i] + std::log1p(std::exp(-eta[i])) : std::log1p(std::exp(eta[i])));
    }
    f += scale * ll;
    g += scale * d.X.transpose() * res;
    H += scale * d.X.transpose() * v.asDiagonal() * d.X;
  }

  void eval(double a0, const Eigen::VectorXd& beta, double& f, Eigen::VectorXd& g,
            Eigen::MatrixXd& H) const {
    const auto p = beta.size();
    f = 0.0;
    g = Eigen::VectorXd::Zero(p);
    H = Eigen::MatrixXd::Zero(p, p);
    if (cur) accumulate(*cur, 1.0, beta, f, g, H);
    accumulate(hist, a0, beta, f, g, H);
    switch (init.kind) {
      case InitialPrior::Kind::Flat: break;
      case InitialPrior::Kind::Normal: {
        const Eigen::VectorXd dv = beta - init.mean;
        f += -0.5 * dv.dot(prior_prec * dv);
        g -= prior_prec * dv;
        H += prior_prec;
        break;
      }
      case InitialPrior::Kind::Logistic:
        for (Eigen::Index j = 0; j < p; ++j) {
          const double mu = families::logistic(beta[j]);
          const double b = beta[j];
          f += b - 2.0 * (b > 0.0 ? b + std::log1p(std::exp(-b)) : std::log1p(std::exp(b)));
          g[j] += 1.0 - 2.0 * mu;
          H(j, j) += 2.0 * mu * (1.0 - mu);
        }
        break;
    }
  }

  // Returns max f - 0.5 logdet(H), warm-starting from beta.
  double laplace(double a0, Eigen::VectorXd& beta, std::size_t node, const char* which) const {
    double f;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    eval(a0, beta, f, g, H);
    for (int it = 0; it < 200; ++it) {
      Eigen::LLT<Eigen::MatrixXd> llt(H);
      if (llt.info() != Eigen::Success) break;
      const Eigen::VectorXd step = llt.solve(g);
      if (step.lpNorm<Eigen::Infinity>() < 1e-10 && g.norm() <= 1e-8)
        return f - llt.matrixLLT().diagonal().array().log().sum();
      double t = 1.0;
      Eigen::VectorXd next = beta + step;
      double fn;
      Eigen::VectorXd gn;
      Eigen::MatrixXd Hn;
      eval(a0, next, fn, gn, Hn);
      for (int h = 0; h < 40 && !(fn >= f - 1e-12 * std::abs(f)); ++h) {
        t *= 0.5;
        next = beta + t * step;
        eval(a0, next, fn, gn, Hn);
      }
      beta = next;
      f = fn;
      g = gn;
      H = Hn;
    }
    throw ConvergenceError(std::string("Laplace path: Newton did not converge for ") + which +
                           " at node " + std::to_string(node) + " (a0 = " + std::to_string(a0) + ")");
  }
};

}  // namespace

double log_norm_const_glm(const RegressionDataset& historical, double a0, const InitialPrior& init) {
  check_a0(a0);
  historical.validate();
  init.validate(historical.p());
  LaplaceObjective obj{nullptr, historical, init, {}};
  if (init.kind == InitialPrior::Kind::Normal)
    obj.prior_prec = init.cov.llt().solve(Eigen::MatrixXd::Identity(init.cov.rows(), init.cov.cols()));
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(historical.p()));
  const double p = static_cast<double>(historical.p());
  return obj.laplace(a0, beta, 0, "k_n") + 0.5 * p * std::log(2.0 * std::numbers::pi);
}

LaplaceTerms laplace_terms(const RegressionDataset& current, const RegressionDataset& historical,
                           const InitialPrior& init, const QuadratureRule& rule) {
  current.validate();
  historical.validate();
  if (current.p() != historical.p()) throw DomainError("Laplace path: datasets have different p");
  init.validate(current.p());
  LaplaceObjective with{&current, historical, init, {}};
  LaplaceObjective without{nullptr, historical, init, {}};
  if (init.kind == InitialPrior::Kind::Normal) {
    with.prior_prec = init.cov.llt().solve(Eigen::MatrixXd::Identity(init.cov.rows(), init.cov.cols()));
    without.prior_prec = with.prior_prec;
  }
  LaplaceTerms out;
  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(current.p()));
  Eigen::VectorXd b2 = b1;
  for (std::size_t i = rule.size(); i-- > 0;) {
    out.log_c1.push_back(with.laplace(rule.nodes[i], b1, i, "g_n"));
    out.log_c2.push_back(without.laplace(rule.nodes[i], b2, i, "k_n"));
  }
  std::reverse(out.log_c1.begin(), out.log_c1.end());
  std::reverse(out.log_c2.begin(), out.log_c2.end());
  return out;
}

DensityGrid marginal_a0_laplace_glm(const RegressionDataset& current,
                                    const RegressionDataset& historical, const BetaParams& prior,
                                    const InitialPrior& init, const QuadratureRule& rule) {
  prior.validate();
  const LaplaceTerms t = laplace_terms(current, historical, init, rule);
  std::vector<double> lk(rule.size());
  for (std::size_t i = 0; i < lk.size(); ++i) lk[i] = t.log_c1[i] - t.log_c2[i];
  return posterior_from_kernel(lk, prior, rule);
}

double PosteriorSummary::sd() const { return std::sqrt(std::max(variance, 0.0)); }

PosteriorSummary mixture_summary(const DensityGrid& grid, const std::vector<double>& means,
                                 const std::vector<double>& variances,
                                 const std::function<double(std::size_t, double)>& cond_cdf,
                                 double level) {
  if (!grid.normalized) throw DomainError("mixture summary: density grid is not normalized");
  const std::size_t m = grid.size();
  std::vector<double> mass(m);
  double total = 0.0, mean = 0.0, second = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    mass[i] = grid.rule.weights[i] * grid.density(i);
    total += mass[i];
    mean += mass[i] * means[i];
    second += mass[i] * (variances[i] + means[i] * means[i]);
    const double s = std::sqrt(variances[i]);
    lo = std::min(lo, means[i] - 12.0 * s);
    hi = std::max(hi, means[i] + 12.0 * s);
  }
  mean /= total;
  second /= total;
  auto F = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += mass[i] * cond_cdf(i, x);
    return s / total;
  };
  auto invert = [&](double prob) {
    double a = lo, b = hi;
    while (b - a > 1e-9 * std::max(1.0, std::abs(a) + std::abs(b))) {
      const double mid = 0.5 * (a + b);
      (F(mid) < prob ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };
  const double tail = 0.5 * (1.0 - level);
  return {mean, second - mean * mean, invert(tail), invert(1.0 - tail)};
}

PosteriorSummary posterior_mu_summary(const DataSummary& current, const DataSummary& historical,
                                      const BetaParams& prior, const InitialPrior& init,
                                      const QuadratureRule& rule) {
  const DensityGrid grid = marginal_a0_exact(current, historical, prior, init, rule);
  const std::size_t m = rule.size();
  std::vector<double> means(m), vars(m);
  if (const auto* c = std::get_if<NormalSummary>(&current)) {
    const auto& h = std::get<NormalSummary>(historical);
    const double pc = static_cast<double>(c->n) / c->sigma2;
    const double ph = static_cast<double>(h.n) / h.sigma2;
    for (std::size_t i = 0; i < m; ++i) {
      const double lam = pc + rule.nodes[i] * ph;
      means[i] = (pc * c->ybar + rule.nodes[i] * ph * h.ybar) / lam;
      vars[i] = 1.0 / lam;
    }
    return mixture_summary(grid, means, vars, [&](std::size_t i, double x) {
      return numerics::normal_cdf((x - means[i]) / std::sqrt(vars[i]));
    });
  }
  const auto& c = std::get<BernoulliSummary>(current);
  const auto& h = std::get<BernoulliSummary>(historical);
  std::vector<double> A(m), B(m);
  for (std::size_t i = 0; i < m; ++i) {
    A[i] = rule.nodes[i] * h.successes + c.successes + 1.0;
    B[i] = rule.nodes[i] * (static_cast<double>(h.n) - h.successes) +
           (static_cast<double>(c.n) - c.successes) + 1.0;
    const double t = A[i] + B[i];
    means[i] = A[i] / t;
    vars[i] = A[i] * B[i] / (t * t * (t + 1.0));
  }
  return mixture_summary(grid, means, vars, [&](std::size_t i, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(A[i], B[i], x);
  });
}

namespace {

void glm_moments(const GlmGaussianKernel& k, const QuadratureRule& rule, std::size_t index,
                 std::vector<double>& means, std::vector<double>& vars) {
  if (index >= k.p()) throw DomainError("GLM summary: coefficient index out of range");
  means.resize(rule.size());
  vars.resize(rule.size());
  Eigen::VectorXd mu;
  Eigen::MatrixXd cov;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    k.conditional(rule.nodes[i], mu, cov);
    means[i] = mu[static_cast<Eigen::Index>(index)];
    vars[i] = cov(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index));
  }
}

}  // namespace

PosteriorSummary posterior_beta_summary_glm(const FitResult& fit, const FitResult& fit0,
                                            const BetaParams& prior, const QuadratureRule& rule,
                                            std::size_t index) {
  const GlmGaussianKernel k(fit, fit0);
  const DensityGrid grid = posterior_from_kernel(
      tabulate([&](double a, double) { return k.log_kernel(a); }, rule), prior, rule);
  std::vector<double> means, vars;
  glm_moments(k, rule, index, means, vars);
  return mixture_summary(grid, means, vars, [&](std::size_t i, double x) {
    return numerics::normal_cdf((x - means[i]) / std::sqrt(vars[i]));
  });
}

double posterior_prob_positive(const FitResult& fit, const FitResult& fit0, const BetaParams& prior,
                               const QuadratureRule& rule, std::size_t index) {
  const GlmGaussianKernel k(fit, fit0);
  const DensityGrid grid = posterior_from_kernel(
      tabulate([&](double a, double) { return k.log_kernel(a); }, rule), prior, rule);
  std::vector<double> means, vars;
  glm_moments(k, rule, index, means, vars);
  double s = 0.0, total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double m = rule.weights[i] * grid.density(i);
    total += m;
    s += m * numerics::normal_cdf(means[i] / std::sqrt(vars[i]));
  }
  return s / total;
}

}  // namespace nppopt::npp
