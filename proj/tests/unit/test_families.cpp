#include <doctest.h>

#include <cmath>

#include "nppopt/errors.hpp"
#include "nppopt/families.hpp"
#include "oracles.hpp"

using namespace nppopt;
using namespace nppopt::families;

TEST_CASE("cumulants") {
  const auto b = cumulant(Family::Bernoulli, 0.0);
  CHECK(b.b == doctest::Approx(std::log(2.0)));
  CHECK(b.b_dot == doctest::Approx(0.5));
  CHECK(b.b_ddot == doctest::Approx(0.25));
  const auto n = cumulant(Family::Normal, 1.5);
  CHECK(n.b == doctest::Approx(1.125));
  CHECK(n.b_dot == doctest::Approx(1.5));
  CHECK(n.b_ddot == doctest::Approx(1.0));
  CHECK(std::abs(cumulant(Family::Bernoulli, std::log(0.7 / 0.3)).b_dot - 0.7) <= 1e-12);
  for (double t = -30; t <= 30; t += 0.5) CHECK(cumulant(Family::Bernoulli, t).b_ddot > 0.0);
}

TEST_CASE("canonical parameter from the mean") {
  CHECK(canonical_from_mean(Family::Bernoulli, 0.5) == doctest::Approx(0.0));
  CHECK(canonical_from_mean(Family::Normal, 1.5) == doctest::Approx(1.5));
  CHECK(canonical_from_mean(Family::Bernoulli, 0.7) == doctest::Approx(std::log(7.0 / 3.0)).epsilon(1e-12));
  for (double m = 0.01; m < 1.0; m += 0.01)
    CHECK(std::abs(cumulant(Family::Bernoulli, canonical_from_mean(Family::Bernoulli, m)).b_dot - m) <= 1e-10);
  CHECK_THROWS_AS(canonical_from_mean(Family::Bernoulli, 0.0), DomainError);
  CHECK_THROWS_AS(canonical_from_mean(Family::Bernoulli, 1.0), DomainError);
}

TEST_CASE("intercept-only logistic MLE is the logit of the sample mean") {
  RegressionDataset d;
  d.X = Eigen::MatrixXd::Ones(30, 1);
  d.Y = Eigen::VectorXd::Zero(30);
  for (int i = 0; i < 21; ++i) d.Y[i] = 1.0;
  const auto fit = fit_glm_mle(d);
  CHECK(fit.beta_hat[0] == doctest::Approx(std::log(21.0 / 9.0)).epsilon(1e-10));
  CHECK(fit.P(0, 0) == doctest::Approx(0.7 * 0.3).epsilon(1e-10));
  CHECK(fit.n == 30);
}

TEST_CASE("linear MLE equals least squares") {
  numerics::RngStream rng(3, 0);
  auto d = simulate_dataset(Eigen::Vector2d(1.5, -1.0), GlmFamily::Linear, single_normal_covariate(), 30, 1.0, rng);
  const auto fit = fit_glm_mle(d);
  const Eigen::VectorXd ls = oracle::least_squares(d.X, d.Y);
  CHECK((fit.beta_hat - ls).cwiseAbs().maxCoeff() <= 1e-8);
  const Eigen::MatrixXd P = d.X.transpose() * d.X / 30.0;
  CHECK((fit.P - P).cwiseAbs().maxCoeff() <= 1e-10);
  // Within four standard errors of the truth.
  const Eigen::MatrixXd cov = (30.0 * fit.P).inverse();
  CHECK(std::abs(fit.beta_hat[0] - 1.5) < 4.0 * std::sqrt(cov(0, 0)));
  CHECK(std::abs(fit.beta_hat[1] + 1.0) < 4.0 * std::sqrt(cov(1, 1)));
}

TEST_CASE("logistic fit satisfies the score equations") {
  numerics::RngStream rng(11, 0);
  const Eigen::Vector3d beta(0.3, -0.8, 0.5);
  DesignSpec spec{true, {Covariate{}, Covariate{Covariate::Kind::Bernoulli, 0.4, 0.0}}};
  const auto d = simulate_dataset(beta, GlmFamily::Logistic, spec, 500, 1.0, rng);
  const auto fit = fit_glm_mle(d);
  Eigen::VectorXd score = Eigen::VectorXd::Zero(3);
  for (Eigen::Index i = 0; i < d.X.rows(); ++i)
    score += d.X.row(i).transpose() * (d.Y[i] - logistic(d.X.row(i).dot(fit.beta_hat)));
  CHECK(score.norm() <= 1e-8);
  CHECK((fit.P - unit_information(d.X, fit.beta_hat, GlmFamily::Logistic)).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.P);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("large-sample logistic fits cover the truth") {
  const Eigen::Vector2d beta(0.2, 0.7);
  int covered = 0;
  const int R = 40;
  for (int r = 0; r < R; ++r) {
    numerics::RngStream rng(100 + r, 0);
    const auto d = simulate_dataset(beta, GlmFamily::Logistic, single_normal_covariate(), 100000, 1.0, rng);
    const auto fit = fit_glm_mle(d);
    const Eigen::MatrixXd cov = (static_cast<double>(fit.n) * fit.P).inverse();
    bool ok = true;
    for (int j = 0; j < 2; ++j) ok = ok && std::abs(fit.beta_hat[j] - beta[j]) < 5.0 * std::sqrt(cov(j, j));
    covered += ok;
  }
  CHECK(covered == R);
}

TEST_CASE("fit errors") {
  RegressionDataset d;
  d.X = Eigen::MatrixXd::Ones(20, 2);
  d.X.col(1).setLinSpaced(20, -1, 1);
  d.Y = Eigen::VectorXd::Ones(20);
  CHECK_THROWS_AS(fit_glm_mle(d), ConvergenceError);
  d.X.col(1).setOnes();
  CHECK_THROWS_AS(fit_glm_mle(d), DomainError);
  d.X.col(1).setLinSpaced(20, -1, 1);
  d.Y[4] = 0.5;
  try {
    d.validate();
    FAIL("expected a validation error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("row 5") != std::string::npos);
  }
}

TEST_CASE("simulation") {
  numerics::RngStream a(5, 1), b(5, 1);
  const auto x = simulate_normal(1.5, 1.0, 30, a);
  const auto y = simulate_normal(1.5, 1.0, 30, b);
  CHECK(x.ybar == y.ybar);
  CHECK(x.n == 30);
  numerics::RngStream rng(9, 2);
  const auto s = simulate_bernoulli(0.7, 1000000, rng);
  CHECK(std::abs(s.mean() - 0.7) <= 4.0 * std::sqrt(0.21 / 1e6));
  CHECK_THROWS_AS(simulate_bernoulli(1.2, 10, rng), DomainError);
  CHECK_THROWS_AS(simulate_bernoulli(0.0, 10, rng), DomainError);
  const auto X = simulate_design(two_arm(), 10, rng);
  CHECK(X.cols() == 2);
  CHECK(X(0, 1) == 0.0);
  CHECK(X(1, 1) == 1.0);
}
