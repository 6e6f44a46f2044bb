#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "nppopt/design.hpp"
#include "nppopt/errors.hpp"
#include "nppopt/scenarios.hpp"

using namespace nppopt;
using namespace nppopt::design;

namespace {

const numerics::QuadratureRule& rule() {
  static const auto r = numerics::default_rule();
  return r;
}

PowerConfig lupus_cfg(std::size_t reps = 1000) {
  return scenarios::case_power(scenarios::lupus(), BetaParams{1, 1}, reps, 3);
}

}  // namespace

TEST_CASE("borrowing raises power when the historical effect is positive") {
  const auto cfg = lupus_cfg();
  const auto pts = simulate_power_many(cfg, 50, {{1e6, 1}, {1, 1}, {1, 1e6}}, rule());
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].power > pts[2].power);
  CHECK(pts[0].power >= pts[1].power);
  for (const auto& p : pts) CHECK(p.mc_se == doctest::Approx(std::sqrt(p.power * (1 - p.power) / cfg.reps)).epsilon(1e-12));
  const auto one = simulate_power(cfg, 50, rule());
  CHECK(one.power == pts[1].power);
}

TEST_CASE("no-borrowing power matches a normal approximation") {
  auto cfg = lupus_cfg(2000);
  const std::size_t n = 100;
  const auto got = simulate_power_many(cfg, n, {{1, 1e6}}, rule())[0];
  const auto draws = sampling_prior_draws(cfg);
  const double se = std::sqrt((static_cast<double>(n) * cfg.historical.P).inverse()(1, 1));
  const double z = boost::math::quantile(boost::math::normal(), cfg.gamma);
  double want = 0.0;
  for (const auto& b : draws) want += numerics::normal_cdf(b[1] / se - z);
  want /= static_cast<double>(draws.size());
  MESSAGE("simulated " << got.power << " vs approximation " << want);
  CHECK(std::abs(got.power - want) <= 0.05);
}

TEST_CASE("power falls as the success threshold rises") {
  auto cfg = lupus_cfg();
  double prev = 1.0;
  for (double g : {0.9, 0.975, 0.99}) {
    cfg.gamma = g;
    const double p = simulate_power(cfg, 75, rule()).power;
    CHECK(p <= prev);
    prev = p;
  }
  cfg.gamma = 0.999999;
  cfg.prior = BetaParams{1, 1e6};
  CHECK(simulate_power(cfg, 50, rule()).power <= 0.002);
}

TEST_CASE("power runs are reproducible") {
  const auto cfg = lupus_cfg(500);
  const auto a = power_curve(cfg, rule());
  const auto b = power_curve(cfg, rule());
  REQUIRE(a.size() == cfg.ns.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == cfg.ns[i]);
    CHECK(a[i].power == b[i].power);
  }
}

TEST_CASE("sampling prior draws") {
  auto cfg = lupus_cfg();
  cfg.sampling_draws = 20000;
  const auto d = sampling_prior_draws(cfg);
  REQUIRE(d.size() == 20000);
  const Eigen::MatrixXd cov = (static_cast<double>(cfg.historical.n) * cfg.historical.P).inverse();
  for (Eigen::Index j = 0; j < 2; ++j) {
    double m = 0.0, v = 0.0;
    for (const auto& x : d) m += x[j];
    m /= static_cast<double>(d.size());
    for (const auto& x : d) v += (x[j] - m) * (x[j] - m);
    v /= static_cast<double>(d.size() - 1);
    CHECK(std::abs(m - cfg.historical.beta_hat[j]) <= 4.0 * std::sqrt(cov(j, j) / d.size()));
    CHECK(v == doctest::Approx(cov(j, j)).epsilon(0.05));
  }
}

TEST_CASE("derived fitting priors") {
  auto cfg = lupus_cfg(500);
  DeriveKl k{scenarios::case_kl(scenarios::lupus())};
  cfg.prior = k;
  const auto p = resolve_prior(cfg, 100, rule());
  CHECK(p.alpha0 > 0.0);
  CHECK(p.beta0 > 0.0);
  cfg.prior = BetaParams{2, 3};
  CHECK(resolve_prior(cfg, 100, rule()) == BetaParams{2, 3});
}

TEST_CASE("power configuration validation") {
  auto cfg = lupus_cfg();
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = lupus_cfg();
  cfg.reps = 100;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = lupus_cfg();
  cfg.index = 5;
  CHECK_THROWS_AS(simulate_power(cfg, 50, rule()), DomainError);
  cfg = lupus_cfg();
  cfg.historical.P = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}
