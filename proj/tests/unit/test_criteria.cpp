#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "nppopt/criteria.hpp"
#include "nppopt/errors.hpp"
#include "oracles.hpp"

using namespace nppopt;
using namespace nppopt::criteria;

namespace {

const numerics::QuadratureRule& rule() {
  static const auto r = numerics::default_rule();
  return r;
}

KlConfig kl_cfg(double d) {
  KlConfig c;
  c.d_mtd = d;
  return c;
}

MseConfig mse_cfg(double d, std::size_t reps) {
  MseConfig c;
  c.d_mtd = d;
  c.mc_reps = reps;
  return c;
}

}  // namespace

TEST_CASE("KL divergence against closed forms") {
  const auto u = npp::density_from_log_kernel(std::vector<double>(rule().size(), 0.0), rule());
  const double kl = kl_divergence(u, [](double a, double b) { return beta_log_density(10, 1, a, b); });
  CHECK(kl == doctest::Approx(9.0 - std::log(10.0)).epsilon(1e-8));
  const auto b = npp::posterior_from_kernel(std::vector<double>(rule().size(), 0.0), {2.5, 0.7}, rule());
  CHECK(std::abs(kl_divergence(b, [](double a, double c) { return beta_log_density(2.5, 0.7, a, c); })) <= 1e-8);
  auto beta_kl = [](double a1, double b1, double a2, double b2) {
    using boost::math::digamma;
    return std::lgamma(a2) + std::lgamma(b2) - std::lgamma(a2 + b2) - std::lgamma(a1) - std::lgamma(b1) +
           std::lgamma(a1 + b1) + (a1 - a2) * digamma(a1) + (b1 - b2) * digamma(b1) +
           (a2 - a1 + b2 - b1) * digamma(a1 + b1);
  };
  for (const auto& [a1, b1, a2, b2] : {std::array{2.0, 3.0, 3.0, 2.0}, std::array{0.7, 1.9, 4.0, 0.6}}) {
    const auto p = npp::posterior_from_kernel(std::vector<double>(rule().size(), 0.0), {a1, b1}, rule());
    const double got = kl_divergence(p, [&](double a, double c) { return beta_log_density(a2, b2, a, c); });
    CHECK(got == doctest::Approx(beta_kl(a1, b1, a2, b2)).epsilon(1e-8));
  }
}

TEST_CASE("KL objective on the normal model") {
  const auto cfg = kl_cfg(1.0);
  const KlObjective obj(cfg, rule());
  CHECK(obj({1, 0.4}) < obj({1, 1}));
  CHECK(obj({1, 0.4}) < obj({2, 2}));
  CHECK(obj({1, 0.4}) == kl_objective({1, 0.4}, cfg, rule()));
  numerics::RngStream rng(3, 0);
  for (int i = 0; i < 20; ++i) {
    const BetaParams q{0.2 + 5.0 * rng.uniform(), 0.2 + 5.0 * rng.uniform()};
    CHECK(std::abs(obj({q.alpha0 + 1e-4, q.beta0 + 1e-4}) - obj(q)) <= 1e-2);
  }
  const auto a = derive_optimal_kl(cfg, rule());
  const auto b = derive_optimal_kl(cfg, rule());
  CHECK(a.params == b.params);
  CHECK(a.objective == b.objective);
  CHECK(a.converged);
  for (const BetaParams& q : {BetaParams{a.params.alpha0 * 1.05, a.params.beta0}, BetaParams{a.params.alpha0, a.params.beta0 * 0.95},
                              BetaParams{a.params.alpha0 * 0.95, a.params.beta0 * 1.05}})
    CHECK(obj(q) >= a.objective);
  const auto fx = derive_optimal_kl_fixed(cfg, rule(), numerics::FixedShape::Alpha, a.params.alpha0);
  CHECK(fx.params.beta0 == doctest::Approx(a.params.beta0).epsilon(1e-3));
}

TEST_CASE("KL objective pieces are KL divergences to the targets") {
  const auto cfg = kl_cfg(0.5);
  const KlObjective obj(cfg, rule());
  const BetaParams p{1.7, 0.9};
  const double k1 = kl_divergence(obj.compatible_posterior(p), [](double a, double b) { return beta_log_density(10, 1, a, b); });
  const double k2 = kl_divergence(obj.mtd_posterior(p), [](double a, double b) { return beta_log_density(1, 10, a, b); });
  CHECK(obj(p) == doctest::Approx(0.5 * k1 + 0.5 * k2).epsilon(1e-12));
}

TEST_CASE("KL configuration validation") {
  auto c = kl_cfg(1.0);
  c.w = 1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = kl_cfg(1.0);
  c.c = 1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = kl_cfg(std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("MSE pieces decompose") {
  const auto p = pieces_from_estimates({1, 2, 3}, 0.0);
  CHECK(p.mse == doctest::Approx(14.0 / 3));
  CHECK(p.bias_sq == doctest::Approx(4.0));
  CHECK(p.variance == doctest::Approx(2.0 / 3));
  const auto cfg = mse_cfg(1.0, 2000);
  const MseObjective obj(cfg, rule());
  for (const BetaParams& q : {BetaParams{1, 1}, BetaParams{0.5, 2}, BetaParams{3, 0.5}}) {
    const auto s = obj.compatible(q);
    CHECK(s.mse == doctest::Approx(s.bias_sq + s.variance).epsilon(1e-12));
    CHECK(obj(q) == doctest::Approx(0.5 * obj.compatible(q).mse + 0.5 * obj.mtd(q).mse).epsilon(1e-12));
    CHECK(obj.summed(q).mse == doctest::Approx(obj.compatible(q).mse + obj.mtd(q).mse).epsilon(1e-12));
  }
}

TEST_CASE("full borrowing reproduces the pooled estimator") {
  const auto cfg = mse_cfg(0.0, 10000);
  const auto p = mse_of_posterior_mean(1.5, {1e6, 1}, cfg, rule());
  const double want = 0.25 / 30.0;
  CHECK(std::abs(p.mse - want) <= 4.0 * p.mc_se + 1e-5);
  const auto none = mse_of_posterior_mean(1.5, {1, 1e6}, cfg, rule());
  CHECK(std::abs(none.mse - 1.0 / 30.0) <= 4.0 * none.mc_se + 1e-4);
}

TEST_CASE("MSE with w = 1 ignores the MTD scenario") {
  auto cfg = mse_cfg(1.0, 500);
  cfg.w = 1.0;
  const MseObjective obj(cfg, rule());
  CHECK(obj({2, 0.5}) == obj.compatible({2, 0.5}).mse);
  CHECK(mse_objective({2, 0.5}, cfg, rule()) == obj({2, 0.5}));
}

TEST_CASE("common random numbers shrink the SE of differences") {
  const auto cfg = mse_cfg(1.0, 2000);
  const auto [star, mtd] = mse_scenarios(cfg);
  const MseBank bank(cfg, mtd.truth, mtd.hist_center, 1, rule());
  const MseBank other(cfg, mtd.truth, mtd.hist_center, 7, rule());
  const auto e1 = bank.squared_errors(beta_log_prior({1, 1}, rule()));
  const auto e2 = bank.squared_errors(beta_log_prior({1.2, 1}, rule()));
  const auto e3 = other.squared_errors(beta_log_prior({1.2, 1}, rule()));
  auto sd_diff = [](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    const double m = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    double s = 0.0;
    for (double v : d) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(d.size() - 1));
  };
  CHECK(sd_diff(e1, e2) < 0.5 * sd_diff(e1, e3));
  CHECK(star.truth == doctest::Approx(1.5));
  CHECK(mtd.truth == doctest::Approx(2.5));
}

TEST_CASE("MTD bias points toward the historical mean") {
  const auto cfg = mse_cfg(1.0, 2000);
  const auto [star, mtd] = mse_scenarios(cfg);
  const MseBank bank(cfg, mtd.truth, mtd.hist_center, 1, rule());
  for (const BetaParams& q : {BetaParams{1, 1}, BetaParams{0.5, 2}, BetaParams{6, 0.5}}) {
    const auto est = bank.posterior_means(beta_log_prior(q, rule()));
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / static_cast<double>(est.size());
    CHECK(mean < mtd.truth);
    CHECK(mean > mtd.hist_center);
  }
  auto fx = cfg;
  fx.fixed_current_mean = true;
  const auto [fs, fm] = mse_scenarios(fx);
  CHECK(fm.truth == doctest::Approx(1.5));
  CHECK(fm.hist_center == doctest::Approx(0.5));
  CHECK(MseObjective(fx, rule())({1, 1}) == doctest::Approx(MseObjective(cfg, rule())({1, 1})).epsilon(1e-12));
}

TEST_CASE("grid search returns the lattice minimum") {
  const auto cfg = mse_cfg(1.0, 1000);
  const MseObjective obj(cfg, rule());
  const auto best = derive_optimal_mse(obj);
  double lo = std::numeric_limits<double>::infinity();
  BetaParams arg;
  for (int i = 1; i <= 12; ++i)
    for (int j = 1; j <= 12; ++j) {
      const BetaParams q{0.5 * i, 0.5 * j};
      const double v = obj(q);
      if (v < lo) {
        lo = v;
        arg = q;
      }
    }
  CHECK(best.params == arg);
  CHECK(best.objective == lo);
  CHECK(best.trace.size() == 144);
  CHECK(obj(best.params) < obj({1, 1}));
  CHECK(obj(best.params) < obj({2, 2}));
}

TEST_CASE("MSE validation") {
  auto c = mse_cfg(1.0, 50);
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = mse_cfg(1.0, 500);
  c.w = 1.5;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = mse_cfg(1.0, 500);
  c.model = BernoulliModel{};
  CHECK_THROWS_AS(MseObjective(c, rule()), DomainError);
}

TEST_CASE("estimator comparison") {
  auto cfg = mse_cfg(1.0, 4000);
  std::vector<Candidate> cands(4);
  cands[0] = {Candidate::Kind::OptimalBeta, "optimal-beta", {0.5, 2}};
  cands[1].kind = Candidate::Kind::MixtureBeta;
  cands[1].name = "mixture-beta";
  cands[2].kind = Candidate::Kind::RobustMixture;
  cands[2].name = "robust-mixture";
  cands[3].kind = Candidate::Kind::RobustMixture;
  cands[3].name = "vague-only";
  cands[3].informative_weight = 0.0;
  const auto rows = compare_estimators(cfg, {0.0, 0.5, 1.0}, cands, rule());
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    CHECK(r.pieces.mse == doctest::Approx(r.pieces.bias_sq + r.pieces.variance).epsilon(1e-12));
    if (r.candidate == "vague-only") CHECK(std::abs(r.pieces.mse - 1.0 / 30) <= 4.0 * r.pieces.mc_se + 1e-4);
  }
  CHECK(rows[0].pieces.mse < rows[3].pieces.mse);
  CHECK(rows[2].pieces.mse < rows[3].pieces.mse);
  cfg.model = RegressionModel{};
  CHECK_THROWS_AS(compare_estimators(cfg, {0.0}, cands, rule()), DomainError);
}

TEST_CASE("sweep over the prior mean") {
  CHECK(prior_from_mean(0.3, 2).alpha0 == doctest::Approx(0.6));
  CHECK(prior_from_mean(0.3, 2).beta0 == doctest::Approx(1.4));
  CHECK_THROWS_AS(prior_from_mean(1.0, 2), DomainError);
  SweepConfig cfg;
  cfg.mc_reps = 2000;
  const auto rows = sweep_mse_vs_prior_mean(cfg, rule());
  REQUIRE(rows.size() == cfg.ratios.size() * cfg.prior_means.size());
  std::vector<double> spread;
  for (std::size_t k = 0; k < cfg.ratios.size(); ++k) {
    double lo = 1e300, hi = 0.0, prev = 1e300;
    for (std::size_t j = 0; j < cfg.prior_means.size(); ++j) {
      const auto& r = rows[k * cfg.prior_means.size() + j];
      CHECK(r.n + r.n0 == cfg.total_n);
      CHECK(r.prior.mean() == doctest::Approx(r.prior_mean));
      CHECK(r.pieces.mse <= prev + 1e-12);
      prev = r.pieces.mse;
      lo = std::min(lo, r.pieces.mse);
      hi = std::max(hi, r.pieces.mse);
    }
    spread.push_back((hi - lo) / hi);
  }
  for (std::size_t k = 1; k < spread.size(); ++k) CHECK(spread[k] < spread[k - 1]);
}
