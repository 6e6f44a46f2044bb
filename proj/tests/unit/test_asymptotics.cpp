#include <doctest.h>

#include <cmath>

#include "nppopt/asymptotics.hpp"
#include "nppopt/errors.hpp"
#include "oracles.hpp"

using namespace nppopt;
using namespace nppopt::asymptotics;

namespace {

const numerics::QuadratureRule& rule() {
  static const auto r = numerics::default_rule();
  return r;
}

std::size_t nearest(double a) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < rule().size(); ++i)
    if (std::abs(rule().nodes[i] - a) < std::abs(rule().nodes[k] - a)) k = i;
  return k;
}

}  // namespace

TEST_CASE("limiting i.i.d. density") {
  const auto g = limiting_density_iid(1.0, {1, 1}, rule());
  auto f = [](double a) { return std::sqrt(a / (1.0 + a)); };
  const double z = oracle::trapezoid(f, 0.0, 1.0, 200001);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g.density(i) - f(rule().nodes[i]) / z) <= 1e-6);
  const std::size_t i1 = nearest(1.0), ih = nearest(0.5);
  const double want = f(rule().nodes[i1]) / f(rule().nodes[ih]);
  CHECK(g.density(i1) / g.density(ih) == doctest::Approx(want).epsilon(1e-10));
  CHECK(f(1.0) / f(0.5) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));

  const auto u = limiting_density_iid(1e6, {1, 1}, rule());
  CHECK(u.mean() == doctest::Approx(0.5).epsilon(1e-3));
  for (std::size_t i = 0; i < u.size(); ++i)
    if (rule().nodes[i] > 0.01) CHECK(std::abs(u.density(i) - 1.0) <= 1e-3);

  const auto m = limiting_density_iid(1.0, {10, 1}, rule());
  std::size_t mode = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.log_density[i] > m.log_density[mode]) mode = i;
  CHECK(mode == m.size() - 1);
  CHECK_THROWS_AS(limiting_density_iid(0.0, {1, 1}, rule()), DomainError);
}

TEST_CASE("limiting GLM density concentrates as p grows") {
  auto above = [](const npp::DensityGrid& g, double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (rule().nodes[i] > t) s += rule().weights[i] * g.density(i);
    return s;
  };
  CHECK(above(limiting_density_glm(200, {1, 1}, rule()), 0.9) > 0.95);
  CHECK(above(limiting_density_glm(20, {1, 1}, rule()), 0.9) < above(limiting_density_glm(200, {1, 1}, rule()), 0.9));
  const auto g1 = limiting_density_glm(1, {1, 1}, rule());
  const auto i1 = limiting_density_iid(1.0, {1, 1}, rule());
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(std::abs(g1.log_density[i] - i1.log_density[i]) <= 1e-10);
  CHECK_THROWS_AS(limiting_density_glm(0, {1, 1}, rule()), DomainError);
}

TEST_CASE("stochastic ordering of the a0 posterior") {
  const NormalSetup base;
  CHECK(std::abs(check_cdf_dominance(0.0, base, {1, 1}, rule())) <= 1e-12);
  for (double d : {0.1, 0.5, 1.0}) CHECK(check_cdf_dominance(d, base, {1, 1}, rule()) > 0.0);
  for (const BetaParams& p : {BetaParams{2, 2}, BetaParams{0.5, 3}}) CHECK(check_cdf_dominance(0.5, base, p, rule()) > 0.0);
  const std::size_t k = nearest(0.5);
  double prev = 0.0;
  for (double d : {0.1, 0.3, 0.5, 1.0}) {
    const double gap = cdf_gap(d, base, {1, 1}, rule())[k];
    CHECK(gap > prev);
    prev = gap;
  }
  CHECK_THROWS_AS(check_cdf_dominance(-0.1, base, {1, 1}, rule()), DomainError);
}

TEST_CASE("convergence diagnostic") {
  const auto rep = convergence_diagnostic(0.5, 1.0, default_schedule(), 0.05, {1, 1}, rule());
  CHECK(rep.monotone);
  MESSAGE("mass below 0.05 at n = 500: " << rep.mass_below_eps.back());
  CHECK(rep.mass_below_eps.back() >= 0.75);
  for (std::size_t i = 1; i < rep.mass_below_eps.size(); ++i) CHECK(rep.mass_below_eps[i] > rep.mass_below_eps[i - 1]);
  const auto far = convergence_diagnostic(2.0, 1.0, default_schedule(), 0.05, {1, 1}, rule());
  for (std::size_t i = 0; i < rep.mass_below_eps.size(); ++i) CHECK(far.mass_below_eps[i] > rep.mass_below_eps[i]);
  CHECK(far.mass_below_eps.back() >= 0.99);
  CHECK(rep.mass_below_eps[0] == doctest::Approx(mass_below({0.5, 1.0, 30}, 1.0, 1.0, 0.05, {1, 1}, rule())).epsilon(1e-12));
  CHECK_THROWS_AS(convergence_diagnostic(0.0, 1.0, default_schedule(), 0.05, {1, 1}, rule()), DomainError);
  CHECK_THROWS_AS(convergence_diagnostic(0.5, 1.0, {50, 30}, 0.05, {1, 1}, rule()), DomainError);
  CHECK_THROWS_AS(convergence_diagnostic(0.5, 1.0, default_schedule(), 1.5, {1, 1}, rule()), DomainError);
}
