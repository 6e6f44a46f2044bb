#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "nppopt/errors.hpp"
#include "nppopt/numerics.hpp"

using namespace nppopt;
using namespace nppopt::numerics;

TEST_CASE("rule invariants") {
  for (const auto& rule : {default_rule(), composite_gauss_legendre(8, 16), composite_gauss_legendre(4, 16),
                           endpoint_transformed(8, 16)}) {
    CHECK_NOTHROW(rule.validate());
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      s += rule.weights[i];
      CHECK(rule.nodes[i] > 0.0);
      CHECK(rule.nodes[i] < 1.0);
      CHECK(rule.complements[i] == doctest::Approx(1.0 - rule.nodes[i]).epsilon(1e-12));
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("integrate_unit basics") {
  const auto rule64 = composite_gauss_legendre(4, 16);
  CHECK(rule64.size() == 64);
  CHECK(integrate_unit([](double) { return 1.0; }, rule64) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(integrate_unit([](double x) { return x; }, rule64) - 0.5) <= 1e-12);
  const double v = integrate_unit([](double x) { return 1.0 / std::sqrt(x); }, default_rule());
  CHECK(std::abs(v - 2.0) <= 1e-6);
}

TEST_CASE("integrate_unit reports non-finite nodes") {
  try {
    integrate_unit([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; },
                   default_rule());
    FAIL("expected an evaluation error");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("quadrature exactness up to the declared degree") {
  for (const auto& rule : {default_rule(), composite_gauss_legendre(8, 16), endpoint_transformed(8, 16)}) {
    REQUIRE(rule.degree >= 3);
    for (int k = 0; k <= rule.degree; ++k) {
      const double v = integrate_unit([k](double x) { return std::pow(x, k); }, rule);
      CHECK(std::abs(v - 1.0 / (k + 1)) <= 1e-10);
    }
  }
}

TEST_CASE("map_rule covers a subinterval") {
  const auto sub = map_rule(default_rule(), 0.2, 0.7);
  CHECK(integrate_unit([](double) { return 1.0; }, sub) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sub.nodes.front() > 0.2);
  CHECK(sub.nodes.back() < 0.7);
}

TEST_CASE("nelder_mead known minimum") {
  const auto r = nelder_mead_min([](double x, double y) { return (x - 1) * (x - 1) + (y - 2) * (y - 2); },
                                 {0.0, 0.0}, 1e-9, 5000);
  CHECK(r.converged);
  CHECK(std::abs(r.params.alpha0 - 1.0) < 1e-4);
  CHECK(std::abs(r.params.beta0 - 2.0) < 1e-4);
  CHECK(!r.trace.empty());
}

TEST_CASE("nelder_mead flat function") {
  const auto r = nelder_mead_min([](double, double) { return 5.0; }, {0.3, 0.4}, 1e-6, 5000);
  CHECK(r.converged);
  CHECK(r.objective == 5.0);
}

TEST_CASE("nelder_mead Rosenbrock") {
  auto f = [](double x, double y) { return (1 - x) * (1 - x) + 100 * (y - x * x) * (y - x * x); };
  const auto r = nelder_mead_min(f, {-1.2, 1.0}, 1e-10, 20000);
  CHECK(std::abs(r.params.alpha0 - 1.0) < 1e-3);
  CHECK(std::abs(r.params.beta0 - 1.0) < 1e-3);
  // Dense-grid refinement around the result finds nothing lower.
  double best = f(r.params.alpha0, r.params.beta0);
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) best = std::min(best, f(1.0 + i * 1e-3, 1.0 + j * 1e-3));
  CHECK(f(r.params.alpha0, r.params.beta0) <= best + 1e-6);
  CHECK(std::abs(r.objective - f(r.params.alpha0, r.params.beta0)) <= 1e-10);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].objective <= r.trace[i - 1].objective);
}

TEST_CASE("nelder_mead errors and non-finite regions") {
  CHECK_THROWS_AS(nelder_mead_min([](double, double) { return std::nan(""); }, {0, 0}, 1e-6, 100),
                  EvaluationError);
  CHECK_THROWS_AS(nelder_mead_min([](double, double) { return 1.0; }, {0, 0}, 0.0, 100), DomainError);
  const auto r = nelder_mead_min(
      [](double x, double y) { return x < -0.5 ? std::numeric_limits<double>::infinity() : x * x + y * y; },
      {1.0, 1.0}, 1e-8, 5000);
  CHECK(std::abs(r.params.alpha0) < 1e-3);
  CHECK(r.evaluations <= 5000);
}

TEST_CASE("multi-start hyperparameter search respects the box") {
  auto f = [](const BetaParams& p) {
    return std::pow(std::log(p.alpha0 / 3.0), 2) + std::pow(std::log(p.beta0 / 0.7), 2);
  };
  const auto r = minimize_beta_hyper(f);
  CHECK(r.converged);
  CHECK(r.params.alpha0 == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(r.params.beta0 == doctest::Approx(0.7).epsilon(1e-3));
  // A minimum beyond the box is pulled back to about its edge.
  const auto edge = minimize_beta_hyper([](const BetaParams& p) { return -std::log(p.alpha0) + std::pow(std::log(p.beta0), 2); });
  CHECK(std::log(edge.params.alpha0) < 4.6 + 0.01);
  const auto fixed = minimize_beta_hyper_fixed(f, FixedShape::Alpha, 3.0);
  CHECK(fixed.params.alpha0 == 3.0);
  CHECK(fixed.params.beta0 == doctest::Approx(0.7).epsilon(1e-4));
}

TEST_CASE("grid search") {
  const auto r = grid_search_min([](double a, double b) { return (a - 2) * (a - 2) + (b - 5) * (b - 5); }, 0.5, 6.0, 0.5);
  CHECK(r.params.alpha0 == 2.0);
  CHECK(r.params.beta0 == 5.0);
  CHECK(r.trace.size() == 144);
  const auto c = grid_search_min([](double, double) { return 1.0; }, 0.5, 6.0, 0.5);
  CHECK(c.params.alpha0 == 0.5);
  CHECK(c.params.beta0 == 0.5);
  // Ties on a ridge: smallest sum first, then smallest alpha0.
  const auto t = grid_search_min([](double a, double b) { return std::abs(a + b - 4.0) < 1e-12 || std::abs(a + b - 3.0) < 1e-12 ? 0.0 : 1.0; }, 0.5, 6.0, 0.5);
  CHECK(t.params.alpha0 == 0.5);
  CHECK(t.params.beta0 == 2.5);
  const auto nf = grid_search_min([](double a, double b) { return a == 0.5 && b == 0.5 ? std::nan("") : a + b; }, 0.5, 6.0, 0.5);
  CHECK(nf.params.alpha0 + nf.params.beta0 == 1.5);
  CHECK(nf.trace.size() == 144);
  const auto lat = lattice(0.5, 6.0, 0.5);
  std::set<double> on(lat.begin(), lat.end());
  CHECK(on.count(nf.params.alpha0) == 1);
  CHECK(on.count(nf.params.beta0) == 1);
  CHECK_THROWS_AS(grid_search_min([](double, double) { return 0.0; }, 1.0, 0.5, 0.5), DomainError);
}

TEST_CASE("log_beta_fn") {
  CHECK(log_beta_fn(1, 1) == doctest::Approx(0.0));
  CHECK(std::abs(log_beta_fn(2, 3) - std::log(1.0 / 12.0)) <= 1e-12 * std::abs(std::log(1.0 / 12.0)));
  CHECK(std::abs(log_beta_fn(0.5, 0.5) - std::log(std::numbers::pi)) <= 1e-12 * std::log(std::numbers::pi));
  for (double a : {0.3, 1.7, 4.0, 12.5, 40.0, 250.0})
    for (double b : {0.6, 2.2, 9.0, 33.0, 700.0}) {
      const double ref = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
      CHECK(std::abs(log_beta_fn(a, b) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  CHECK_THROWS_AS(log_beta_fn(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(log_beta_fn(1.0, -2.0), DomainError);
}

TEST_CASE("Philox known answer") {
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("RNG streams are reproducible and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    if (x != c.uniform()) differ = true;
  }
  CHECK(differ);
  RngStream s(7, 0);
  double m = 0, v = 0, u = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double z = s.normal();
    m += z;
    v += z * z;
    const double x = s.uniform();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    u += x;
  }
  CHECK(std::abs(m / N) < 5.0 / std::sqrt(N));
  CHECK(std::abs(v / N - 1.0) < 5.0 * std::sqrt(2.0 / N));
  CHECK(std::abs(u / N - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / N));
  const auto s1 = RngStream(7, 0).substream(5), s2 = RngStream(7, 0).substream(5), s3 = RngStream(7, 0).substream(6);
  auto x1 = s1, x2 = s2, x3 = s3;
  CHECK(x1.next_u64() == x2.next_u64());
  CHECK(x1.next_u64() != x3.next_u64());
}
