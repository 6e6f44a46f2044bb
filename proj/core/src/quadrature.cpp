#include <cmath>
#include <numbers>
#include <string>

#include "nppopt/errors.hpp"
#include "nppopt/numerics.hpp"

namespace nppopt::numerics {

std::array<std::vector<double>, 2> gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  std::vector<double> x(order), w(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / dp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

void QuadratureRule::validate() const {
  if (nodes.empty() || nodes.size() != weights.size() || nodes.size() != complements.size())
    throw DomainError("quadrature rule: node, complement and weight counts differ");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > 0.0 && nodes[i] < 1.0 && complements[i] > 0.0))
      throw DomainError("quadrature rule: node " + std::to_string(i) + " outside (0,1)");
    if (!(weights[i] > 0.0))
      throw DomainError("quadrature rule: non-positive weight at node " + std::to_string(i));
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw DomainError("quadrature rule: nodes not strictly increasing");
  }
}

namespace {

// Composite rule on [0,1] in the t variable: returns t and 1 - t separately.
void composite_t(int panels, int order, std::vector<double>& t, std::vector<double>& tc,
                 std::vector<double>& w) {
  if (panels < 1) throw DomainError("quadrature: panel count must be positive");
  auto [x, wx] = gauss_legendre(order);
  const double h = 1.0 / panels;
  t.clear();
  tc.clear();
  w.clear();
  for (int p = 0; p < panels; ++p) {
    for (int j = 0; j < order; ++j) {
      const double lo = p * h;
      const double hi = (p + 1) * h;
      t.push_back(lo + 0.5 * h * (1.0 + x[j]));
      tc.push_back((1.0 - hi) + 0.5 * h * (1.0 - x[j]));
      w.push_back(0.5 * h * wx[j]);
    }
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Regularized incomplete beta I_t(k,k) for integer k, all terms positive.
double smoothstep(double t, double tc, int k) {
  const int m = 2 * k - 1;
  double s = 0.0;
  for (int j = k; j <= m; ++j) s += binom(m, j) * std::pow(t, j) * std::pow(tc, m - j);
  return s;
}

}  // namespace

QuadratureRule composite_gauss_legendre(int panels, int order) {
  QuadratureRule rule;
  composite_t(panels, order, rule.nodes, rule.complements, rule.weights);
  rule.kind = RuleKind::CompositeGaussLegendre;
  rule.degree = 2 * order - 1;
  return rule;
}

QuadratureRule endpoint_transformed(int panels, int order, int smoothing) {
  if (smoothing < 1) throw DomainError("quadrature: smoothing order must be positive");
  std::vector<double> t, tc, w;
  composite_t(panels, order, t, tc, w);
  const int k = smoothing;
  const double inv_b = 1.0 / std::exp(log_beta_fn(k, k));
  QuadratureRule rule;
  rule.kind = RuleKind::EndpointTransformed;
  for (std::size_t i = 0; i < t.size(); ++i) {
    rule.nodes.push_back(smoothstep(t[i], tc[i], k));
    rule.complements.push_back(smoothstep(tc[i], t[i], k));
    rule.weights.push_back(w[i] * inv_b * std::pow(t[i] * tc[i], k - 1));
  }
  // x^j pulls back to a polynomial of degree j(2k-1) + 2k-2 in t.
  rule.degree = std::max(0, (2 * order - 1 - (2 * k - 2)) / (2 * k - 1));
  return rule;
}

QuadratureRule default_rule() { return endpoint_transformed(16, 16, 4); }

QuadratureRule make_rule(RuleKind kind, int panels, int order) {
  return kind == RuleKind::CompositeGaussLegendre ? composite_gauss_legendre(panels, order)
                                                  : endpoint_transformed(panels, order);
}

QuadratureRule map_rule(const QuadratureRule& rule, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw DomainError("map_rule: need 0 <= lo < hi <= 1");
  QuadratureRule out = rule;
  const double len = hi - lo;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out.nodes[i] = lo + len * rule.nodes[i];
    out.complements[i] = (1.0 - hi) + len * rule.complements[i];
    out.weights[i] = len * rule.weights[i];
  }
  return out;
}

double integrate_unit(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v))
      throw EvaluationError("integrate_unit: non-finite integrand at node " + std::to_string(i) +
                            " (a0 = " + std::to_string(rule.nodes[i]) + ")");
    s += rule.weights[i] * v;
  }
  return s;
}

}  // namespace nppopt::numerics
