#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "nppopt/types.hpp"

namespace nppopt::numerics {

enum class RuleKind { CompositeGaussLegendre, EndpointTransformed };

// Nodes on (0,1) with positive weights. complements[i] == 1 - nodes[i],
// stored separately so that log(1 - a) stays accurate next to a = 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> complements;
  std::vector<double> weights;
  RuleKind kind = RuleKind::CompositeGaussLegendre;
  int degree = 0;

  std::size_t size() const { return nodes.size(); }
  void validate() const;
};

QuadratureRule composite_gauss_legendre(int panels, int order);

// Composite rule in t pushed through the smoothstep a = I_t(k, k), which
// clusters nodes at both endpoints and tames x^(-1/2)-type singularities.
QuadratureRule endpoint_transformed(int panels, int order, int smoothing = 4);

QuadratureRule default_rule();

QuadratureRule make_rule(RuleKind kind, int panels, int order);

// Affine image of a unit-interval rule on [lo, hi] within (0,1); weights
// scale with the interval length.
QuadratureRule map_rule(const QuadratureRule& rule, double lo, double hi);

double integrate_unit(const std::function<double(double)>& f, const QuadratureRule& rule);

std::array<std::vector<double>, 2> gauss_legendre(int order);

using Objective2 = std::function<double(double, double)>;

OptimResult nelder_mead_min(const Objective2& objective, std::array<double, 2> start, double tol,
                            std::size_t max_evals, double initial_step = 0.5);

struct HyperSearchOptions {
  double log_lo = -3.0;
  double log_hi = 4.6;
  double penalty = 1e3;
  double tol = 1e-7;
  std::size_t max_evals = 4000;
  std::vector<BetaParams> starts{{1.0, 1.0}, {10.0, 1.0}, {1.0, 10.0}, {0.5, 0.5}};
};

using HyperObjective = std::function<double(const BetaParams&)>;

// Multi-start Nelder-Mead over (log alpha0, log beta0) with a quadratic box
// penalty. Returns the best restart; the reported objective is unpenalized.
OptimResult minimize_beta_hyper(const HyperObjective& objective,
                                const HyperSearchOptions& opts = {});

enum class FixedShape { Alpha, Beta };

// One-dimensional Brent search over the free shape in log space.
OptimResult minimize_beta_hyper_fixed(const HyperObjective& objective, FixedShape which,
                                      double fixed_value, const HyperSearchOptions& opts = {});

OptimResult grid_search_min(const Objective2& objective, double grid_lo, double grid_hi,
                            double step);

std::vector<double> lattice(double lo, double hi, double step);

double log_beta_fn(double a, double b);

double normal_cdf(double x);

// Philox4x32-10 keyed by the master seed; the stream id fills the upper half
// of the counter so distinct streams never share blocks.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed), stream_id_(stream_id) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t position() const { return counter_; }

  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  double uniform();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

}  // namespace nppopt::numerics
