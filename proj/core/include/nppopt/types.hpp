#pragma once

#include <cstddef>
#include <vector>

namespace nppopt {

// Shape pair of a beta prior on the discounting parameter.
struct BetaParams {
  double alpha0 = 1.0;
  double beta0 = 1.0;

  void validate() const;
  double log_density(double a, double one_minus_a) const;
  double mean() const { return alpha0 / (alpha0 + beta0); }

  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

struct TracePoint {
  BetaParams params;
  double objective;
};

struct OptimResult {
  BetaParams params;
  double objective = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

}  // namespace nppopt
