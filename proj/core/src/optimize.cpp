#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "nppopt/errors.hpp"
#include "nppopt/numerics.hpp"

namespace nppopt::numerics {

namespace {

struct Vertex {
  double x, y, f;
};

double finite_or_inf(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

OptimResult nelder_mead_min(const Objective2& objective, std::array<double, 2> start, double tol,
                            std::size_t max_evals, double initial_step) {
  if (!(tol > 0.0)) throw DomainError("nelder_mead_min: tol must be positive");
  OptimResult out;
  auto eval = [&](double x, double y) {
    ++out.evaluations;
    return finite_or_inf(objective(x, y));
  };
  const double f0 = objective(start[0], start[1]);
  ++out.evaluations;
  if (!std::isfinite(f0)) throw EvaluationError("nelder_mead_min: objective non-finite at start");

  std::array<Vertex, 3> s{Vertex{start[0], start[1], f0},
                          Vertex{start[0] + initial_step, start[1], 0.0},
                          Vertex{start[0], start[1] + initial_step, 0.0}};
  s[1].f = eval(s[1].x, s[1].y);
  s[2].f = eval(s[2].x, s[2].y);

  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  auto diameter = [&] {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) d = std::max(d, std::hypot(s[i].x - s[j].x, s[i].y - s[j].y));
    return d;
  };

  std::stable_sort(s.begin(), s.end(), by_f);
  out.trace.push_back({{s[0].x, s[0].y}, s[0].f});

  while (true) {
    if (diameter() < tol) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= max_evals) break;

    const double cx = 0.5 * (s[0].x + s[1].x);
    const double cy = 0.5 * (s[0].y + s[1].y);
    auto along = [&](double t) {
      Vertex v{cx + t * (s[2].x - cx), cy + t * (s[2].y - cy), 0.0};
      v.f = eval(v.x, v.y);
      return v;
    };

    Vertex r = along(-1.0);
    if (r.f < s[0].f) {
      Vertex e = along(-2.0);
      s[2] = e.f < r.f ? e : r;
    } else if (r.f < s[1].f) {
      s[2] = r;
    } else {
      const bool outside = r.f < s[2].f;
      Vertex c = along(outside ? -0.5 : 0.5);
      if (outside ? c.f <= r.f : c.f < s[2].f) {
        s[2] = c;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
          s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
          s[i].f = eval(s[i].x, s[i].y);
        }
      }
    }
    std::stable_sort(s.begin(), s.end(), by_f);
    out.trace.push_back({{s[0].x, s[0].y}, s[0].f});
  }
  out.params = {s[0].x, s[0].y};
  out.objective = s[0].f;
  return out;
}

namespace {

double box_penalty(double u, const HyperSearchOptions& o) {
  double e = 0.0;
  if (u < o.log_lo) e = o.log_lo - u;
  if (u > o.log_hi) e = u - o.log_hi;
  return o.penalty * e * e;
}

}  // namespace

OptimResult minimize_beta_hyper(const HyperObjective& objective, const HyperSearchOptions& opts) {
  if (opts.starts.empty()) throw DomainError("minimize_beta_hyper: no starting points");
  auto f = [&](double u, double v) {
    return objective({std::exp(u), std::exp(v)}) + box_penalty(u, opts) + box_penalty(v, opts);
  };
  OptimResult best;
  bool have = false;
  std::size_t total_evals = 0;
  bool any_converged = false;
  std::vector<TracePoint> trace;
  for (const auto& st : opts.starts) {
    st.validate();
    OptimResult r = nelder_mead_min(f, {std::log(st.alpha0), std::log(st.beta0)}, opts.tol,
                                    opts.max_evals);
    total_evals += r.evaluations;
    any_converged = any_converged || r.converged;
    for (const auto& t : r.trace)
      trace.push_back({{std::exp(t.params.alpha0), std::exp(t.params.beta0)}, t.objective});
    if (!have || r.objective < best.objective) {
      best = r;
      have = true;
    }
  }
  OptimResult out;
  out.params = {std::exp(best.params.alpha0), std::exp(best.params.beta0)};
  out.objective = objective(out.params);
  out.evaluations = total_evals + 1;
  out.converged = any_converged;
  out.trace = std::move(trace);
  return out;
}

OptimResult minimize_beta_hyper_fixed(const HyperObjective& objective, FixedShape which,
                                      double fixed_value, const HyperSearchOptions& opts) {
  if (!(fixed_value > 0.0)) throw DomainError("minimize_beta_hyper_fixed: fixed shape must be positive");
  OptimResult out;
  auto make = [&](double u) {
    const double free = std::exp(u);
    return which == FixedShape::Alpha ? BetaParams{fixed_value, free} : BetaParams{free, fixed_value};
  };
  auto f = [&](double u) {
    ++out.evaluations;
    const BetaParams p = make(u);
    const double v = finite_or_inf(objective(p));
    out.trace.push_back({p, v});
    return v;
  };
  std::uintmax_t iters = 500;
  auto [u, fu] = boost::math::tools::brent_find_minima(f, opts.log_lo, opts.log_hi, 40, iters);
  out.params = make(u);
  out.objective = objective(out.params);
  out.converged = iters < 500;
  return out;
}

std::vector<double> lattice(double lo, double hi, double step) {
  if (!(lo < hi) || !(step > 0.0)) throw DomainError("lattice: need lo < hi and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

OptimResult grid_search_min(const Objective2& objective, double grid_lo, double grid_hi,
                            double step) {
  const std::vector<double> g = lattice(grid_lo, grid_hi, step);
  OptimResult out;
  bool have = false;
  for (double a : g) {
    for (double b : g) {
      const double v = objective(a, b);
      ++out.evaluations;
      out.trace.push_back({{a, b}, v});
      if (!std::isfinite(v)) continue;
      const bool better =
          !have || v < out.objective ||
          (v == out.objective &&
           (a + b < out.params.alpha0 + out.params.beta0 ||
            (a + b == out.params.alpha0 + out.params.beta0 && a < out.params.alpha0)));
      if (better) {
        out.params = {a, b};
        out.objective = v;
        have = true;
      }
    }
  }
  if (!have) throw EvaluationError("grid_search_min: objective non-finite on the whole lattice");
  out.converged = true;
  return out;
}

}  // namespace nppopt::numerics
