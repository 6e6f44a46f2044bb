#include "nppopt/io.hpp"

#include <cstdio>

namespace nppopt::io {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_density_csv(std::ostream& os, const npp::DensityGrid& grid) {
  const auto cdf = grid.cdf();
  os << "a0,density,cdf\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << fmt(grid.rule.nodes[i]) << ',' << fmt(grid.density(i)) << ',' << fmt(cdf[i]) << '\n';
}

void write_convergence_csv(std::ostream& os, const asymptotics::ConvergenceReport& report) {
  os << "n,mass_below_eps\n";
  for (std::size_t i = 0; i < report.schedule.size(); ++i)
    os << report.schedule[i] << ',' << fmt(report.mass_below_eps[i]) << '\n';
}

void write_trace_csv(std::ostream& os, const OptimResult& result) {
  os << "alpha0,beta0,objective\n";
  for (const auto& t : result.trace)
    os << fmt(t.params.alpha0) << ',' << fmt(t.params.beta0) << ',' << fmt(t.objective) << '\n';
}

void write_comparisons_csv(std::ostream& os, const std::vector<criteria::ComparisonRow>& rows) {
  os << "d_obs,candidate,mse,bias_sq,variance\n";
  for (const auto& r : rows)
    os << fmt(r.d_obs) << ',' << r.candidate << ',' << fmt(r.pieces.mse) << ','
       << fmt(r.pieces.bias_sq) << ',' << fmt(r.pieces.variance) << '\n';
}

void write_power_csv(std::ostream& os, const std::vector<design::PowerPoint>& curve) {
  os << "n,power,mc_se\n";
  for (const auto& p : curve) os << p.n << ',' << fmt(p.power) << ',' << fmt(p.mc_se) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<criteria::SweepRow>& rows) {
  os << "ratio,n,n0,prior_mean,alpha0,beta0,mse,bias_sq,variance\n";
  for (const auto& r : rows)
    os << fmt(r.ratio) << ',' << r.n << ',' << r.n0 << ',' << fmt(r.prior_mean) << ','
       << fmt(r.prior.alpha0) << ',' << fmt(r.prior.beta0) << ',' << fmt(r.pieces.mse) << ','
       << fmt(r.pieces.bias_sq) << ',' << fmt(r.pieces.variance) << '\n';
}

}  // namespace nppopt::io
