#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nppopt/asymptotics.hpp"
#include "nppopt/criteria.hpp"
#include "nppopt/design.hpp"
#include "nppopt/npp.hpp"

namespace nppopt::io {

std::string fmt(double x);

void write_density_csv(std::ostream& os, const npp::DensityGrid& grid);
void write_convergence_csv(std::ostream& os, const asymptotics::ConvergenceReport& report);
void write_trace_csv(std::ostream& os, const OptimResult& result);
void write_comparisons_csv(std::ostream& os, const std::vector<criteria::ComparisonRow>& rows);
void write_power_csv(std::ostream& os, const std::vector<design::PowerPoint>& curve);
void write_sweep_csv(std::ostream& os, const std::vector<criteria::SweepRow>& rows);

}  // namespace nppopt::io
