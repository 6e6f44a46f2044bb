#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "nppopt/criteria.hpp"
#include "nppopt/design.hpp"
#include "nppopt/families.hpp"

namespace nppopt::scenarios {

criteria::NormalModel normal_model();
criteria::KlConfig normal_kl(double d_mtd);
criteria::MseConfig normal_mse(double d_mtd, std::size_t mc_reps, std::uint64_t seed);

// Two-arm logistic trial rebuilt from summary statistics: sample sizes and
// treatment log odds ratios, 1:1 allocation, a fixed control log odds and
// extra covariates with zero coefficients.
struct CaseStudy {
  std::string name;
  std::size_t n0 = 0;
  double effect0 = 0.0;
  std::size_t n_obs = 0;
  double effect_obs = 0.0;
  std::size_t n_sim = 0;
  double d_mtd = 0.0;  // signed shift of the treatment coefficient
  double control_logit = 0.0;
  families::DesignSpec design;
};

CaseStudy lupus();
CaseStudy melanoma();
CaseStudy case_by_name(const std::string& name);

criteria::RegressionModel case_model(const CaseStudy& cs, std::size_t n);
families::FitResult case_historical_fit(const CaseStudy& cs);
families::FitResult case_current_fit(const CaseStudy& cs);
criteria::KlConfig case_kl(const CaseStudy& cs);
criteria::MseConfig case_mse(const CaseStudy& cs, std::size_t mc_reps, std::uint64_t seed);

design::PowerConfig case_power(const CaseStudy& cs, design::FittingPrior prior, std::size_t reps,
                               std::uint64_t seed);

}  // namespace nppopt::scenarios
