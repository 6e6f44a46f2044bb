#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nppopt/families.hpp"

namespace nppopt::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

struct DatasetSchema {
  std::string family = "normal";  // normal | bernoulli | logistic | linear
  double sigma2 = 1.0;
};

using LoadedData = std::variant<families::DataSummary, families::RegressionDataset>;

// CSV with a header row and an outcome column named y. Regression schemas use
// every other column as a covariate after an intercept.
LoadedData load_dataset(const std::string& path, const DatasetSchema& schema,
                        std::ostream* log = nullptr);

struct RunConfig {
  std::string subcommand;
  std::string target;  // reproduce
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string rule = "transformed";  // transformed | gauss-legendre
  int panels = 16;
  int order = 16;

  std::string family = "normal";
  std::string path = "auto";  // auto | exact | asymptotic | laplace
  std::string init = "default";
  std::optional<std::string> data_path;
  std::optional<std::string> historical_path;
  std::size_t index = 1;
  std::optional<double> ybar;
  double ybar0 = 1.5;
  std::optional<double> s;
  double s0 = 21.0;
  std::size_t n = 30;
  std::size_t n0 = 30;
  double sigma2 = 1.0;
  double sigma02 = 1.0;
  bool symmetric = false;
  std::vector<double> beta_hist{0.0, 0.0};
  std::size_t shift_index = 0;
  std::vector<double> prior{1.0, 1.0};
  std::optional<std::vector<double>> optimal;
  std::optional<std::string> use_case;

  double dmtd = 1.0;
  double w = 0.5;
  double c = 10.0;
  std::size_t reps = 10000;
  double grid_lo = 0.5;
  double grid_hi = 6.0;
  double grid_step = 0.5;
  bool fixed_current_mean = false;

  double delta = 0.5;
  double r = 1.0;
  std::vector<std::size_t> schedule{30, 50, 100, 200, 500};
  double eps = 0.05;
  std::vector<double> d_list{0.25, 0.5, 1.0, 1.5};
  std::size_t p = 200;

  std::vector<double> d_obs{0.0, 0.5, 1.0, 1.5};
  double mix_c = 1000.0;

  std::size_t total_n = 60;
  std::vector<double> ratios{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> prior_means{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double concentration = 2.0;

  std::string case_name = "lupus";
  std::vector<std::size_t> ns{50, 75, 100};
  double gamma = 0.975;
  std::size_t power_reps = 2000;
  std::size_t mse_reps = 2000;
  std::vector<std::string> fitting{"kl", "uniform", "mse"};
};

// Effective configuration echoed into results files and hashed into file names.
nlohmann::ordered_json config_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// Throws std::runtime_error describing the first schema violation.
void validate_results(const nlohmann::json& results);

int run(int argc, const char* const* argv, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace nppopt::cli
