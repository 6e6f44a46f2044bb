#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nppopt/asymptotics.hpp"
#include "nppopt/criteria.hpp"
#include "nppopt/design.hpp"
#include "nppopt/errors.hpp"
#include "nppopt/io.hpp"
#include "nppopt/npp.hpp"
#include "nppopt/scenarios.hpp"

namespace nppopt::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  return res.ec == std::errc() && res.ptr == e && std::isfinite(v);
}

}  // namespace

LoadedData load_dataset(const std::string& path, const DatasetSchema& schema, std::ostream* log) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DomainError("dataset '" + path + "' is empty");
  const auto header = split_csv(line);
  std::size_t ycol = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == "y") ycol = j;
  if (ycol == header.size()) throw DomainError("dataset '" + path + "': missing column 'y'");

  std::vector<std::vector<double>> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw DomainError("dataset '" + path + "', row " + std::to_string(row) + ": expected " +
                        std::to_string(header.size()) + " cells, found " +
                        std::to_string(cells.size()));
    std::vector<double> v(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (!parse_double(cells[j], v[j]))
        throw DomainError("dataset '" + path + "', row " + std::to_string(row) + ", column '" +
                          header[j] + "': non-numeric cell '" + cells[j] + "'");
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw DomainError("dataset '" + path + "' has no data rows");
  if (log) {
    *log << "loaded " << path << ": " << rows.size() << " rows, columns";
    for (const auto& h : header) *log << ' ' << h;
    *log << '\n';
  }
  const std::size_t n = rows.size();

  if (schema.family == "normal") {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[ycol];
    families::NormalSummary s{n, sum / static_cast<double>(n), schema.sigma2};
    s.validate();
    return families::DataSummary{s};
  }
  if (schema.family == "bernoulli") {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = rows[i][ycol];
      if (y != 0.0 && y != 1.0)
        throw DomainError("dataset '" + path + "', row " + std::to_string(i + 1) +
                          ": Bernoulli outcome must be 0 or 1");
      sum += y;
    }
    families::BernoulliSummary s{n, sum};
    s.validate();
    return families::DataSummary{s};
  }
  if (schema.family != "logistic" && schema.family != "linear")
    throw DomainError("unknown family '" + schema.family + "'");

  families::RegressionDataset d;
  d.family = schema.family == "logistic" ? families::GlmFamily::Logistic : families::GlmFamily::Linear;
  d.sigma2 = schema.sigma2;
  d.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(header.size()));
  d.Y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    d.X(ii, 0) = 1.0;
    Eigen::Index col = 1;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j == ycol) continue;
      d.X(ii, col++) = rows[i][j];
    }
    d.Y[ii] = rows[i][ycol];
  }
  try {
    d.validate();
  } catch (const DomainError& e) {
    throw DomainError("dataset '" + path + "': " + e.what());
  }
  return d;
}

json config_json(const RunConfig& c) {
  auto opt = [](const auto& o) -> json {
    if (o) return json(*o);
    return nullptr;
  };
  json j;
  j["subcommand"] = c.subcommand;
  j["target"] = c.target;
  j["seed"] = c.seed;
  j["rule"] = c.rule;
  j["panels"] = c.panels;
  j["order"] = c.order;
  j["family"] = c.family;
  j["path"] = c.path;
  j["init"] = c.init;
  j["data"] = opt(c.data_path);
  j["historical"] = opt(c.historical_path);
  j["index"] = c.index;
  j["ybar"] = opt(c.ybar);
  j["ybar0"] = c.ybar0;
  j["s"] = opt(c.s);
  j["s0"] = c.s0;
  j["n"] = c.n;
  j["n0"] = c.n0;
  j["sigma2"] = c.sigma2;
  j["sigma02"] = c.sigma02;
  j["symmetric"] = c.symmetric;
  j["beta-hist"] = c.beta_hist;
  j["shift-index"] = c.shift_index;
  j["prior"] = c.prior;
  j["optimal"] = opt(c.optimal);
  j["case"] = opt(c.use_case);
  j["dmtd"] = c.dmtd;
  j["w"] = c.w;
  j["c"] = c.c;
  j["reps"] = c.reps;
  j["grid-lo"] = c.grid_lo;
  j["grid-hi"] = c.grid_hi;
  j["grid-step"] = c.grid_step;
  j["fixed-current-mean"] = c.fixed_current_mean;
  j["delta"] = c.delta;
  j["r"] = c.r;
  j["schedule"] = c.schedule;
  j["eps"] = c.eps;
  j["d-list"] = c.d_list;
  j["p"] = c.p;
  j["d-obs"] = c.d_obs;
  j["mix-c"] = c.mix_c;
  j["total-n"] = c.total_n;
  j["ratios"] = c.ratios;
  j["prior-means"] = c.prior_means;
  j["concentration"] = c.concentration;
  j["case-name"] = c.case_name;
  j["ns"] = c.ns;
  j["gamma"] = c.gamma;
  j["power-reps"] = c.power_reps;
  j["mse-reps"] = c.mse_reps;
  j["fitting"] = c.fitting;
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : config_json(cfg).dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void validate_results(const nlohmann::json& r) {
  auto need = [&](const char* key) {
    if (!r.contains(key)) throw std::runtime_error(std::string("results: missing field '") + key + "'");
    return r.at(key);
  };
  if (!r.is_object()) throw std::runtime_error("results: not a JSON object");
  if (!need("subcommand").is_string()) throw std::runtime_error("results: subcommand must be a string");
  if (!need("config").is_object()) throw std::runtime_error("results: config must be an object");
  const auto dp = need("derived_prior");
  if (!dp.is_null()) {
    if (!dp.is_object() || !dp.contains("alpha0") || !dp.contains("beta0") ||
        !dp["alpha0"].is_number() || !dp["beta0"].is_number())
      throw std::runtime_error("results: derived_prior must hold numeric alpha0 and beta0");
    if (!(dp["alpha0"].get<double>() > 0.0 && dp["beta0"].get<double>() > 0.0))
      throw std::runtime_error("results: derived_prior shapes must be positive");
  }
  const auto obj = need("objective");
  if (!obj.is_null() && !obj.is_number()) throw std::runtime_error("results: objective must be numeric or null");
  if (!need("diagnostics").is_object()) throw std::runtime_error("results: diagnostics must be an object");
  const auto ap = need("artifact_paths");
  if (!ap.is_array()) throw std::runtime_error("results: artifact_paths must be an array");
  for (const auto& p : ap)
    if (!p.is_string()) throw std::runtime_error("results: artifact paths must be strings");
  if (!need("seed").is_number_unsigned()) throw std::runtime_error("results: seed must be an unsigned integer");
}

namespace {

class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string sub) : sub_(std::move(sub)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object()) {
        for (auto sub = it.value().begin(); sub != it.value().end(); ++sub)
          items.push_back(item({it.key()}, sub.key(), sub.value()));
      } else {
        std::vector<std::string> parents;
        if (!sub_.empty()) parents.push_back(sub_);
        items.push_back(item(parents, it.key(), it.value()));
      }
    }
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v, const std::string& name) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config key '" + name + "' has an unsupported value");
  }

  static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& name,
                              const nlohmann::json& v) {
    CLI::ConfigItem ci;
    ci.parents = std::move(parents);
    ci.name = name;
    if (v.is_array()) {
      for (const auto& e : v) ci.inputs.push_back(scalar(e, name));
    } else {
      ci.inputs.push_back(scalar(v, name));
    }
    return ci;
  }

  std::string sub_;
};

const std::vector<std::string> kSubcommands{"marginal", "optimal-kl", "optimal-mse", "asymptotics",
                                            "compare",  "sweep",      "case-study",  "power",
                                            "reproduce"};

const std::vector<std::string> kTargets{"table1",      "table2",      "stability", "convergence",
                                        "comparisons", "sweep",       "table3",    "power",
                                        "all"};

struct Outputs {
  std::filesystem::path dir;
  std::string prefix;
  json artifacts = json::array();

  std::ofstream open(const std::string& suffix) {
    const std::string name = prefix + "-" + suffix + ".csv";
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw DomainError("cannot write output file '" + (dir / name).string() + "'");
    artifacts.push_back(name);
    return os;
  }
};

struct Results {
  json derived_prior = nullptr;
  json objective = nullptr;
  json diagnostics = json::object();
};

json prior_json(const BetaParams& p) { return json{{"alpha0", p.alpha0}, {"beta0", p.beta0}}; }

json pieces_json(const criteria::MsePieces& p) {
  return json{{"mse", p.mse}, {"bias_sq", p.bias_sq}, {"variance", p.variance}, {"mc_se", p.mc_se}};
}

BetaParams prior_from(const std::vector<double>& v, const char* what) {
  if (v.size() != 2) throw DomainError(std::string(what) + " needs two shape values");
  BetaParams p{v[0], v[1]};
  p.validate();
  return p;
}

numerics::QuadratureRule rule_from(const RunConfig& c) {
  if (c.rule == "transformed") return numerics::make_rule(numerics::RuleKind::EndpointTransformed, c.panels, c.order);
  if (c.rule == "gauss-legendre")
    return numerics::make_rule(numerics::RuleKind::CompositeGaussLegendre, c.panels, c.order);
  throw DomainError("unknown quadrature rule '" + c.rule + "' (expected transformed or gauss-legendre)");
}

bool is_regression(const std::string& family) { return family == "logistic" || family == "linear"; }

criteria::ModelSpec model_from(const RunConfig& c) {
  if (c.family == "normal") return criteria::NormalModel{c.n, c.n0, c.ybar0, c.sigma2, c.sigma02};
  if (c.family == "bernoulli") return criteria::BernoulliModel{c.n, c.n0, c.ybar0, c.symmetric};
  if (!is_regression(c.family)) throw DomainError("unknown family '" + c.family + "'");
  if (c.beta_hist.empty()) throw DomainError("--beta-hist needs at least one coefficient");
  criteria::RegressionModel m;
  m.family = c.family == "logistic" ? families::GlmFamily::Logistic : families::GlmFamily::Linear;
  m.n = c.n;
  m.n0 = c.n0;
  m.beta_hist = Eigen::Map<const Eigen::VectorXd>(c.beta_hist.data(), static_cast<Eigen::Index>(c.beta_hist.size()));
  if (c.shift_index >= c.beta_hist.size()) throw DomainError("--shift-index out of range");
  m.shift_index = c.shift_index;
  m.design.intercept = true;
  m.design.covariates.assign(c.beta_hist.size() - 1, families::Covariate{});
  m.sigma2 = c.sigma2;
  m.design_seed = c.seed;
  return m;
}

criteria::KlConfig kl_from(const RunConfig& c) {
  if (c.use_case) return scenarios::case_kl(scenarios::case_by_name(*c.use_case));
  criteria::KlConfig k;
  k.w = c.w;
  k.c = c.c;
  k.d_mtd = c.dmtd;
  k.model = model_from(c);
  return k;
}

criteria::MseConfig mse_from(const RunConfig& c) {
  if (c.use_case) return scenarios::case_mse(scenarios::case_by_name(*c.use_case), c.reps, c.seed);
  criteria::MseConfig m;
  m.w = c.w;
  m.d_mtd = c.dmtd;
  m.model = model_from(c);
  m.mc_reps = c.reps;
  m.seed = c.seed;
  m.fixed_current_mean = c.fixed_current_mean;
  return m;
}

// --- marginal ---------------------------------------------------------------

families::DataSummary iid_summary(const RunConfig& c, bool current, std::ostream& log) {
  const auto& path = current ? c.data_path : c.historical_path;
  if (path) return std::get<families::DataSummary>(load_dataset(*path, {c.family, current ? c.sigma2 : c.sigma02}, &log));
  if (c.family == "normal") {
    if (current) {
      if (!c.ybar) throw DomainError("marginal: --ybar or --data is required");
      return families::NormalSummary{c.n, *c.ybar, c.sigma2};
    }
    return families::NormalSummary{c.n0, c.ybar0, c.sigma02};
  }
  if (current) {
    if (!c.s) throw DomainError("marginal: --s or --data is required");
    return families::BernoulliSummary{c.n, *c.s};
  }
  return families::BernoulliSummary{c.n0, c.s0};
}

npp::InitialPrior init_from(const RunConfig& c, std::size_t p) {
  if (c.init == "default") return is_regression(c.family) ? npp::InitialPrior::vague_normal(p) : npp::InitialPrior::flat();
  if (c.init == "flat") return npp::InitialPrior::flat();
  if (c.init == "vague" || c.init == "normal") return npp::InitialPrior::vague_normal(p);
  if (c.init == "logistic") return npp::InitialPrior::logistic();
  throw DomainError("unknown initial prior '" + c.init + "' (expected flat, vague or logistic)");
}

void summary_json(json& d, const npp::PosteriorSummary& s, const std::string& name) {
  d[name + "_mean"] = s.mean;
  d[name + "_variance"] = s.variance;
  d[name + "_lower"] = s.lower;
  d[name + "_upper"] = s.upper;
}

void cmd_marginal(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res,
                  std::ostream& log) {
  const BetaParams prior = prior_from(c.prior, "--prior");
  npp::DensityGrid grid;
  if (is_regression(c.family)) {
    if (!c.data_path || !c.historical_path)
      throw DomainError("marginal: regression families need --data and --historical");
    const auto cur = std::get<families::RegressionDataset>(load_dataset(*c.data_path, {c.family, c.sigma2}, &log));
    const auto hist = std::get<families::RegressionDataset>(load_dataset(*c.historical_path, {c.family, c.sigma02}, &log));
    if (cur.p() != hist.p()) throw DomainError("marginal: current and historical designs differ in width");
    const std::string path = c.path == "auto" ? "asymptotic" : c.path;
    if (path == "asymptotic") {
      const auto fit = families::fit_glm_mle(cur);
      const auto fit0 = families::fit_glm_mle(hist);
      grid = npp::marginal_a0_asymptotic_glm(fit, fit0, prior, rule);
      if (c.index >= cur.p()) throw DomainError("marginal: --index out of range");
      summary_json(res.diagnostics, npp::posterior_beta_summary_glm(fit, fit0, prior, rule, c.index), "beta");
    } else if (path == "laplace") {
      grid = npp::marginal_a0_laplace_glm(cur, hist, prior, init_from(c, cur.p()), rule);
    } else {
      throw DomainError("marginal: path '" + path + "' is not available for regression (asymptotic or laplace)");
    }
  } else if (c.family == "normal" || c.family == "bernoulli") {
    const auto cur = iid_summary(c, true, log);
    const auto hist = iid_summary(c, false, log);
    const std::string path = c.path == "auto" ? "exact" : c.path;
    if (path == "exact") {
      const auto init = init_from(c, 1);
      grid = npp::marginal_a0_exact(cur, hist, prior, init, rule);
      summary_json(res.diagnostics, npp::posterior_mu_summary(cur, hist, prior, init, rule), "mu");
    } else if (path == "asymptotic") {
      npp::DiscrepancyScenario sc;
      double bd, bd0;
      if (const auto* a = std::get_if<families::NormalSummary>(&cur)) {
        const auto& b = std::get<families::NormalSummary>(hist);
        sc = {a->ybar - b.ybar, static_cast<double>(b.n) / static_cast<double>(a->n), a->n};
        bd = 1.0 / a->sigma2;
        bd0 = 1.0 / b.sigma2;
      } else {
        const auto& x = std::get<families::BernoulliSummary>(cur);
        const auto& x0 = std::get<families::BernoulliSummary>(hist);
        const auto fam = families::Family::Bernoulli;
        sc = {families::canonical_from_mean(fam, x.mean()) - families::canonical_from_mean(fam, x0.mean()),
              static_cast<double>(x0.n) / static_cast<double>(x.n), x.n};
        bd = x.mean() * (1.0 - x.mean());
        bd0 = x0.mean() * (1.0 - x0.mean());
      }
      grid = npp::marginal_a0_asymptotic_iid(sc, bd, bd0, prior, rule);
      res.diagnostics["delta"] = sc.d;
      res.diagnostics["r"] = sc.r;
    } else {
      throw DomainError("marginal: path '" + path + "' is not available for i.i.d. data (exact or asymptotic)");
    }
  } else {
    throw DomainError("unknown family '" + c.family + "'");
  }
  res.diagnostics["a0_mean"] = grid.mean();
  res.diagnostics["integral"] = grid.integral();
  auto os = out.open("density");
  io::write_density_csv(os, grid);
}

// --- optimal-kl / optimal-mse -------------------------------------------------

void cmd_optimal_kl(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  const auto cfg = kl_from(c);
  const auto r = criteria::derive_optimal_kl(cfg, rule);
  res.derived_prior = prior_json(r.params);
  res.objective = r.objective;
  res.diagnostics["converged"] = r.converged;
  res.diagnostics["evaluations"] = r.evaluations;
  res.diagnostics["objective_uniform"] = criteria::kl_objective({1.0, 1.0}, cfg, rule);
  auto os = out.open("trace");
  io::write_trace_csv(os, r);
}

void cmd_optimal_mse(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  const criteria::MseObjective obj(mse_from(c), rule);
  const auto r = criteria::derive_optimal_mse(obj, c.grid_lo, c.grid_hi, c.grid_step);
  res.derived_prior = prior_json(r.params);
  res.objective = r.objective;
  res.diagnostics["evaluations"] = r.evaluations;
  res.diagnostics["compatible"] = pieces_json(obj.compatible(r.params));
  res.diagnostics["mtd"] = pieces_json(obj.mtd(r.params));
  const auto s = obj.summed(r.params), u = obj.summed({1.0, 1.0});
  res.diagnostics["summed"] = pieces_json(s);
  res.diagnostics["summed_uniform"] = pieces_json(u);
  res.diagnostics["percent_reduction_vs_uniform"] = 100.0 * (1.0 - s.mse / u.mse);
  res.diagnostics["refits"] = obj.compatible_bank().refits() + obj.mtd_bank().refits();
  auto os = out.open("trace");
  io::write_trace_csv(os, r);
}

// --- asymptotics ------------------------------------------------------------

void cmd_asymptotics(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  const BetaParams prior = prior_from(c.prior, "--prior");
  const auto rep = asymptotics::convergence_diagnostic(c.delta, c.r, c.schedule, c.eps, prior, rule);
  res.diagnostics["monotone"] = rep.monotone;
  res.diagnostics["final_mass_below_eps"] = rep.mass_below_eps.back();
  json dom = json::array();
  const asymptotics::NormalSetup base{c.n, c.n0, c.sigma2, c.sigma02};
  for (double d : c.d_list)
    dom.push_back({{"d", d}, {"min_cdf_gap", asymptotics::check_cdf_dominance(d, base, prior, rule)}});
  res.diagnostics["dominance"] = dom;
  const auto glm = asymptotics::limiting_density_glm(c.p, prior, rule);
  res.diagnostics["glm_p"] = c.p;
  res.diagnostics["glm_mass_above_0.9"] = glm.mass_above(0.9);
  {
    auto os = out.open("convergence");
    io::write_convergence_csv(os, rep);
  }
  {
    auto os = out.open("limit-iid");
    io::write_density_csv(os, asymptotics::limiting_density_iid(c.r, prior, rule));
  }
  auto os = out.open("limit-glm");
  io::write_density_csv(os, glm);
}

// --- compare / sweep ----------------------------------------------------------

criteria::MseConfig normal_mse_from(const RunConfig& c) {
  criteria::MseConfig m;
  m.w = c.w;
  m.d_mtd = c.dmtd;
  m.model = criteria::NormalModel{c.n, c.n0, c.ybar0, c.sigma2, c.sigma02};
  m.mc_reps = c.reps;
  m.seed = c.seed;
  return m;
}

void run_compare(const criteria::MseConfig& cfg, const std::vector<double>& d_obs, double mix_c,
                 const std::optional<BetaParams>& given, const numerics::QuadratureRule& rule,
                 Outputs& out, Results& res, const std::string& suffix) {
  BetaParams opt;
  if (given) {
    opt = *given;
  } else {
    const auto r = criteria::derive_optimal_mse(cfg, rule);
    opt = r.params;
    res.objective = r.objective;
  }
  res.derived_prior = prior_json(opt);
  std::vector<criteria::Candidate> cands(4);
  cands[0].kind = criteria::Candidate::Kind::OptimalBeta;
  cands[0].name = "optimal-beta";
  cands[0].params = opt;
  cands[1].kind = criteria::Candidate::Kind::MixtureBeta;
  cands[1].name = "mixture-beta";
  cands[1].c = mix_c;
  cands[2].kind = criteria::Candidate::Kind::RobustMixture;
  cands[2].name = "robust-mixture";
  cands[3].kind = criteria::Candidate::Kind::RobustMixture;
  cands[3].name = "vague-only";
  cands[3].informative_weight = 0.0;
  const auto rows = criteria::compare_estimators(cfg, d_obs, cands, rule);
  json tab = json::array();
  for (const auto& r : rows)
    tab.push_back({{"d_obs", r.d_obs}, {"candidate", r.candidate}, {"pieces", pieces_json(r.pieces)}});
  res.diagnostics["comparisons"] = tab;
  auto os = out.open(suffix);
  io::write_comparisons_csv(os, rows);
}

void cmd_compare(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  std::optional<BetaParams> given;
  if (c.optimal) given = prior_from(*c.optimal, "--optimal");
  run_compare(normal_mse_from(c), c.d_obs, c.mix_c, given, rule, out, res, "comparisons");
}

json sweep_argmins(const std::vector<criteria::SweepRow>& rows) {
  json out = json::array();
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t best = i, j = i;
    for (; j < rows.size() && rows[j].ratio == rows[i].ratio; ++j)
      if (rows[j].pieces.mse < rows[best].pieces.mse) best = j;
    out.push_back({{"ratio", rows[i].ratio}, {"argmin_prior_mean", rows[best].prior_mean},
                   {"min_mse", rows[best].pieces.mse}});
    i = j;
  }
  return out;
}

criteria::SweepConfig sweep_from(const RunConfig& c) {
  criteria::SweepConfig s;
  s.total_n = c.total_n;
  s.ratios = c.ratios;
  s.prior_means = c.prior_means;
  s.concentration = c.concentration;
  s.ybar0 = c.ybar0;
  s.sigma2 = c.sigma2;
  s.mc_reps = c.reps;
  s.seed = c.seed;
  return s;
}

void cmd_sweep(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  const auto rows = criteria::sweep_mse_vs_prior_mean(sweep_from(c), rule);
  res.diagnostics["argmin"] = sweep_argmins(rows);
  auto os = out.open("sweep");
  io::write_sweep_csv(os, rows);
}

// --- case-study / power -----------------------------------------------------------

struct CaseOutcome {
  OptimResult kl;
  OptimResult mse;
};

CaseOutcome run_case(const scenarios::CaseStudy& cs, std::size_t reps, std::uint64_t seed,
                     const numerics::QuadratureRule& rule, std::ostream& table, json& diag) {
  CaseOutcome o;
  o.kl = criteria::derive_optimal_kl(scenarios::case_kl(cs), rule);
  o.mse = criteria::derive_optimal_mse(scenarios::case_mse(cs, reps, seed), rule);
  const auto fit = scenarios::case_current_fit(cs);
  const auto fit0 = scenarios::case_historical_fit(cs);
  const std::vector<std::pair<std::string, BetaParams>> priors{
      {"optimal-kl", o.kl.params}, {"optimal-mse", o.mse.params}, {"beta(1,1)", {1, 1}},
      {"beta(2,2)", {2, 2}},       {"beta(0.5,0.5)", {0.5, 0.5}}, {"beta(10,1)", {10, 1}},
      {"beta(1,10)", {1, 10}}};
  json rows = json::array();
  for (const auto& [label, p] : priors) {
    const auto s = npp::posterior_beta_summary_glm(fit, fit0, p, rule, 1);
    table << cs.name << ',' << label << ',' << io::fmt(p.alpha0) << ',' << io::fmt(p.beta0) << ','
          << io::fmt(s.mean) << ',' << io::fmt(s.sd()) << ',' << io::fmt(s.lower) << ','
          << io::fmt(s.upper) << '\n';
    rows.push_back({{"prior", label}, {"alpha0", p.alpha0}, {"beta0", p.beta0}, {"mean", s.mean},
                    {"sd", s.sd()}, {"lower", s.lower}, {"upper", s.upper}});
  }
  diag[cs.name] = {{"optimal_kl", prior_json(o.kl.params)},
                   {"kl_objective", o.kl.objective},
                   {"optimal_mse", prior_json(o.mse.params)},
                   {"mse_objective", o.mse.objective},
                   {"summaries", rows}};
  return o;
}

const char* kTable3Header = "case,prior,alpha0,beta0,mean,sd,lower,upper\n";

void cmd_case_study(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  const auto cs = scenarios::case_by_name(c.case_name);
  CaseOutcome o;
  {
    auto os = out.open("table3");
    os << kTable3Header;
    o = run_case(cs, c.reps, c.seed, rule, os, res.diagnostics);
  }
  res.derived_prior = prior_json(o.kl.params);
  res.objective = o.kl.objective;
  {
    auto os = out.open("density-uniform");
    io::write_density_csv(os, npp::marginal_a0_asymptotic_glm(scenarios::case_current_fit(cs),
                                                              scenarios::case_historical_fit(cs),
                                                              {1.0, 1.0}, rule));
  }
  auto os = out.open("trace-kl");
  io::write_trace_csv(os, o.kl);
}

void run_power(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res,
               const std::string& case_name) {
  const auto cs = scenarios::case_by_name(case_name);
  auto cfg = scenarios::case_power(cs, BetaParams{1.0, 1.0}, c.power_reps, c.seed);
  cfg.ns = c.ns;
  cfg.gamma = c.gamma;
  cfg.validate();
  std::vector<design::FittingPrior> tags;
  for (const auto& f : c.fitting) {
    if (f == "kl") {
      tags.emplace_back(design::DeriveKl{scenarios::case_kl(cs)});
    } else if (f == "mse") {
      tags.emplace_back(design::DeriveMse{scenarios::case_mse(cs, c.mse_reps, c.seed)});
    } else if (f == "uniform") {
      tags.emplace_back(BetaParams{1.0, 1.0});
    } else {
      throw DomainError("unknown fitting prior '" + f + "' (expected kl, mse or uniform)");
    }
  }
  std::vector<std::vector<design::PowerPoint>> curves(tags.size());
  json diag = json::array();
  for (std::size_t n : cfg.ns) {
    std::vector<BetaParams> priors;
    for (const auto& t : tags) {
      auto tc = cfg;
      tc.prior = t;
      priors.push_back(design::resolve_prior(tc, n, rule));
    }
    const auto pts = design::simulate_power_many(cfg, n, priors, rule);
    for (std::size_t k = 0; k < tags.size(); ++k) {
      curves[k].push_back(pts[k]);
      diag.push_back({{"fitting", c.fitting[k]}, {"n", n}, {"prior", prior_json(pts[k].prior)},
                      {"power", pts[k].power}, {"mc_se", pts[k].mc_se}});
    }
  }
  res.diagnostics["power"] = diag;
  for (std::size_t k = 0; k < tags.size(); ++k) {
    auto os = out.open("power-" + c.fitting[k]);
    io::write_power_csv(os, curves[k]);
  }
}

void cmd_power(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  run_power(c, rule, out, res, c.case_name);
}

// --- reproduce ----------------------------------------------------------------

void rep_table1(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  auto os = out.open("table1");
  os << "d_mtd,d_obs,alpha0,beta0,mean,variance,lower,upper\n";
  json tab = json::array();
  const auto m = scenarios::normal_model();
  for (double dm : {0.5, 1.0, 1.5}) {
    const auto r = criteria::derive_optimal_kl(scenarios::normal_kl(dm), rule);
    for (double d : {0.0, 0.5, 1.0, 1.5}) {
      const auto s = npp::posterior_mu_summary(families::NormalSummary{m.n, m.ybar0 + d, m.sigma2},
                                               families::NormalSummary{m.n0, m.ybar0, m.sigma02},
                                               r.params, npp::InitialPrior::flat(), rule);
      os << io::fmt(dm) << ',' << io::fmt(d) << ',' << io::fmt(r.params.alpha0) << ','
         << io::fmt(r.params.beta0) << ',' << io::fmt(s.mean) << ',' << io::fmt(s.variance) << ','
         << io::fmt(s.lower) << ',' << io::fmt(s.upper) << '\n';
      tab.push_back({{"d_mtd", dm}, {"d_obs", d}, {"mean", s.mean}, {"variance", s.variance}});
    }
  }
  (void)c;
  res.diagnostics["table1"] = tab;
}

void rep_table2(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  auto os = out.open("table2");
  os << "d_mtd,prior,alpha0,beta0,mse,bias_sq,variance,mc_se,percent_reduction\n";
  json tab = json::array();
  for (double dm : {0.5, 1.0, 1.5}) {
    const criteria::MseObjective obj(scenarios::normal_mse(dm, c.reps, c.seed), rule);
    const auto r = criteria::derive_optimal_mse(obj);
    const double u = obj.summed({1.0, 1.0}).mse;
    for (const auto& [label, p] : std::vector<std::pair<std::string, BetaParams>>{
             {"optimal", r.params}, {"beta(1,1)", {1, 1}}, {"beta(2,2)", {2, 2}}}) {
      const auto s = obj.summed(p);
      const double red = 100.0 * (1.0 - s.mse / u);
      os << io::fmt(dm) << ',' << label << ',' << io::fmt(p.alpha0) << ',' << io::fmt(p.beta0) << ','
         << io::fmt(s.mse) << ',' << io::fmt(s.bias_sq) << ',' << io::fmt(s.variance) << ','
         << io::fmt(s.mc_se) << ',' << io::fmt(red) << '\n';
      tab.push_back({{"d_mtd", dm}, {"prior", label}, {"params", prior_json(p)}, {"summed", pieces_json(s)},
                     {"percent_reduction", red}});
    }
  }
  res.diagnostics["table2"] = tab;
}

void rep_stability(const RunConfig&, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  auto os = out.open("stability");
  os << "d_mtd,fixed,alpha0,beta0,objective\n";
  json tab = json::array();
  for (double dm : {0.5, 1.0, 1.5}) {
    const auto cfg = scenarios::normal_kl(dm);
    const auto free = criteria::derive_optimal_kl(cfg, rule);
    const auto fa = criteria::derive_optimal_kl_fixed(cfg, rule, numerics::FixedShape::Alpha, free.params.alpha0);
    const auto fb = criteria::derive_optimal_kl_fixed(cfg, rule, numerics::FixedShape::Beta, free.params.beta0);
    for (const auto& [label, r] : std::vector<std::pair<std::string, const OptimResult*>>{
             {"none", &free}, {"alpha0", &fa}, {"beta0", &fb}}) {
      os << io::fmt(dm) << ',' << label << ',' << io::fmt(r->params.alpha0) << ','
         << io::fmt(r->params.beta0) << ',' << io::fmt(r->objective) << '\n';
      tab.push_back({{"d_mtd", dm}, {"fixed", label}, {"params", prior_json(r->params)}, {"objective", r->objective}});
    }
  }
  res.diagnostics["stability"] = tab;
}

void rep_convergence(const RunConfig&, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  const auto rep = asymptotics::convergence_diagnostic(0.5, 1.0, {30, 50, 100, 200}, 0.1, {1.0, 1.0}, rule);
  {
    auto os = out.open("convergence");
    io::write_convergence_csv(os, rep);
  }
  res.diagnostics["convergence_monotone"] = rep.monotone;
  auto os = out.open("dominance");
  os << "d,min_cdf_gap\n";
  json dom = json::array();
  for (double d : {0.25, 0.5, 1.0, 1.5}) {
    const double g = asymptotics::check_cdf_dominance(d, {}, {1.0, 1.0}, rule);
    os << io::fmt(d) << ',' << io::fmt(g) << '\n';
    dom.push_back({{"d", d}, {"min_cdf_gap", g}});
  }
  res.diagnostics["dominance"] = dom;
}

void rep_comparisons(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  run_compare(scenarios::normal_mse(1.0, c.reps, c.seed), {0.0, 0.5, 1.0, 1.5}, 1000.0, std::nullopt, rule,
              out, res, "comparisons");
}

void rep_sweep(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  auto s = sweep_from(c);
  s.total_n = 60;
  s.ybar0 = 1.5;
  s.sigma2 = 1.0;
  const auto rows = criteria::sweep_mse_vs_prior_mean(s, rule);
  s.total_n = 120;
  const auto rows2 = criteria::sweep_mse_vs_prior_mean(s, rule);
  res.diagnostics["argmin"] = sweep_argmins(rows);
  res.diagnostics["argmin_double"] = sweep_argmins(rows2);
  {
    auto os = out.open("sweep");
    io::write_sweep_csv(os, rows);
  }
  auto os = out.open("sweep-double");
  io::write_sweep_csv(os, rows2);
}

void rep_table3(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  auto os = out.open("table3");
  os << kTable3Header;
  for (const auto& cs : {scenarios::lupus(), scenarios::melanoma()}) run_case(cs, c.reps, c.seed, rule, os, res.diagnostics);
}

void cmd_reproduce(const RunConfig& c, const numerics::QuadratureRule& rule, Outputs& out, Results& res) {
  const bool all = c.target == "all";
  if (all || c.target == "table1") rep_table1(c, rule, out, res);
  if (all || c.target == "table2") rep_table2(c, rule, out, res);
  if (all || c.target == "stability") rep_stability(c, rule, out, res);
  if (all || c.target == "convergence") rep_convergence(c, rule, out, res);
  if (all || c.target == "comparisons") rep_comparisons(c, rule, out, res);
  if (all || c.target == "sweep") rep_sweep(c, rule, out, res);
  if (all || c.target == "table3") rep_table3(c, rule, out, res);
  if (all || c.target == "power") run_power(c, rule, out, res, "lupus");
}

// --- option wiring ------------------------------------------------------------

void add_common(CLI::App* s, RunConfig& c) {
  s->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  s->add_option("--seed", c.seed, "Master seed")->envname("NPPOPT_SEED")->capture_default_str();
  s->add_option("--threads", c.threads, "Worker cap (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--rule", c.rule, "Quadrature rule: transformed | gauss-legendre")->capture_default_str();
  s->add_option("--panels", c.panels, "Quadrature panels")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--order", c.order, "Gauss-Legendre order per panel")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_model(CLI::App* s, RunConfig& c) {
  s->add_option("--family", c.family, "normal | bernoulli | logistic | linear")->capture_default_str();
  s->add_option("--n", c.n, "Current sample size")->capture_default_str();
  s->add_option("--n0", c.n0, "Historical sample size")->capture_default_str();
  s->add_option("--ybar0", c.ybar0, "Historical mean")->capture_default_str();
  s->add_option("--sigma2", c.sigma2, "Current variance")->capture_default_str();
  s->add_option("--sigma02", c.sigma02, "Historical variance")->capture_default_str();
}

void add_criterion(CLI::App* s, RunConfig& c) {
  s->add_option("--dmtd", c.dmtd, "Maximum tolerable difference")->capture_default_str();
  s->add_option("--w", c.w, "Weight on the compatible scenario")->capture_default_str();
}

void add_regression_model(CLI::App* s, RunConfig& c) {
  s->add_flag("--symmetric", c.symmetric, "Bernoulli: place the scenario means symmetrically");
  s->add_option("--beta-hist", c.beta_hist, "Regression: historical coefficients (intercept first)");
  s->add_option("--shift-index", c.shift_index, "Regression: coefficient shifted by dmtd")->capture_default_str();
  s->add_option("--case", c.use_case, "Use a case-study configuration: lupus | melanoma");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Normalized power prior: a0 posteriors and optimal beta priors", "nppopt"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  std::string sub_name;
  for (std::size_t i = 1; i < args.size(); ++i)
    if (std::find(kSubcommands.begin(), kSubcommands.end(), args[i]) != kSubcommands.end()) {
      sub_name = args[i];
      break;
    }
  app.config_formatter(std::make_shared<JsonConfig>(sub_name));
  app.set_config("--config", "", "JSON configuration file; flags override its values");
  app.require_subcommand(1);

  auto* marginal = app.add_subcommand("marginal", "Marginal posterior of a0");
  add_common(marginal, c);
  add_model(marginal, c);
  marginal->add_option("--path", c.path, "auto | exact | asymptotic | laplace");
  marginal->add_option("--init", c.init, "Initial prior: default | flat | vague | logistic")->capture_default_str();
  marginal->add_option("--data", c.data_path, "Current data CSV");
  marginal->add_option("--historical", c.historical_path, "Historical data CSV");
  marginal->add_option("--index", c.index, "Regression coefficient to summarize")->capture_default_str();
  marginal->add_option("--ybar", c.ybar, "Current mean (normal)");
  marginal->add_option("--s", c.s, "Current successes (Bernoulli)");
  marginal->add_option("--s0", c.s0, "Historical successes (Bernoulli)")->capture_default_str();
  marginal->add_option("--prior", c.prior, "Beta prior shapes on a0")->expected(2);

  auto* okl = app.add_subcommand("optimal-kl", "Derive the KL-optimal beta prior");
  add_common(okl, c);
  add_model(okl, c);
  add_criterion(okl, c);
  add_regression_model(okl, c);
  okl->add_option("--c", c.c, "Target concentration")->capture_default_str();

  auto* omse = app.add_subcommand("optimal-mse", "Derive the MSE-optimal beta prior by grid search");
  add_common(omse, c);
  add_model(omse, c);
  add_criterion(omse, c);
  add_regression_model(omse, c);
  omse->add_option("--reps", c.reps, "Monte Carlo replicates")->capture_default_str();
  omse->add_option("--grid-lo", c.grid_lo)->capture_default_str();
  omse->add_option("--grid-hi", c.grid_hi)->capture_default_str();
  omse->add_option("--grid-step", c.grid_step)->capture_default_str();
  omse->add_flag("--fixed-current-mean", c.fixed_current_mean, "Move the historical mean instead of the truth");

  auto* asym = app.add_subcommand("asymptotics", "Convergence and dominance diagnostics");
  add_common(asym, c);
  asym->add_option("--n", c.n, "Current sample size for the dominance check")->capture_default_str();
  asym->add_option("--n0", c.n0)->capture_default_str();
  asym->add_option("--sigma2", c.sigma2)->capture_default_str();
  asym->add_option("--sigma02", c.sigma02)->capture_default_str();
  asym->add_option("--delta", c.delta, "Canonical-scale discrepancy")->capture_default_str();
  asym->add_option("--r", c.r, "Ratio n0/n")->capture_default_str();
  asym->add_option("--schedule", c.schedule, "Sample sizes");
  asym->add_option("--eps", c.eps, "Mass threshold")->capture_default_str();
  asym->add_option("--d-list", c.d_list, "Differences for the dominance check");
  asym->add_option("--p", c.p, "Dimension for the GLM limit")->capture_default_str();
  asym->add_option("--prior", c.prior, "Beta prior shapes on a0")->expected(2);

  auto* cmp = app.add_subcommand("compare", "Compare NPP and robust mixture estimators");
  add_common(cmp, c);
  add_model(cmp, c);
  add_criterion(cmp, c);
  cmp->add_option("--reps", c.reps)->capture_default_str();
  cmp->add_option("--d-obs", c.d_obs, "True current-minus-historical differences");
  cmp->add_option("--mix-c", c.mix_c, "Concentration of the beta mixture")->capture_default_str();
  cmp->add_option("--optimal", c.optimal, "Skip derivation and use these shapes")->expected(2);

  auto* swp = app.add_subcommand("sweep", "MSE against the prior mean of a0");
  add_common(swp, c);
  swp->add_option("--total-n", c.total_n)->capture_default_str();
  swp->add_option("--ratios", c.ratios, "Ratios n/n0");
  swp->add_option("--prior-means", c.prior_means);
  swp->add_option("--concentration", c.concentration)->capture_default_str();
  swp->add_option("--ybar0", c.ybar0)->capture_default_str();
  swp->add_option("--sigma2", c.sigma2)->capture_default_str();
  swp->add_option("--reps", c.reps)->capture_default_str();

  auto* cse = app.add_subcommand("case-study", "Two-arm logistic case studies");
  add_common(cse, c);
  cse->add_option("--case", c.case_name, "lupus | melanoma")->capture_default_str();
  cse->add_option("--reps", c.reps, "Monte Carlo replicates for the MSE criterion")->capture_default_str();

  auto* pwr = app.add_subcommand("power", "Bayesian power curves");
  add_common(pwr, c);
  pwr->add_option("--case", c.case_name)->capture_default_str();
  pwr->add_option("--ns", c.ns, "Current sample sizes");
  pwr->add_option("--gamma", c.gamma)->capture_default_str();
  pwr->add_option("--power-reps", c.power_reps)->capture_default_str();
  pwr->add_option("--mse-reps", c.mse_reps, "Replicates for per-n MSE derivation")->capture_default_str();
  pwr->add_option("--fitting", c.fitting, "Fitting priors: kl | mse | uniform");

  auto* rep = app.add_subcommand("reproduce", "Regenerate the reference tables and figure data as CSV");
  add_common(rep, c);
  rep->add_option("target", c.target, "Experiment to reproduce")->required()->check(CLI::IsMember(kTargets));
  rep->add_option("--reps", c.reps)->capture_default_str();
  rep->add_option("--power-reps", c.power_reps)->capture_default_str();
  rep->add_option("--mse-reps", c.mse_reps)->capture_default_str();
  rep->add_option("--ns", c.ns);
  rep->add_option("--gamma", c.gamma)->capture_default_str();
  rep->add_option("--fitting", c.fitting);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    if (dynamic_cast<const CLI::RequiredError*>(&e) && app.get_subcommands().empty()) err << app.help();
    return kConfigError;
  }

  CLI::App* active = app.get_subcommands().front();
  c.subcommand = active->get_name();

  try {
    const auto rule = rule_from(c);
    Outputs outputs;
    outputs.dir = c.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(outputs.dir, ec);
    if (!std::filesystem::is_directory(outputs.dir))
      throw DomainError("output directory '" + c.out_dir + "' cannot be created");
    const std::string hash = config_hash(c);
    outputs.prefix = c.subcommand + (c.target.empty() ? "" : "-" + c.target) + "-" + hash;
    Results res;
    if (c.subcommand == "marginal") cmd_marginal(c, rule, outputs, res, err);
    else if (c.subcommand == "optimal-kl") cmd_optimal_kl(c, rule, outputs, res);
    else if (c.subcommand == "optimal-mse") cmd_optimal_mse(c, rule, outputs, res);
    else if (c.subcommand == "asymptotics") cmd_asymptotics(c, rule, outputs, res);
    else if (c.subcommand == "compare") cmd_compare(c, rule, outputs, res);
    else if (c.subcommand == "sweep") cmd_sweep(c, rule, outputs, res);
    else if (c.subcommand == "case-study") cmd_case_study(c, rule, outputs, res);
    else if (c.subcommand == "power") cmd_power(c, rule, outputs, res);
    else cmd_reproduce(c, rule, outputs, res);

    json results;
    results["subcommand"] = c.subcommand;
    results["config"] = config_json(c);
    results["derived_prior"] = res.derived_prior;
    results["objective"] = res.objective;
    results["diagnostics"] = res.diagnostics;
    results["artifact_paths"] = outputs.artifacts;
    results["seed"] = c.seed;
    validate_results(results);
    const auto file = outputs.dir / (outputs.prefix + ".json");
    std::ofstream os(file, std::ios::binary);
    if (!os) throw DomainError("cannot write results file '" + file.string() + "'");
    os << results.dump(2) << '\n';
    out << file.string() << '\n';
    return kOk;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace nppopt::cli
