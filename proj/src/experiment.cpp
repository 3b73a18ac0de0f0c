#include "oas/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "oas/diagnostics.hpp"
#include "oas/oracle.hpp"

namespace oas {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') throw config_error("bad numeric value for " + key + ": " + v);
  return x;
}

long to_long(const std::string& v, const std::string& key) {
  char* end = nullptr;
  long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') throw config_error("bad integer value for " + key + ": " + v);
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (samplers.empty()) throw config_error("no sampler configured");
  for (const auto& s : samplers)
    if (s != "ordered" && s != "marginal" && s != "slice")
      throw config_error("unknown sampler: " + s);
  if (!(iterations > burn_in)) throw config_error("need iterations > burn_in");
  if (burn_in < 0) throw config_error("need burn_in >= 0");
  if (thin < 1) throw config_error("need thin >= 1");
  if (!seed_present) throw config_error("seed is required (no entropy defaults)");
  if (data_path.empty() == data_synthetic.empty())
    throw config_error("exactly one of data.path and data.synthetic must be set");
  if (slice_max_components < 1) throw config_error("slice.max_components must be >= 1");
  if (init != "single_block" && init != "prediction_rule")
    throw config_error("init must be single_block or prediction_rule");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig config;
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("sampler")) config.samplers = split_list(*v);

  std::string variant = take("prior.variant").value_or("pitman_yor");
  if (variant == "pitman_yor") {
    double sigma = to_double(take("prior.sigma").value_or("0"), "prior.sigma");
    double theta = to_double(take("prior.theta").value_or("1"), "prior.theta");
    config.prior = MixingPrior::pitman_yor(sigma, theta);
  } else if (variant == "finite_dirichlet") {
    double gamma = to_double(take("prior.gamma").value_or("1"), "prior.gamma");
    long m = to_long(take("prior.m").value_or("1"), "prior.m");
    config.prior = MixingPrior::finite_dirichlet(gamma, m);
  } else if (variant == "gnedin_mfm") {
    double gh = to_double(take("prior.gamma_hat").value_or("0.5"), "prior.gamma_hat");
    GammaRule rule = GammaRule::constant(1.0);
    if (auto rv = take("prior.gamma_rule")) {
      auto sep = rv->find(':');
      std::string kind = sep == std::string::npos ? *rv : rv->substr(0, sep);
      double value = sep == std::string::npos ? 1.0 : to_double(rv->substr(sep + 1), "prior.gamma_rule");
      if (kind == "constant") rule = GammaRule::constant(value);
      else if (kind == "theta_over_m") rule = GammaRule::theta_over_m(value);
      else throw config_error("unknown gamma rule: " + *rv);
    }
    config.prior = MixingPrior::gnedin(gh, rule);
  } else {
    throw config_error("unknown prior.variant: " + variant);
  }

  config.family_preset = take("family.preset").value_or("paper");
  if (config.family_preset == "explicit") {
    std::string kind = take("family.kind").value_or("univariate");
    if (kind == "univariate") {
      NigHyper h;
      h.phi = to_double(take("family.phi").value_or("0"), "family.phi");
      h.lambda = to_double(take("family.lambda").value_or("1"), "family.lambda");
      h.a = to_double(take("family.a").value_or("1"), "family.a");
      h.b = to_double(take("family.b").value_or("1"), "family.b");
      h.validate();
      config.nig = h;
    } else if (kind == "bivariate") {
      NiwHyper h;
      auto phi = split_list(take("family.phi").value_or("0,0"));
      if (phi.size() != 2) throw config_error("family.phi must have two components");
      h.phi = {to_double(phi[0], "family.phi"), to_double(phi[1], "family.phi")};
      h.lambda = to_double(take("family.lambda").value_or("1"), "family.lambda");
      h.tau_df = to_double(take("family.tau_df").value_or("2"), "family.tau_df");
      auto psi = split_list(take("family.psi").value_or("1,0,1"));
      if (psi.size() != 3) throw config_error("family.psi must be c00,c01,c11");
      h.psi = {to_double(psi[0], "family.psi"), to_double(psi[1], "family.psi"),
               to_double(psi[2], "family.psi")};
      h.validate();
      config.niw = h;
    } else {
      throw config_error("family.kind must be univariate or bivariate");
    }
  } else if (config.family_preset != "paper") {
    throw config_error("family.preset must be paper or explicit");
  }

  if (auto v = take("data.path")) config.data_path = *v;
  if (auto v = take("data.synthetic")) config.data_synthetic = *v;
  if (auto v = take("data.seed")) config.data_seed = static_cast<std::uint64_t>(to_long(*v, "data.seed"));
  if (auto v = take("data.permute_seed"))
    config.permute_seed = static_cast<std::uint64_t>(to_long(*v, "data.permute_seed"));
  if (auto v = take("iterations")) config.iterations = to_long(*v, "iterations");
  if (auto v = take("burn_in")) config.burn_in = to_long(*v, "burn_in");
  if (auto v = take("thin")) config.thin = to_long(*v, "thin");
  if (auto v = take("seed")) {
    config.seed = static_cast<std::uint64_t>(to_long(*v, "seed"));
    config.seed_present = true;
  }
  if (auto v = take("output_dir")) config.output_dir = *v;
  if (auto v = take("slice.max_components")) config.slice_max_components = to_long(*v, "slice.max_components");
  if (auto v = take("init")) config.init = *v;

  if (!kv.empty()) throw config_error(origin + ": unknown key: " + kv.begin()->first);
  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

Data load_experiment_data(const ExperimentConfig& config) {
  Data data = config.data_path.empty() ? generate_synthetic(config.data_synthetic, config.data_seed)
                                       : load_data(config.data_path);
  if (config.permute_seed) data = permute_data(data, *config.permute_seed);
  return data;
}

GaussianFamily make_family(const ExperimentConfig& config, const Data& data) {
  if (config.family_preset == "explicit") {
    if (config.nig) {
      if (data.dim != 1) throw config_error("univariate family with bivariate data");
      return GaussianFamily::univariate(*config.nig);
    }
    if (data.dim != 2) throw config_error("bivariate family with univariate data");
    return GaussianFamily::bivariate(*config.niw);
  }
  if (data.dim == 1) return GaussianFamily::preset_univariate(data.mean(0));
  return GaussianFamily::preset_bivariate({data.mean(0), data.mean(1)});
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Data density_grid(const Data& data) {
  Data grid;
  grid.dim = data.dim;
  if (data.dim == 1) {
    double lo = data.values[0], hi = data.values[0];
    for (double v : data.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double pad = 0.25 * (hi - lo) + 1e-6;
    lo -= pad;
    hi += pad;
    const int points = 201;
    for (int i = 0; i < points; ++i)
      grid.values.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    return grid;
  }
  double lo0 = data.row(0)[0], hi0 = lo0, lo1 = data.row(0)[1], hi1 = lo1;
  for (long i = 0; i < data.n(); ++i) {
    lo0 = std::min(lo0, data.row(i)[0]);
    hi0 = std::max(hi0, data.row(i)[0]);
    lo1 = std::min(lo1, data.row(i)[1]);
    hi1 = std::max(hi1, data.row(i)[1]);
  }
  double pad0 = 0.25 * (hi0 - lo0) + 1e-6, pad1 = 0.25 * (hi1 - lo1) + 1e-6;
  lo0 -= pad0;
  hi0 += pad0;
  lo1 -= pad1;
  hi1 += pad1;
  const int points = 41;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      grid.values.push_back(lo0 + (hi0 - lo0) * static_cast<double>(i) / (points - 1));
      grid.values.push_back(lo1 + (hi1 - lo1) * static_cast<double>(j) / (points - 1));
    }
  }
  return grid;
}

void write_density_csv(const std::string& path, const Data& grid, const std::vector<double>& full,
                       const std::vector<double>& empirical) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write density grid: " + path);
  out << (grid.dim == 1 ? "x,full,empirical\n" : "x,y,full,empirical\n");
  for (long p = 0; p < grid.n(); ++p) {
    for (int c = 0; c < grid.dim; ++c) out << fmt(grid.row(p)[c]) << ",";
    out << fmt(full[static_cast<size_t>(p)]) << "," << fmt(empirical[static_cast<size_t>(p)]) << "\n";
  }
}

void write_component_density_csv(const std::string& path, const Data& grid,
                                 const ChainTrace& trace) {
  int jmax = 0;
  for (const auto& rec : trace.records) jmax = std::max(jmax, rec.k_n);
  jmax = std::min(jmax, 8);
  std::ofstream out(path);
  if (!out) throw data_error("cannot write component densities: " + path);
  out << (grid.dim == 1 ? "x,component,weight_mode,empirical_mode\n"
                        : "x,y,component,weight_mode,empirical_mode\n");
  for (int j = 1; j <= jmax; ++j) {
    auto wdens = component_density_estimate(trace, grid, j, ComponentDensityMode::weight);
    auto edens = component_density_estimate(trace, grid, j, ComponentDensityMode::empirical);
    for (long p = 0; p < grid.n(); ++p) {
      for (int c = 0; c < grid.dim; ++c) out << fmt(grid.row(p)[c]) << ",";
      out << j << "," << fmt(wdens[static_cast<size_t>(p)]) << ","
          << fmt(edens[static_cast<size_t>(p)]) << "\n";
    }
  }
}

}  // namespace

void run_experiment(const ExperimentConfig& config) {
  Data data = load_experiment_data(config);
  GaussianFamily family = make_family(config, data);
  std::filesystem::create_directories(config.output_dir);

  ChainOptions options;
  options.iterations = config.iterations;
  options.burn_in = config.burn_in;
  options.thin = config.thin;
  options.slice_max_components = config.slice_max_components;
  options.init = config.init == "prediction_rule" ? InitMode::prediction_rule : InitMode::single_block;

  bool oracle_possible = data.n() <= 8;
  std::optional<PartitionTable> oracle_table;
  std::map<std::string, double> exact;
  if (oracle_possible) {
    try {
      oracle_table = exact_partition_posterior(data, config.prior, family);
      for (size_t idx = 0; idx < oracle_table->partitions.size(); ++idx)
        exact[partition_key(oracle_table->partitions[idx])] = oracle_table->probability(idx);
    } catch (const unsupported_prior_error&) {
      oracle_possible = false;
    }
  }

  nlohmann::json comparison;
  for (size_t s = 0; s < config.samplers.size(); ++s) {
    const std::string& sampler = config.samplers[s];
    std::uint64_t chain_seed = config.seed + s;
    PartitionHistogram histogram;
    auto t0 = std::chrono::steady_clock::now();
    ChainTrace trace = run_chain(sampler, data, family, config.prior, options, chain_seed,
                                 oracle_possible ? &histogram : nullptr);
    double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string base = config.output_dir + "/" + sampler;
    write_trace_csv(trace, base + "_trace.csv");

    Data grid = density_grid(data);
    auto full = density_estimate(trace, grid, family, DensityMode::full);
    auto empirical = density_estimate(trace, grid, family, DensityMode::empirical);
    write_density_csv(base + "_density.csv", grid, full, empirical);
    write_component_density_csv(base + "_component_density.csv", grid, trace);

    nlohmann::json summary;
    summary["sampler"] = sampler;
    summary["prior"] = config.prior.describe();
    summary["seed"] = chain_seed;
    summary["n"] = data.n();
    summary["dim"] = data.dim;
    summary["iterations"] = config.iterations;
    summary["burn_in"] = config.burn_in;
    summary["thin"] = config.thin;
    auto iat_k = iat(k_series(trace));
    auto iat_dv = iat(deviance_series(trace));
    summary["iat_k"] = iat_k.value;
    summary["iat_k_degenerate"] = iat_k.degenerate;
    summary["iat_dv"] = iat_dv.value;
    summary["iat_dv_degenerate"] = iat_dv.degenerate;
    summary["runtime_seconds"] = runtime;
    summary["label_change_rate"] = label_change_rate(trace);
    nlohmann::json kpost;
    for (const auto& [k, p] : occupancy_posterior(trace)) kpost[std::to_string(k)] = p;
    summary["k_posterior"] = kpost;
    if (config.prior.has_random_m() && sampler == "ordered") {
      nlohmann::json mpost;
      for (const auto& [m, p] : m_posterior(trace)) mpost[std::to_string(m)] = p;
      summary["m_posterior"] = mpost;
    } else {
      summary["m_posterior"] = nullptr;
    }
    std::ofstream out(base + "_summary.json");
    out << summary.dump(2) << "\n";

    if (oracle_possible) comparison[sampler] = histogram_tv(histogram, exact);
  }

  if (oracle_possible) {
    oracle_table->write_csv(config.output_dir + "/oracle.csv");
    std::ofstream out(config.output_dir + "/oracle_comparison.json");
    out << comparison.dump(2) << "\n";
  }
}

void run_oracle(const ExperimentConfig& config) {
  Data data = load_experiment_data(config);
  GaussianFamily family = make_family(config, data);
  std::filesystem::create_directories(config.output_dir);
  PartitionTable table = exact_partition_posterior(data, config.prior, family);
  table.write_csv(config.output_dir + "/oracle.csv");
}

ReportRow report_trace(const std::string& trace_path) {
  ChainTrace trace = read_trace_csv(trace_path);
  ReportRow row;
  row.path = trace_path;
  row.sampler = trace.sampler;
  row.prior = trace.prior;
  row.seed = trace.seed;
  row.records = static_cast<long>(trace.records.size());
  row.iat_k = iat(k_series(trace)).value;
  row.iat_dv = iat(deviance_series(trace)).value;
  double mk = 0.0;
  for (const auto& rec : trace.records) mk += rec.k_n;
  row.mean_k = trace.records.empty() ? 0.0 : mk / static_cast<double>(trace.records.size());
  return row;
}

}  // namespace oas
