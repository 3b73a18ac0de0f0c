#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oas/chain_runner.hpp"
#include "oas/diagnostics.hpp"
#include "oas/experiment.hpp"
#include "oas/oracle.hpp"
#include "oas/species.hpp"

namespace py = pybind11;
using namespace oas;

namespace {

Data data_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw data_error("empty data");
  Data data;
  data.dim = static_cast<int>(rows.front().size());
  if (data.dim != 1 && data.dim != 2) throw data_error("observations must have 1 or 2 columns");
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != data.dim) throw data_error("ragged rows");
    data.values.insert(data.values.end(), row.begin(), row.end());
  }
  return data;
}

std::vector<std::vector<double>> rows_from_data(const Data& data) {
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(data.n()));
  for (long i = 0; i < data.n(); ++i)
    rows.emplace_back(data.row(i), data.row(i) + data.dim);
  return rows;
}

GaussianFamily family_for(const Data& data, std::optional<std::vector<double>> univariate_hyper,
                          std::optional<std::vector<double>> bivariate_hyper) {
  if (univariate_hyper) {
    const auto& h = *univariate_hyper;
    if (h.size() != 4) throw data_error("univariate hyper must be (phi, lambda, a, b)");
    return GaussianFamily::univariate(NigHyper{h[0], h[1], h[2], h[3]});
  }
  if (bivariate_hyper) {
    const auto& h = *bivariate_hyper;
    if (h.size() != 7) throw data_error("bivariate hyper must be (phi0, phi1, lambda, psi00, psi01, psi11, tau_df)");
    return GaussianFamily::bivariate(NiwHyper{{h[0], h[1]}, h[2], Sym2{h[3], h[4], h[5]}, h[6]});
  }
  if (data.dim == 1) return GaussianFamily::preset_univariate(data.mean(0));
  return GaussianFamily::preset_bivariate({data.mean(0), data.mean(1)});
}

}  // namespace

PYBIND11_MODULE(_oas, m) {
  m.doc() = "ordered allocation Gibbs sampler for Bayesian mixture models";

  py::class_<MixingPrior>(m, "MixingPrior")
      .def_static("pitman_yor", &MixingPrior::pitman_yor, py::arg("sigma"), py::arg("theta"))
      .def_static("finite_dirichlet", &MixingPrior::finite_dirichlet, py::arg("gamma"), py::arg("m"))
      .def_static(
          "gnedin",
          [](double gamma_hat) { return MixingPrior::gnedin(gamma_hat); },
          py::arg("gamma_hat"))
      .def("describe", &MixingPrior::describe)
      .def("__repr__", &MixingPrior::describe);

  m.def(
      "eppf_two_param",
      [](std::vector<long> counts, double sigma, double theta) {
        return eppf_two_param(BlockCounts(std::move(counts)), sigma, theta);
      },
      py::arg("counts"), py::arg("sigma"), py::arg("theta"));
  m.def(
      "eppf_mfm_given_m",
      [](std::vector<long> counts, double gamma, long m) {
        return eppf_mfm_given_m(BlockCounts(std::move(counts)), gamma, m);
      },
      py::arg("counts"), py::arg("gamma"), py::arg("m"));
  m.def(
      "eppf_gnedin_marginal",
      [](std::vector<long> counts, double gamma_hat) {
        return eppf_gnedin_marginal(BlockCounts(std::move(counts)), gamma_hat);
      },
      py::arg("counts"), py::arg("gamma_hat"));
  m.def("gnedin_prior_pmf", &gnedin_prior_pmf, py::arg("m"), py::arg("gamma_hat"));
  m.def(
      "gnedin_m_posterior",
      [](long k_n, long n, double gamma_hat) {
        auto post = gnedin_m_posterior(k_n, n, gamma_hat);
        return py::make_tuple(post.k_n, post.head, post.tail_mass);
      },
      py::arg("k_n"), py::arg("n"), py::arg("gamma_hat"),
      "Returns (first_m, head_probabilities, tail_mass).");

  m.def(
      "iat",
      [](const std::vector<double>& series) {
        auto result = iat(std::span<const double>(series));
        return py::make_tuple(result.value, result.degenerate);
      },
      py::arg("series"), "Returns (tau, degenerate).");

  m.def(
      "synthetic",
      [](const std::string& name, std::uint64_t seed) {
        return rows_from_data(generate_synthetic(name, seed));
      },
      py::arg("name"), py::arg("seed"));
  m.def(
      "permute",
      [](const std::vector<std::vector<double>>& rows, std::uint64_t seed) {
        return rows_from_data(permute_data(data_from_rows(rows), seed));
      },
      py::arg("rows"), py::arg("seed"));

  m.def(
      "exact_partition_posterior",
      [](const std::vector<std::vector<double>>& rows, const MixingPrior& prior,
         std::optional<std::vector<double>> univariate_hyper,
         std::optional<std::vector<double>> bivariate_hyper) {
        Data data = data_from_rows(rows);
        auto family = family_for(data, std::move(univariate_hyper), std::move(bivariate_hyper));
        auto table = exact_partition_posterior(data, prior, family);
        std::vector<std::string> keys;
        std::vector<double> probs;
        for (size_t idx = 0; idx < table.partitions.size(); ++idx) {
          keys.push_back(partition_key(table.partitions[idx]));
          probs.push_back(table.probability(idx));
        }
        return py::make_tuple(keys, probs);
      },
      py::arg("rows"), py::arg("prior"), py::arg("univariate_hyper") = std::nullopt,
      py::arg("bivariate_hyper") = std::nullopt);

  m.def(
      "run_chain",
      [](const std::string& sampler, const std::vector<std::vector<double>>& rows,
         const MixingPrior& prior, long iterations, long burn_in, long thin, std::uint64_t seed,
         std::optional<std::vector<double>> univariate_hyper,
         std::optional<std::vector<double>> bivariate_hyper) {
        Data data = data_from_rows(rows);
        auto family = family_for(data, std::move(univariate_hyper), std::move(bivariate_hyper));
        ChainOptions options;
        options.iterations = iterations;
        options.burn_in = burn_in;
        options.thin = thin;
        PartitionHistogram histogram;
        ChainTrace trace = run_chain(sampler, data, family, prior, options, seed,
                                     data.n() <= 12 ? &histogram : nullptr);
        py::dict out;
        out["k"] = k_series(trace);
        out["deviance"] = deviance_series(trace);
        std::map<std::string, double> hist_norm;
        long total = 0;
        for (const auto& [key, count] : histogram) total += count;
        for (const auto& [key, count] : histogram)
          hist_norm[key] = static_cast<double>(count) / static_cast<double>(total);
        out["partition_frequencies"] = hist_norm;
        std::map<long, double> kp = occupancy_posterior(trace);
        out["k_posterior"] = kp;
        out["label_change_rate"] = label_change_rate(trace);
        return out;
      },
      py::arg("sampler"), py::arg("rows"), py::arg("prior"), py::arg("iterations") = 2000,
      py::arg("burn_in") = 1000, py::arg("thin") = 1, py::arg("seed") = 1,
      py::arg("univariate_hyper") = std::nullopt, py::arg("bivariate_hyper") = std::nullopt);

  m.def(
      "run_experiment",
      [](const std::string& config_path) {
        run_experiment(parse_config_file(config_path));
      },
      py::arg("config_path"));
}
