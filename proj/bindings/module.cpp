#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skembed/bounds.hpp"
#include "skembed/distributions.hpp"
#include "skembed/embedding.hpp"
#include "skembed/experiments.hpp"
#include "skembed/rng.hpp"
#include "skembed/stats.hpp"
#include "skembed/transport.hpp"

namespace py = pybind11;
using namespace skembed;

namespace {

py::dict report_to_dict(const ExperimentReport& report) {
  py::dict config;
  config["experiment"] = report.config.name;
  config["lambda"] = report.config.lambda;
  config["mu"] = report.config.mu;
  config["sigma"] = report.config.sigma;
  config["n"] = report.config.n;
  config["q"] = report.config.q;
  config["reps"] = report.config.reps;
  config["samples"] = report.config.samples;
  config["mesh"] = report.config.mesh;
  config["seed"] = report.config.seed;
  config["format"] = report.config.format;

  py::list metrics;
  for (const auto& m : report.metrics) {
    py::dict item;
    item["name"] = m.name;
    item["estimate"] = m.estimate;
    item["error_bound"] = m.error_bound;
    item["threshold"] = m.threshold;
    item["pass"] = m.pass;
    metrics.append(item);
  }

  py::dict out;
  out["version"] = report.version;
  out["config"] = config;
  out["metrics"] = metrics;
  out["all_pass"] = report.all_pass();
  out["duration_seconds"] = report.duration_seconds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Poisson-time embedding of two-sided exponential random walks, "
            "transport-process couplings, and their verification statistics";
  m.attr("__version__") = kVersion;

  py::class_<Rng>(m, "Rng", "Deterministic random stream (seeded)")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform01", &Rng::uniform01)
      .def("exponential", &Rng::exponential, py::arg("rate"))
      .def("normal", py::overload_cast<>(&Rng::normal));
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("stream"),
        py::arg("index"),
        "Counter-based stream derivation used for replication seeding");

  py::class_<DriftParams>(m, "DriftParams")
      .def_readonly("lambda_", &DriftParams::lambda)
      .def_readonly("mu", &DriftParams::mu)
      .def_readonly("sigma", &DriftParams::sigma)
      .def_readonly("eta", &DriftParams::eta)
      .def_readonly("omega", &DriftParams::omega)
      .def("__repr__", [](const DriftParams& p) {
        return "DriftParams(lambda=" + std::to_string(p.lambda) +
               ", mu=" + std::to_string(p.mu) +
               ", sigma=" + std::to_string(p.sigma) +
               ", eta=" + std::to_string(p.eta) +
               ", omega=" + std::to_string(p.omega) + ")";
      });
  m.def("rates_from_drift", &rates_from_drift, py::arg("lambda_"),
        py::arg("mu"), py::arg("sigma"));

  m.def("sample_laplace", &sample_laplace, py::arg("lambda_"), py::arg("rng"));
  m.def("sample_asym", &sample_asym, py::arg("params"), py::arg("rng"));
  m.def("laplace_cdf", &laplace_cdf, py::arg("lambda_"), py::arg("x"));
  m.def("laplace_pdf", &laplace_pdf, py::arg("lambda_"), py::arg("x"));
  m.def("asym_cdf", &asym_cdf, py::arg("params"), py::arg("x"));
  m.def("asym_pdf", &asym_pdf, py::arg("params"), py::arg("x"));

  py::class_<ArrivalStream>(m, "ArrivalStream")
      .def_readonly("intensity", &ArrivalStream::intensity)
      .def_readonly("epochs", &ArrivalStream::epochs);
  py::class_<SkeletonPath>(m, "SkeletonPath")
      .def_readonly("arrivals", &SkeletonPath::arrivals)
      .def_readonly("values", &SkeletonPath::values)
      .def_readonly("params", &SkeletonPath::params);
  py::class_<FineGridPath>(m, "FineGridPath")
      .def_readonly("times", &FineGridPath::times)
      .def_readonly("values", &FineGridPath::values)
      .def_readonly("arrival_indices", &FineGridPath::arrival_indices);

  m.def("poisson_arrivals", &poisson_arrivals, py::arg("intensity"),
        py::arg("count"), py::arg("rng"));
  m.def("poisson_arrivals_horizon", &poisson_arrivals_horizon,
        py::arg("intensity"), py::arg("horizon"), py::arg("rng"));
  m.def("brownian_skeleton", &brownian_skeleton, py::arg("arrivals"),
        py::arg("params"), py::arg("rng"));

  py::enum_<StepLaw>(m, "StepLaw")
      .value("laplace", StepLaw::laplace)
      .value("asym", StepLaw::asym);
  m.def("direct_walk", &direct_walk, py::arg("law"), py::arg("params"),
        py::arg("n"), py::arg("rng"));
  m.def("joint_fine_grid", &joint_fine_grid, py::arg("params"),
        py::arg("mesh_width"), py::arg("horizon"), py::arg("rng"));
  m.def("skeleton_from_grid", &skeleton_from_grid, py::arg("fine"));

  py::class_<TransportPath>(m, "TransportPath")
      .def_readonly("epochs", &TransportPath::epochs)
      .def_readonly("values", &TransportPath::values)
      .def_readonly("slopes", &TransportPath::slopes)
      .def_readonly("horizon", &TransportPath::horizon)
      .def("initial_sign", &TransportPath::initial_sign);
  m.def("inflection_epochs", &inflection_epochs, py::arg("skeleton"));
  m.def("transport_from_skeleton", &transport_from_skeleton,
        py::arg("skeleton"), py::arg("lambda_"), py::arg("min_horizon") = 0.0);
  m.def("transport_direct", &transport_direct, py::arg("lambda_"),
        py::arg("horizon"), py::arg("rng"));
  m.def("transport_drifted", &transport_drifted, py::arg("params"),
        py::arg("horizon"), py::arg("rng"));
  m.def("eval_transport", &eval_transport, py::arg("path"), py::arg("t"));

  py::class_<SupDistance>(m, "SupDistance")
      .def_readonly("mesh_max", &SupDistance::mesh_max)
      .def_readonly("slack", &SupDistance::slack);
  m.def("sup_distance", &sup_distance, py::arg("path"), py::arg("fine"));

  m.def(
      "ks_one_sample",
      [](const std::vector<double>& samples,
         const std::function<double(double)>& cdf) {
        return ks_one_sample(samples, cdf);
      },
      py::arg("samples"), py::arg("cdf"));
  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return ks_two_sample(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def("ks_threshold_one_sample", &ks_threshold_one_sample, py::arg("n"));
  m.def("ks_threshold_two_sample", &ks_threshold_two_sample, py::arg("n"),
        py::arg("m"));

  py::class_<MomentSummary>(m, "MomentSummary")
      .def_readonly("count", &MomentSummary::count)
      .def_readonly("mean", &MomentSummary::mean)
      .def_readonly("raw2", &MomentSummary::raw2)
      .def_readonly("raw4", &MomentSummary::raw4)
      .def_readonly("central2", &MomentSummary::central2)
      .def_readonly("central4", &MomentSummary::central4)
      .def_readonly("se_mean", &MomentSummary::se_mean)
      .def_readonly("se_raw2", &MomentSummary::se_raw2)
      .def_readonly("se_raw4", &MomentSummary::se_raw4);
  m.def(
      "moment_summary",
      [](const std::vector<double>& samples) { return moment_summary(samples); },
      py::arg("samples"));

  py::class_<TailEstimate>(m, "TailEstimate")
      .def_readonly("estimate", &TailEstimate::estimate)
      .def_readonly("upper_bound", &TailEstimate::upper_bound);
  m.def("tail_estimate", &tail_estimate, py::arg("exceed_count"),
        py::arg("trials"));

  py::class_<RateParams>(m, "RateParams")
      .def_readonly("n", &RateParams::n)
      .def_readonly("q", &RateParams::q)
      .def_readonly("m", &RateParams::m)
      .def_readonly("beta_star", &RateParams::beta_star)
      .def_readonly("delta_star", &RateParams::delta_star);
  m.def("rate_params", &rate_params, py::arg("n"), py::arg("q"));
  m.def("erlang_central_moment", &erlang_central_moment, py::arg("k"),
        py::arg("m"));
  m.def("erlang_central_moment_log", &erlang_central_moment_log, py::arg("k"),
        py::arg("m"));
  m.def("doob_chain_rhs", &doob_chain_rhs, py::arg("n"), py::arg("q"),
        py::arg("c1"));
  py::class_<DeltaPair>(m, "DeltaPair")
      .def_readonly("delta_star", &DeltaPair::delta_star)
      .def_readonly("delta_classic", &DeltaPair::delta_classic);
  m.def("delta_compare", &delta_compare, py::arg("n"));

  py::class_<RateExperimentReport>(m, "RateExperimentReport")
      .def_readonly("n", &RateExperimentReport::n)
      .def_readonly("q", &RateExperimentReport::q)
      .def_readonly("threshold", &RateExperimentReport::threshold)
      .def_readonly("replications", &RateExperimentReport::replications)
      .def_readonly("exceed_count", &RateExperimentReport::exceed_count)
      .def_readonly("estimate", &RateExperimentReport::estimate)
      .def_readonly("upper_bound", &RateExperimentReport::upper_bound)
      .def_readonly("q99", &RateExperimentReport::q99);
  m.def("rate_experiment", &rate_experiment, py::arg("n"), py::arg("q"),
        py::arg("replications"), py::arg("master_seed"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_experiment",
      [](const std::string& name, double lambda, double mu, double sigma,
         long n, double q, long reps, long samples, double mesh,
         std::uint64_t seed, int workers) {
        ExperimentConfig config;
        config.name = name;
        config.lambda = lambda;
        config.mu = mu;
        config.sigma = sigma;
        config.n = n;
        config.q = q;
        config.reps = reps;
        config.samples = samples;
        config.mesh = mesh;
        config.seed = seed;
        config.workers = workers;
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(config);
        }
        return report_to_dict(report);
      },
      py::arg("name"), py::arg("lambda_") = 1.0, py::arg("mu") = 0.0,
      py::arg("sigma") = 1.0, py::arg("n") = 0, py::arg("q") = 0.0,
      py::arg("reps") = 0, py::arg("samples") = 0, py::arg("mesh") = 1e-4,
      py::arg("seed") = 42, py::arg("workers") = 0,
      "Run a registered experiment and return its report as a dict");
  m.def("experiment_names", [] {
    std::vector<std::string> names;
    for (const auto& e : experiment_registry()) names.push_back(e.name);
    return names;
  });
}
