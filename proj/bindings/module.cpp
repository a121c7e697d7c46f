#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "isq/bromwich.hpp"
#include "isq/estimators.hpp"
#include "isq/experiment.hpp"
#include "isq/kernels.hpp"
#include "isq/oracle.hpp"
#include "isq/rates.hpp"
#include "isq/rng.hpp"
#include "isq/service.hpp"
#include "isq/sim.hpp"

namespace py = pybind11;

namespace {

isq::ExperimentSpec spec_from_json_str(const std::string& text) {
  return isq::ExperimentSpec::from_json(nlohmann::json::parse(text));
}

py::dict summary_to_dict(const isq::SummaryReport& summary) {
  py::dict d;
  d["scenario"] = summary.scenario;
  py::list targets;
  for (const auto& t : summary.targets) {
    py::dict e;
    e["target"] = t.target;
    e["mean"] = t.mean;
    e["sd"] = t.sd;
    e["rmse"] = t.rmse;
    e["n_reps"] = t.n_reps;
    targets.append(e);
  }
  d["targets"] = targets;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Service-time inference for Mt/G/inf queues observed through queue lengths";

  py::class_<isq::Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("stream", &isq::Rng::stream, py::arg("master"), py::arg("k"))
      .def("uniform01", &isq::Rng::uniform01)
      .def("exponential", &isq::Rng::exponential, py::arg("rate"));

  py::class_<isq::RateModel>(m, "RateModel")
      .def("eval", &isq::RateModel::eval, py::arg("t"))
      .def("laplace", &isq::RateModel::laplace, py::arg("z"))
      .def("sup_bound", &isq::RateModel::sup_bound, py::arg("t0"), py::arg("t1"))
      .def_property_readonly("sigma_lambda", &isq::RateModel::sigma_lambda)
      .def_property_readonly("gamma", &isq::RateModel::gamma)
      .def_property_readonly("k0", &isq::RateModel::k0)
      .def_property_readonly("lambda0", &isq::RateModel::lambda0)
      .def_property_readonly("label", &isq::RateModel::label)
      .def("with_bound_constants", &isq::RateModel::with_bound_constants, py::arg("gamma"),
           py::arg("k0"));

  m.def("make_constant", &isq::make_constant, py::arg("lambda0"), py::arg("a") = 0.0);
  m.def("make_polynomial", &isq::make_polynomial, py::arg("lambda0"), py::arg("p"));
  m.def("make_sinusoidal", &isq::make_sinusoidal, py::arg("lambda0"), py::arg("b"),
        py::arg("cosine") = false);
  m.def("make_exponential", &isq::make_exponential, py::arg("lambda0"), py::arg("theta"));
  m.def("make_highlow", &isq::make_highlow, py::arg("lambda0"), py::arg("lambda1"));

  py::class_<isq::AssumptionViolation>(m, "AssumptionViolation")
      .def_readonly("sigma", &isq::AssumptionViolation::sigma)
      .def_readonly("omega", &isq::AssumptionViolation::omega)
      .def_readonly("t", &isq::AssumptionViolation::t)
      .def_readonly("margin", &isq::AssumptionViolation::margin);
  py::class_<isq::ValidationReport>(m, "ValidationReport")
      .def_readonly("violations", &isq::ValidationReport::violations)
      .def_readonly("points_checked", &isq::ValidationReport::points_checked)
      .def("ok", &isq::ValidationReport::ok);
  m.def("validate_assumptions",
        py::overload_cast<const isq::RateModel&>(&isq::validate_assumptions), py::arg("rate"));

  py::class_<isq::ServiceModel>(m, "ServiceModel")
      .def("sample", &isq::ServiceModel::sample, py::arg("rng"))
      .def("cdf", &isq::ServiceModel::cdf, py::arg("x"))
      .def("survival", &isq::ServiceModel::survival, py::arg("x"))
      .def_property_readonly("mean", &isq::ServiceModel::mean)
      .def_property_readonly("class_M", &isq::ServiceModel::class_M)
      .def_property_readonly("label", &isq::ServiceModel::label);

  m.def("make_exponential_service", &isq::make_exponential_service, py::arg("rate"));
  m.def("make_uniform_service", &isq::make_uniform_service, py::arg("lo"), py::arg("hi"));
  m.def("make_deterministic_service", &isq::make_deterministic_service, py::arg("d"));

  py::class_<isq::QueuePath>(m, "QueuePath")
      .def_readonly("epochs", &isq::QueuePath::epochs)
      .def_readonly("counts", &isq::QueuePath::counts)
      .def_readonly("horizon", &isq::QueuePath::horizon)
      .def("at", &isq::QueuePath::at, py::arg("t"));

  py::class_<isq::Grid>(m, "Grid")
      .def(py::init<double, std::size_t, double>(), py::arg("step"), py::arg("n"),
           py::arg("start") = 0.0)
      .def("point", &isq::Grid::point, py::arg("i"))
      .def_readonly("step", &isq::Grid::step)
      .def_readonly("n", &isq::Grid::n);

  m.def("simulate_arrivals", &isq::simulate_arrivals, py::arg("rate"), py::arg("T"),
        py::arg("rng"));
  m.def("build_queue_path", &isq::build_queue_path, py::arg("arrivals"), py::arg("service"),
        py::arg("T"), py::arg("rng"));
  m.def("sample_on_grid", &isq::sample_on_grid, py::arg("path"), py::arg("grid"));

  py::class_<isq::BromwichConfig>(m, "BromwichConfig")
      .def(py::init([](double c, double T_tilde, int n_max) {
             return isq::BromwichConfig{c, T_tilde, n_max};
           }),
           py::arg("c") = -1.0, py::arg("T_tilde") = 30.0, py::arg("n_max") = 20000)
      .def_readwrite("c", &isq::BromwichConfig::c)
      .def_readwrite("T_tilde", &isq::BromwichConfig::T_tilde)
      .def_readwrite("n_max", &isq::BromwichConfig::n_max);
  py::enum_<isq::StripSide>(m, "StripSide")
      .value("Left", isq::StripSide::Left)
      .value("Right", isq::StripSide::Right);
  m.def("choose_config", &isq::choose_config, py::arg("strip_edge"), py::arg("side"));
  m.def("invert", &isq::invert, py::arg("F"), py::arg("t"), py::arg("cfg"));

  py::class_<isq::KernelSupport>(m, "KernelSupport")
      .def_readonly("lo", &isq::KernelSupport::lo)
      .def_readonly("hi", &isq::KernelSupport::hi);

  py::class_<isq::DeconvKernelL>(m, "DeconvKernelL")
      .def("eval", &isq::DeconvKernelL::eval, py::arg("t"))
      .def("integral", &isq::DeconvKernelL::integral, py::arg("a"), py::arg("b"))
      .def("laplace", &isq::DeconvKernelL::laplace, py::arg("z"))
      .def("support", &isq::DeconvKernelL::support)
      .def("closed_form", &isq::DeconvKernelL::closed_form)
      .def_property_readonly("h", &isq::DeconvKernelL::bandwidth);
  py::class_<isq::MeanKernelJ>(m, "MeanKernelJ")
      .def("eval", &isq::MeanKernelJ::eval, py::arg("t"))
      .def("integral", &isq::MeanKernelJ::integral, py::arg("a"), py::arg("b"))
      .def("laplace", &isq::MeanKernelJ::laplace, py::arg("z"))
      .def("support", &isq::MeanKernelJ::support)
      .def("closed_form", &isq::MeanKernelJ::closed_form)
      .def_property_readonly("b", &isq::MeanKernelJ::window_b)
      .def_property_readonly("h", &isq::MeanKernelJ::smoothing_h)
      .def_property_readonly("x1", &isq::MeanKernelJ::shift_x1);

  m.def(
      "make_L",
      [](const isq::RateModel& rate, double h, double window_lo, double window_hi,
         bool force_numeric) {
        isq::NumericKernelOptions opts;
        opts.window_lo = window_lo;
        opts.window_hi = window_hi;
        opts.force_numeric = force_numeric;
        return isq::make_L(rate, h, opts);
      },
      py::arg("rate"), py::arg("h"), py::arg("window_lo") = std::nan(""),
      py::arg("window_hi") = std::nan(""), py::arg("force_numeric") = false);
  m.def(
      "make_J",
      [](const isq::RateModel& rate, double b, double h, double x1, bool force_numeric) {
        isq::NumericKernelOptions opts;
        opts.force_numeric = force_numeric;
        return isq::make_J(rate, b, h, x1, opts);
      },
      py::arg("rate"), py::arg("b"), py::arg("h"), py::arg("x1") = 0.0,
      py::arg("force_numeric") = false);
  m.def("laplace_of_L", &isq::laplace_of_L, py::arg("kernel"), py::arg("z"));

  py::class_<isq::DistEstimate>(m, "DistEstimate")
      .def_readonly("x0", &isq::DistEstimate::x0)
      .def_readonly("h", &isq::DistEstimate::h)
      .def_readonly("value", &isq::DistEstimate::value)
      .def_readonly("variance", &isq::DistEstimate::variance);
  py::class_<isq::MeanEstimate>(m, "MeanEstimate")
      .def_readonly("b", &isq::MeanEstimate::b)
      .def_readonly("value", &isq::MeanEstimate::value);

  m.def("estimate_G", &isq::estimate_G, py::arg("paths"), py::arg("L"), py::arg("x0"),
        py::arg("T"));
  m.def("estimate_mu", &isq::estimate_mu, py::arg("paths"), py::arg("J"), py::arg("T"));
  m.def("estimate_mu_closed_constant", &isq::estimate_mu_closed_constant, py::arg("paths"),
        py::arg("b"), py::arg("lambda0"));
  m.def("estimate_mu_closed_highlow", &isq::estimate_mu_closed_highlow, py::arg("paths"),
        py::arg("b"), py::arg("lambda0"));
  m.def("variance_estimate", &isq::variance_estimate, py::arg("paths"), py::arg("L"),
        py::arg("x0"), py::arg("grid"));

  py::class_<isq::BandwidthInputs>(m, "BandwidthInputs")
      .def(py::init([](double beta, double A, double M, double x0, double n,
                       const isq::RateModel& rate) {
             isq::BandwidthInputs in;
             in.beta = beta;
             in.A = A;
             in.M = M;
             in.x0 = x0;
             in.n = n;
             in.rate = rate;
             return in;
           }),
           py::arg("beta"), py::arg("A"), py::arg("M"), py::arg("x0"), py::arg("n"),
           py::arg("rate"));
  m.def("theoretical_h", &isq::theoretical_h, py::arg("inputs"));
  m.def("theoretical_b", &isq::theoretical_b, py::arg("rate"), py::arg("M"), py::arg("n"));

  py::class_<isq::AdaptiveConfig>(m, "AdaptiveConfig")
      .def(py::init([](double h_min, double alpha, int max_steps, bool literal) {
             isq::AdaptiveConfig cfg;
             cfg.h_min = h_min;
             cfg.alpha = alpha;
             cfg.max_steps = max_steps;
             cfg.literal_last_interval = literal;
             return cfg;
           }),
           py::arg("h_min") = 0.025, py::arg("alpha") = 0.25, py::arg("max_steps") = -1,
           py::arg("literal_last_interval") = false);
  py::class_<isq::AdaptiveResult>(m, "AdaptiveResult")
      .def_readonly("h_selected", &isq::AdaptiveResult::h_selected)
      .def_readonly("estimate", &isq::AdaptiveResult::estimate)
      .def_readonly("hit_max_steps", &isq::AdaptiveResult::hit_max_steps)
      .def_readonly("h_grid", &isq::AdaptiveResult::h_grid);
  m.def("select_bandwidth_adaptive",
        [](const std::vector<isq::QueuePath>& paths, const isq::RateModel& rate, double x0,
           double T, const isq::AdaptiveConfig& cfg) {
          return isq::select_bandwidth_adaptive(paths, rate, x0, T, cfg);
        },
        py::arg("paths"), py::arg("rate"), py::arg("x0"), py::arg("T"), py::arg("cfg"));

  py::class_<isq::TheoryContext>(m, "TheoryContext")
      .def(py::init([](const isq::RateModel& rate, const isq::ServiceModel& service) {
             return isq::TheoryContext{rate, service};
           }),
           py::arg("rate"), py::arg("service"))
      .def("H", &isq::TheoryContext::H, py::arg("t"))
      .def("H_ab", &isq::TheoryContext::H_ab, py::arg("a"), py::arg("b"), py::arg("t"))
      .def("cov", &isq::TheoryContext::cov, py::arg("t1"), py::arg("t2"))
      .def("joint_log_mgf", &isq::TheoryContext::joint_log_mgf, py::arg("ts"),
           py::arg("thetas"));

  py::class_<isq::ExperimentSpec>(m, "ExperimentSpec")
      .def_static("from_json", &spec_from_json_str, py::arg("text"))
      .def_static("from_file", &isq::ExperimentSpec::from_file, py::arg("path"))
      .def_static("preset", &isq::ExperimentSpec::preset, py::arg("name"))
      .def_property_readonly("scenario",
                             [](const isq::ExperimentSpec& s) { return s.scenario; })
      .def_property("seed", [](const isq::ExperimentSpec& s) { return s.seed; },
                    [](isq::ExperimentSpec& s, std::uint64_t v) { s.seed = v; })
      .def("to_json", [](const isq::ExperimentSpec& s) { return s.to_json().dump(2); });

  m.def(
      "run",
      [](const isq::ExperimentSpec& spec, int threads) {
        const isq::RunResult result = isq::run(spec, threads);
        py::list records;
        for (const auto& r : result.records) {
          py::dict d;
          d["scenario"] = r.scenario;
          d["rep"] = r.rep;
          d["target"] = r.target;
          d["estimate"] = r.estimate;
          d["truth"] = r.truth;
          d["tuning"] = r.tuning;
          d["seconds"] = r.seconds;
          records.append(d);
        }
        py::dict out;
        out["records"] = records;
        out["summary"] = summary_to_dict(result.summary);
        return out;
      },
      py::arg("spec"), py::arg("threads") = 1);
}
