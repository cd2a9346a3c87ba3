// Python bindings for the simulator core. The surface mirrors the C++ API:
// basis construction, multi-photon lifts, network training, the loss limit,
// and the distribution fits used by the analysis pipeline.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpnn/stats.hpp"
#include "qpnn/tasks.hpp"
#include "qpnn/trainer.hpp"

namespace py = pybind11;
using namespace qpnn;

namespace {

constexpr double kPi = 3.14159265358979323846;

py::dict metrics_dict(const MetricsReport& report) {
  py::dict d;
  d["f_unc"] = report.f_unc;
  d["f_con"] = report.f_con;
  d["p_cb"] = report.p_cb;
  d["degenerate_pairs"] = report.degenerate_pairs;
  return d;
}

py::dict train_task(const std::string& task, int layers, double alpha_wg,
                    double varphi, std::uint64_t seed,
                    const std::string& objective, double ftol, int max_evals,
                    bool ideal) {
  const NetworkArch arch = arch_for(task, layers, alpha_wg, varphi);
  const TrainingSet set = training_set_for(task);
  OptimizerConfig cfg;
  cfg.ftol_abs = ftol;
  cfg.max_evals = max_evals;
  const ObjectiveKind kind = objective == "conditional"
                                 ? ObjectiveKind::conditional
                                 : ObjectiveKind::unconditional;
  QPNNInstance net =
      ideal ? make_ideal_instance(arch) : make_sampled_instance(arch, seed);
  const TrainOutcome out = train_instance(net, set, kind, cfg, seed);

  py::dict d = metrics_dict(out.metrics);
  d["infidelity"] = out.infidelity;
  d["evaluations"] = out.evaluations;
  d["converged"] = out.reason == StopReason::converged;
  return d;
}

py::dict loss_limit_py(const std::string& task, int layers, double alpha_wg,
                       double varphi, std::uint64_t seed) {
  const NetworkArch arch = arch_for(task, layers, alpha_wg, varphi);
  const LossLimitOutcome out =
      loss_limit(arch, training_set_for(task), OptimizerConfig{}, seed);
  py::dict d;
  d["ideal_fidelity"] = out.ideal_fidelity;
  d["layer_transmission"] = out.layer_transmission;
  d["limit"] = out.limit;
  return d;
}

py::tuple fit_tuple(const stats::FitResult& fit) {
  return py::make_tuple(fit.params[0], fit.params[1], fit.mean, fit.ci_low,
                        fit.ci_high);
}

}  // namespace

PYBIND11_MODULE(_qpnn, m) {
  m.doc() = "simulator core for lossy photonic networks with Kerr layers";

  py::class_<FockBasis, std::shared_ptr<FockBasis>>(m, "FockBasis")
      .def(py::init([](int photons, int modes) {
             return std::const_pointer_cast<FockBasis>(
                 FockBasis::make(photons, modes));
           }),
           py::arg("photons"), py::arg("modes"))
      .def_property_readonly("photons", &FockBasis::photons)
      .def_property_readonly("modes", &FockBasis::modes)
      .def("__len__", &FockBasis::size)
      .def("state", &FockBasis::state, py::arg("index"))
      .def("index_of", &FockBasis::index_of, py::arg("state"))
      .def("states", [](const FockBasis& b) {
        std::vector<FockState> out;
        for (int i = 0; i < b.size(); ++i) out.push_back(b.state(i));
        return out;
      });

  m.def("permanent", &permanent, py::arg("matrix"),
        "permanent of a square complex matrix");
  m.def(
      "multi_photon_transform",
      [](const Matrix& u, const FockBasis& basis) {
        return multi_photon_transform(u, basis);
      },
      py::arg("unitary"), py::arg("basis"),
      "lift a single-photon transfer matrix to the multi-photon basis");
  m.def("element_loss", &element_loss, py::arg("alpha_wg_db_cm"),
        py::arg("length_cm"), "fractional power loss of one element");
  m.def(
      "ideal_mzi",
      [](double phi, double theta) { return ideal_mzi({phi, theta}); },
      py::arg("phi"), py::arg("theta"));
  m.def(
      "realistic_mzi",
      [](double phi, double theta, double t1, double t2, double alpha) {
        return realistic_mzi({phi, theta}, {t1, t2, alpha});
      },
      py::arg("phi"), py::arg("theta"), py::arg("t1") = 0.5,
      py::arg("t2") = 0.5, py::arg("alpha") = 0.0);

  m.def("fredkin_bsa_fidelity", &fredkin_bsa_fidelity, py::arg("varphi"),
        "Bell-analysis fidelity of the fixed Fredkin-style circuit");
  m.def("series_success_rate", &series_success_rate, py::arg("fidelity"),
        py::arg("stages"), "success rate of gates composed in series");
  m.def("linear_optical_bound", &linear_optical_bound);

  m.def("train", &train_task, py::arg("task"), py::arg("layers") = 2,
        py::arg("alpha_wg") = 0.0, py::arg("varphi") = kPi,
        py::arg("seed") = 1, py::arg("objective") = "unconditional",
        py::arg("ftol") = 1e-6, py::arg("max_evals") = 20000,
        py::arg("ideal") = false,
        "train one network instance and return its fidelity metrics");
  m.def("loss_limit", &loss_limit_py, py::arg("task"), py::arg("layers"),
        py::arg("alpha_wg"), py::arg("varphi"), py::arg("seed") = 1,
        "fidelity ceiling imposed by propagation loss alone");

  m.def(
      "fit_lognormal",
      [](const std::vector<double>& v) { return fit_tuple(stats::fit_lognormal(v)); },
      py::arg("values"),
      "(mu, sigma, mean, ci_low, ci_high) of a lognormal fit");
  m.def(
      "fit_beta",
      [](const std::vector<double>& v) { return fit_tuple(stats::fit_beta(v)); },
      py::arg("values"), "(a, b, mean, ci_low, ci_high) of a beta fit");
  m.def("success_threshold", &stats::success_threshold, py::arg("values"),
        "mean minus one standard deviation");
  m.def("max_plateau_indices", &stats::max_plateau_indices,
        py::arg("infidelities"), py::arg("gap_decades") = 0.5,
        py::arg("refine_decades") = std::numeric_limits<double>::infinity(),
        "indices of the best (lowest-infidelity) cluster");
}
