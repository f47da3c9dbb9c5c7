#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "crnsim/bestresp.hpp"
#include "crnsim/inner.hpp"
#include "crnsim/jjaspa.hpp"
#include "crnsim/learn.hpp"
#include "crnsim/oracle.hpp"
#include "crnsim/physics.hpp"
#include "crnsim/trace_io.hpp"

namespace py = pybind11;
using namespace crnsim;

namespace {

LearnConfig make_learn(int memory, double cost, int max_iters, double step_exponent, int k) {
  LearnConfig cfg;
  cfg.memory = memory;
  cfg.cost = cost / k;
  cfg.max_iters = max_iters;
  cfg.schedule = StepsizeSchedule(step_exponent);
  cfg.inner.schedule = StepsizeSchedule(step_exponent);
  return cfg;
}

RunTrace run_named(const NetworkInstance& inst, const std::string& algo, std::uint64_t seed,
                   int memory, double cost, int max_iters, double step_exponent) {
  const auto cfg = make_learn(memory, cost, max_iters, step_exponent, inst.num_channels());
  if (algo == "jaspa") return run_jaspa(inst, cfg, seed);
  if (algo == "se") return run_se_jaspa(inst, cfg, seed);
  if (algo == "si") return run_si_jaspa(inst, cfg, seed);
  if (algo == "jjaspa") return run_jjaspa(inst, cfg, seed);
  throw ConfigError("algo must be jaspa|se|si|jjaspa");
}

}  // namespace

PYBIND11_MODULE(_crnsim, m) {
  m.doc() = "Joint AP selection and multi-channel power allocation simulator";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("num_cus", &ScenarioConfig::num_cus)
      .def_readwrite("num_aps", &ScenarioConfig::num_aps)
      .def_readwrite("num_channels", &ScenarioConfig::num_channels)
      .def_readwrite("area_m", &ScenarioConfig::area_m)
      .def_readwrite("power_budget", &ScenarioConfig::power_budget)
      .def_readwrite("noise_floor", &ScenarioConfig::noise_floor)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("d_min", &ScenarioConfig::d_min)
      .def("validate", &ScenarioConfig::validate);

  py::class_<NetworkInstance>(m, "NetworkInstance")
      .def_property_readonly("num_cus", &NetworkInstance::num_cus)
      .def_property_readonly("num_aps", &NetworkInstance::num_aps)
      .def_property_readonly("num_channels", &NetworkInstance::num_channels)
      .def_property_readonly("channel_owner", &NetworkInstance::channel_owner)
      .def("channels_of", &NetworkInstance::channels_of)
      .def("gain", &NetworkInstance::gain)
      .def("noise", py::overload_cast<int, int>(&NetworkInstance::noise, py::const_))
      .def("budget", &NetworkInstance::budget)
      .def("with_log_base", &NetworkInstance::with_log_base)
      .def("__eq__", [](const NetworkInstance& a, const NetworkInstance& b) { return a == b; });

  m.def("generate_snapshot", &generate_snapshot, py::arg("config"), py::arg("seed"));
  m.def(
      "snapshot",
      [](int n, int w, int k, std::uint64_t seed) {
        ScenarioConfig sc;
        sc.num_cus = n;
        sc.num_aps = w;
        sc.num_channels = k;
        return generate_snapshot(sc, seed);
      },
      py::arg("n"), py::arg("w"), py::arg("k"), py::arg("seed"),
      "Snapshot with the default area, budget and noise.");

  m.def(
      "rate",
      [](const NetworkInstance& inst, int i, int w, const std::vector<double>& p,
         const std::vector<double>& interference) { return rate(inst, i, w, p, interference); },
      py::arg("inst"), py::arg("i"), py::arg("w"), py::arg("p"), py::arg("interference"));
  m.def(
      "waterfill",
      [](const NetworkInstance& inst, int i, int w, const std::vector<double>& interference) {
        return waterfill(inst, i, w, interference);
      },
      py::arg("inst"), py::arg("i"), py::arg("w"), py::arg("interference"));
  m.def(
      "potential_ap",
      [](const NetworkInstance& inst, int w, const std::vector<int>& occupants,
         const std::vector<PowerVector>& powers) { return potential_ap(inst, w, occupants, powers); },
      py::arg("inst"), py::arg("w"), py::arg("occupants"), py::arg("powers"));
  m.def("system_potential", &system_potential);
  m.def("sum_rate", &sum_rate);
  m.def("interference_at", &interference_at);
  m.def("uniform_profile", &uniform_profile);
  m.def(
      "solve_powers",
      [](const NetworkInstance& inst, const Association& assoc) {
        return solve_all_aps(inst, assoc, uniform_profile(inst, assoc), InnerOptions{});
      },
      "Inner equilibrium powers of every AP for a fixed association.");
  m.def(
      "certify_jep",
      [](const NetworkInstance& inst, const Association& assoc, const PowerProfile& powers,
         double tol) {
        const auto c = certify_jep(inst, assoc, powers, tol);
        return py::dict(py::arg("passed") = c.pass, py::arg("gap") = c.gap,
                        py::arg("worst_cu") = c.worst_cu);
      },
      py::arg("inst"), py::arg("assoc"), py::arg("powers"), py::arg("tol") = 1e-6);

  m.def(
      "run",
      [](const NetworkInstance& inst, const std::string& algo, std::uint64_t seed, int memory,
         double cost, int max_iters, double step_exponent) {
        const auto t = run_named(inst, algo, seed, memory, cost, max_iters, step_exponent);
        py::list rows;
        for (const auto& r : t.rows)
          rows.append(py::dict(py::arg("iteration") = r.iteration, py::arg("sum_rate") = r.sum_rate,
                               py::arg("potential") = r.potential,
                               py::arg("num_switchers") = r.num_switchers,
                               py::arg("max_beta_gap") = r.max_beta_gap,
                               py::arg("converged") = r.converged,
                               py::arg("coalitions") = r.coalitions));
        std::ostringstream csv;
        write_trace_csv(csv, t);
        return py::dict(py::arg("algo") = t.algo, py::arg("converged") = t.converged,
                        py::arg("iterations_to_converge") = t.iterations_to_converge,
                        py::arg("iterations_run") = t.iterations_run, py::arg("assoc") = t.assoc,
                        py::arg("powers") = t.powers, py::arg("sum_rate") = t.sum_rate,
                        py::arg("potential") = t.potential,
                        py::arg("certificate_gap") = t.certificate_gap,
                        py::arg("warnings") = t.warnings, py::arg("rows") = rows,
                        py::arg("csv") = csv.str());
      },
      py::arg("inst"), py::arg("algo") = "jaspa", py::arg("seed") = 0, py::arg("memory") = 10,
      py::arg("cost") = 0.0, py::arg("max_iters") = 500,
      py::arg("step_exponent") = kDefaultStepExponent,
      "Runs a learning algorithm. cost is per 1 Hz channel and is divided by K internally.");

  m.def(
      "exhaustive_sep",
      [](const NetworkInstance& inst) {
        const auto r = exhaustive_sep(inst);
        return py::make_tuple(r.best, r.sep);
      },
      "Best association by system equilibrium potential, and its value.");
  m.def("max_throughput", &max_throughput);
  m.def("closest_ap", [](const NetworkInstance& inst) {
    const auto b = closest_ap_baseline(inst);
    return py::make_tuple(b.assoc, b.sum_rate);
  });
  m.def("multi_connectivity", [](const NetworkInstance& inst) {
    return multi_connectivity_baseline(inst);
  });
}
