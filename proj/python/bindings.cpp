#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "champagne/builder.hpp"
#include "champagne/config.hpp"
#include "champagne/errors.hpp"
#include "champagne/potential.hpp"
#include "champagne/schedules.hpp"
#include "champagne/verifier.hpp"
#include "champagne/wos_engine.hpp"

namespace py = pybind11;
using namespace champagne;

namespace {

Vec3 to_vec(const std::vector<double>& v) {
    if (v.size() < 2 || v.size() > 3) throw py::value_error("points need 2 or 3 coordinates");
    return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

py::tuple from_vec(const Vec3& v, int d) {
    if (d == 2) return py::make_tuple(v.x, v.y);
    return py::make_tuple(v.x, v.y, v.z);
}

WosParams wos_params(double eps_obstacle, double eps_boundary, std::uint64_t max_steps, int threads) {
    WosParams p;
    p.eps_obstacle = eps_obstacle;
    p.eps_boundary = eps_boundary;
    p.max_steps = max_steps;
    p.threads = threads;
    return p;
}

}  // namespace

PYBIND11_MODULE(_champagne, m) {
    m.doc() = "Champagne subregion construction and walk-on-spheres estimation";

    py::register_exception<Error>(m, "ChampagneError", PyExc_RuntimeError);

    py::class_<Schedule>(m, "Schedule")
        .def_static("parse", &Schedule::parse, py::arg("text"), py::arg("d"), py::arg("k0") = py::none())
        .def_static("one_bubble", &Schedule::one_bubble, py::arg("d"), py::arg("k0") = py::none())
        .def_static("power_law", &Schedule::power_law, py::arg("d"), py::arg("M"), py::arg("eps"),
                    py::arg("k0") = py::none())
        .def_static("tower", &Schedule::tower, py::arg("d"), py::arg("n"), py::arg("k0") = py::none())
        .def_readonly("d", &Schedule::d)
        .def_readonly("k0", &Schedule::k0)
        .def("name", &Schedule::name)
        .def("__repr__", [](const Schedule& s) { return "Schedule(" + s.name() + ", d=" + std::to_string(s.d) + ")"; });

    py::class_<CapacityWeight>(m, "CapacityWeight")
        .def_static("parse", &CapacityWeight::parse)
        .def_static("power", &CapacityWeight::power)
        .def_static("iter_log_cubed", &CapacityWeight::iter_log_cubed)
        .def("name", &CapacityWeight::name)
        .def("__call__", &CapacityWeight::operator())
        .def("from_log", &CapacityWeight::from_log)
        .def("__repr__", [](const CapacityWeight& w) { return "CapacityWeight(" + w.name() + ")"; });

    py::class_<ShellParams>(m, "ShellParams")
        .def_readonly("k", &ShellParams::k)
        .def_readonly("m", &ShellParams::m)
        .def_readonly("alpha", &ShellParams::alpha)
        .def_readonly("beta", &ShellParams::beta)
        .def_readonly("a", &ShellParams::a)
        .def_readonly("R", &ShellParams::R)
        .def_readonly("log_r", &ShellParams::log_r);
    m.def("shell_params", &shell_params, py::arg("schedule"), py::arg("k"), py::arg("k2") = py::none());
    m.def("compute_k1", &compute_k1, py::arg("schedule"), py::arg("horizon") = 100'000);
    m.def("iterated_log", &iterated_log);
    m.def(
        "validate_schedule",
        [](const Schedule& s, const CapacityWeight& w, long horizon) {
            py::list out;
            for (const auto& c : validate_schedule(s, w, horizon).constraints)
                out.append(py::dict(py::arg("name") = c.name, py::arg("pass") = c.pass,
                                    py::arg("evidence") = c.evidence));
            return out;
        },
        py::arg("schedule"), py::arg("weight"), py::arg("horizon") = 64);

    m.def("annulus_hit_prob", &annulus_hit_prob, py::arg("r"), py::arg("R"), py::arg("s"), py::arg("d"));
    m.def("eta", &eta);

    py::class_<ShellRecord>(m, "Shell")
        .def_readonly("k", &ShellRecord::k)
        .def_readonly("count", &ShellRecord::count)
        .def_readonly("R", &ShellRecord::R)
        .def_readonly("sep", &ShellRecord::sep)
        .def_readonly("log_r", &ShellRecord::log_r)
        .def_readonly("cluster", &ShellRecord::cluster);

    py::class_<ChampagneConfig>(m, "Config")
        .def_readonly("construction", &ChampagneConfig::construction)
        .def_readonly("d", &ChampagneConfig::d)
        .def_readonly("shells", &ChampagneConfig::shells)
        .def_readonly("capacity_sum", &ChampagneConfig::capacity_sum)
        .def_property_readonly("bubble_count", [](const ChampagneConfig& c) { return c.bubbles.size(); })
        .def("to_json", &config_to_json, py::arg("indent") = -1)
        .def_static("from_json", &config_from_json)
        .def("save", &save_config)
        .def_static("load", &load_config);

    m.def(
        "build_ball_config",
        [](const Schedule& s, const CapacityWeight& w, long k_lo, long k_hi, std::uint64_t seed) {
            py::gil_scoped_release release;
            return build_ball_config(s, w, k_lo, k_hi, s.d, seed);
        },
        py::arg("schedule"), py::arg("weight"), py::arg("k_lo"), py::arg("k_hi"), py::arg("seed") = 1);
    m.def("annulus_config", &make_annulus_config, py::arg("d"), py::arg("r"), py::arg("R"));

    py::class_<HitEstimate>(m, "HitEstimate")
        .def_property_readonly("start", [](const HitEstimate& e) { return from_vec(e.start, e.d); })
        .def_readonly("p_hat", &HitEstimate::p_hat)
        .def_readonly("trials", &HitEstimate::trials)
        .def_readonly("hits_obstacle", &HitEstimate::hits_obstacle)
        .def_readonly("hits_boundary", &HitEstimate::hits_boundary)
        .def_readonly("timeouts", &HitEstimate::timeouts)
        .def_readonly("ci_halfwidth_3sigma", &HitEstimate::ci_halfwidth_3sigma)
        .def_readonly("flagged", &HitEstimate::flagged)
        .def("__repr__", [](const HitEstimate& e) {
            return "HitEstimate(p_hat=" + std::to_string(e.p_hat) + ", trials=" + std::to_string(e.trials) + ")";
        });

    m.def(
        "hit_probability",
        [](const ChampagneConfig& cfg, const std::vector<double>& start, std::uint64_t trials, std::uint64_t seed,
           double eps_obstacle, double eps_boundary, std::uint64_t max_steps, int threads) {
            const Vec3 z = to_vec(start);
            const auto p = wos_params(eps_obstacle, eps_boundary, max_steps, threads);
            py::gil_scoped_release release;
            return WosEngine(cfg).hit_probability(z, trials, p, seed);
        },
        py::arg("config"), py::arg("start"), py::arg("trials") = 10000, py::arg("seed") = 1,
        py::arg("eps_obstacle") = 1e-3, py::arg("eps_boundary") = -1.0, py::arg("max_steps") = 1'000'000,
        py::arg("threads") = 0);

    py::class_<DeltaResult>(m, "DeltaResult")
        .def_readonly("delta", &DeltaResult::delta)
        .def_readonly("k_lo", &DeltaResult::k_lo)
        .def_readonly("partial", &DeltaResult::partial)
        .def_readonly("tail_bound", &DeltaResult::tail_bound)
        .def("total", &DeltaResult::total)
        .def("passed", &DeltaResult::pass);
    m.def("find_k_lo_for_delta", &find_k_lo_for_delta, py::arg("schedule"), py::arg("weight"), py::arg("delta"),
          py::arg("horizon") = 1000);

    m.def(
        "verify",
        [](const ChampagneConfig& cfg, std::optional<double> delta, bool audit) {
            VerifyOptions opt;
            opt.delta = delta;
            opt.audit = audit;
            py::gil_scoped_release release;
            return verify_config(cfg, cfg.weight, opt).to_json();
        },
        py::arg("config"), py::arg("delta") = py::none(), py::arg("audit") = true,
        "Run the verification checks and return the report as a JSON string.");
}
