#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcgehee/config.hpp"
#include "mcgehee/criteria.hpp"
#include "mcgehee/report.hpp"
#include "mcgehee/setdyn.hpp"
#include "mcgehee/verify.hpp"

namespace py = pybind11;
using namespace mcgehee;

namespace {

PointCloud to_cloud(const Eigen::MatrixXd& rows) {
    PointCloud C;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        C.points.push_back(rows.row(i).transpose());
    }
    return C;
}

py::dict fixed_point_dict(const BoundaryFixedPoint& fp) {
    py::dict d;
    d["q"] = fp.q;
    d["f"] = fp.f_value;
    d["nu"] = fp.nu_star;
    d["sphere_hessian"] = fp.sphere_hess_eigs;
    d["linearized"] = fp.linearized;
    d["eigenvalues"] = fp.flow_eigs;
    d["eigen_cross_error"] = fp.eigen_cross_error;
    d["jordan"] = fp.jordan_degenerate;
    d["stable_dim"] = fp.stable_dim;
    d["unstable_dim"] = fp.unstable_dim;
    d["class"] = to_string(fp.boundary_class);
    return d;
}

py::dict trajectory_dict(const Trajectory& traj) {
    const Eigen::Index m = static_cast<Eigen::Index>(traj.size());
    Eigen::VectorXd t(m), H(m), nu(m);
    Eigen::MatrixXd z(m, traj.empty() ? 0 : traj.front().state.size());
    for (Eigen::Index i = 0; i < m; ++i) {
        const Sample& s = traj.samples[i];
        t[i] = s.time;
        H[i] = s.energy;
        nu[i] = s.nu;
        z.row(i) = s.state.transpose();
    }
    py::dict d;
    d["time"] = t;
    d["state"] = z;
    d["energy"] = H;
    d["nu"] = nu;
    d["frame"] = to_string(traj.frame);
    d["termination"] = to_string(traj.termination);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "McGehee blowup of electromagnetic Lagrangian systems";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", error.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
    py::register_exception<HypothesisError>(m, "HypothesisError", error.ptr());

    py::class_<RunConfig>(m, "Config")
        .def_static("load", &load_config, py::arg("path"))
        .def_static("parse", &parse_config, py::arg("text"))
        .def_readonly("dimension", &RunConfig::dimension)
        .def_readonly("truncation", &RunConfig::truncation)
        .def_readonly("domain_radius", &RunConfig::domain_radius)
        .def_readwrite("seed", &RunConfig::seed)
        .def_property_readonly("potential", [](const RunConfig& c) { return c.potential.to_string(); });

    m.def(
        "analyze_json",
        [](const RunConfig& cfg) {
            const BlownSystem bs(cfg.make_system());
            const CriterionReport rep = analyze(bs, find_sphere_critical_points(bs.U_l(), cfg.search));
            std::optional<EscapeSweep> sweep;
            if (rep.overall() == "totally-unstable") {
                const double r_B = cfg.escape.r_B > 0.0 ? cfg.escape.r_B : 0.5 * cfg.domain_radius;
                sweep = escape_sweep(bs.system(), r_B, cfg.escape.count, cfg.seed, cfg.integrator);
            }
            return analysis_json(bs.system(), rep, sweep);
        },
        py::arg("config"));

    m.def(
        "fixed_points",
        [](const RunConfig& cfg) {
            py::list out;
            for (const auto& fp : build_catalog(BlownSystem(cfg.make_system()), cfg.search).points) {
                out.append(fixed_point_dict(fp));
            }
            return out;
        },
        py::arg("config"));

    m.def(
        "integrate",
        [](const RunConfig& cfg, const Eigen::VectorXd& state, const std::string& frame, std::optional<double> t_max,
           bool backward) {
            IntegratorConfig ic = cfg.integrator;
            if (t_max) ic.t_max = *t_max;
            ic.backward = backward;
            const BlownSystem bs(cfg.make_system());
            const int n = bs.dim();
            if (frame == "original") {
                if (state.size() != 2 * n) throw InputError("original state must hold 2n numbers (x, v)");
                return trajectory_dict(integrate_original(bs.system(), PhaseState::unpack(state, n), ic));
            }
            if (frame == "blown") {
                if (state.size() != 2 * n + 1) throw InputError("blown state must hold 2n+1 numbers (r, q, y)");
                McGeheeState z = McGeheeState::unpack(state, n);
                z.q.normalize();
                return trajectory_dict(integrate_blown(bs, z, ic));
            }
            throw InputError("frame must be 'original' or 'blown'");
        },
        py::arg("config"), py::arg("state"), py::arg("frame") = "original", py::arg("t_max") = py::none(),
        py::arg("backward") = false);

    m.def(
        "escape_sweep",
        [](const RunConfig& cfg, std::optional<int> count) {
            const double r_B = cfg.escape.r_B > 0.0 ? cfg.escape.r_B : 0.5 * cfg.domain_radius;
            return escape_sweep(cfg.make_system(), r_B, count.value_or(cfg.escape.count), cfg.seed, cfg.integrator)
                .times;
        },
        py::arg("config"), py::arg("count") = py::none());

    m.def(
        "verify",
        [](const RunConfig& cfg) {
            VerifyOptions vo;
            vo.seed = cfg.seed;
            vo.integrator = cfg.integrator;
            vo.search = cfg.search;
            py::list out;
            for (const CheckResult& r : run_verify_suite(cfg.make_system(), vo)) {
                py::dict d;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["value"] = r.value;
                d["tolerance"] = r.tolerance;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("config"));

    m.def(
        "hausdorff_distance",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) { return hausdorff_distance(to_cloud(A), to_cloud(B)); },
        py::arg("a"), py::arg("b"), "Hausdorff distance between two point clouds given as rows.");
}
