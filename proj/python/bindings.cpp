#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridsync/analysis.hpp"
#include "gridsync/conditions.hpp"
#include "gridsync/config.hpp"
#include "gridsync/dynamics.hpp"
#include "gridsync/errors.hpp"
#include "gridsync/network.hpp"
#include "gridsync/sampling.hpp"
#include "gridsync/spectral.hpp"

namespace py = pybind11;
using namespace gridsync;

namespace {

Mat mat_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw py::value_error("expected a square 2-D array");
    const std::size_t n = static_cast<std::size_t>(a.shape(0));
    Mat m(n, n, 0.0);
    auto r = a.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = r(i, j);
    return m;
}

py::array_t<double> numpy_from_rows(const std::vector<Vec>& rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows[0].size() : 0;
    py::array_t<double> out({m, n});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = rows[i][j];
    return out;
}

CouplingNetwork make_network(const Vec& damping, const Vec& omega, py::array P, py::array phi,
                             std::optional<Vec> inertia) {
    CouplingNetwork net;
    net.n = damping.size();
    net.damping = damping;
    net.natural_freq = omega;
    net.inertia = std::move(inertia);
    net.coupling = mat_from_numpy(P);
    net.phase_shift = mat_from_numpy(phi);
    validate(net);
    return net;
}

IntegrateOptions options_from_kwargs(const std::string& method, double dt, double rtol, double atol,
                                     std::size_t stride) {
    IntegrateOptions opts;
    if (method == "rk4")
        opts.method = StepMethod::rk4;
    else if (method == "rk45")
        opts.method = StepMethod::rk45;
    else
        throw py::value_error("method must be 'rk4' or 'rk45'");
    opts.dt = dt;
    opts.rtol = rtol;
    opts.atol = atol;
    opts.stride = stride;
    return opts;
}

py::dict report_to_dict(const ConditionReport& rep) {
    py::dict d;
    d["name"] = rep.name;
    d["lhs"] = rep.lhs;
    d["rhs"] = rep.rhs;
    d["holds"] = rep.holds;
    d["gamma_min"] = rep.gamma_min ? py::cast(*rep.gamma_min) : py::none();
    d["gamma_max"] = rep.gamma_max ? py::cast(*rep.gamma_max) : py::none();
    d["alpha"] = rep.alpha ? py::cast(*rep.alpha) : py::none();
    py::list pairs;
    for (const auto& pc : rep.details) {
        py::dict p;
        p["m"] = pc.m;
        p["l"] = pc.l;
        p["lhs"] = pc.lhs;
        p["rhs"] = pc.rhs;
        p["holds"] = pc.holds;
        pairs.append(p);
    }
    d["details"] = pairs;
    return d;
}

py::dict trajectory_to_dict(const Trajectory& traj) {
    py::dict d;
    d["times"] = py::array_t<double>(static_cast<py::ssize_t>(traj.times.size()),
                                     traj.times.data());
    d["states"] = numpy_from_rows(traj.angles);
    if (!traj.freqs.empty()) d["freqs"] = numpy_from_rows(traj.freqs);
    return d;
}

} // namespace

PYBIND11_MODULE(_gridsync, m) {
    m.doc() = "Synchronization certificates and simulation for coupled oscillator networks";

    py::register_exception<Error>(m, "GridsyncError");

    py::class_<CouplingNetwork>(m, "Network")
        .def(py::init(&make_network), py::arg("damping"), py::arg("omega"), py::arg("coupling"),
             py::arg("phase_shift"), py::arg("inertia") = py::none())
        .def_static("classic_kuramoto", &CouplingNetwork::classic_kuramoto, py::arg("omega"),
                    py::arg("coupling_gain"))
        .def_property_readonly("n", [](const CouplingNetwork& net) { return net.n; })
        .def_property_readonly("damping", [](const CouplingNetwork& net) { return net.damping; })
        .def_property_readonly("omega",
                               [](const CouplingNetwork& net) { return net.natural_freq; })
        .def("is_symmetric", &is_symmetric)
        .def("is_complete", &is_complete)
        .def("is_connected", &is_connected)
        .def("phi_max", &phi_max)
        .def("has_globally_reachable_node",
             [](const CouplingNetwork& net) {
                 return has_globally_reachable_node(GraphView::of(net));
             });

    m.def("load_network", &load_network, py::arg("path"));

    m.def("condition_i", [](const CouplingNetwork& n) { return report_to_dict(condition_I(n)); });
    m.def("condition_ii", [](const CouplingNetwork& n) { return report_to_dict(condition_II(n)); });
    m.def("condition_appendix_pairwise",
          [](const CouplingNetwork& n) { return report_to_dict(condition_appendix_pairwise(n)); });
    m.def("condition_appendix_concave",
          [](const CouplingNetwork& n) { return report_to_dict(condition_appendix_concave(n)); });
    m.def("condition_appendix_pmin",
          [](const CouplingNetwork& n) { return report_to_dict(condition_appendix_pmin(n)); });

    m.def("necessary_condition", [](const CouplingNetwork& n) {
        py::list out;
        for (const auto& p : necessary_condition(n).pairs) {
            py::dict d;
            d["i"] = p.i;
            d["j"] = p.j;
            d["lhs"] = p.lhs;
            d["rhs"] = p.rhs;
            d["blocked"] = p.blocked;
            out.append(d);
        }
        return out;
    });

    m.def("solve_gamma", [](double ratio, double phi_max_angle, const std::string& law) {
        const GammaPair g = solve_gamma(ratio, phi_max_angle,
                                        law == "sinc" ? GammaLaw::sinc : GammaLaw::sine);
        return py::make_tuple(g.gamma_min, g.gamma_max);
    }, py::arg("ratio"), py::arg("phi_max") = 0.0, py::arg("law") = "sine");

    m.def("classic_k_critical", &classic_K_critical);
    m.def("classic_k_of_gamma", &classic_K_of_gamma);
    m.def("literature_bounds", [](const Vec& omega, double gamma, std::size_t n) {
        const LiteratureBounds b = literature_bounds(omega, gamma, n);
        py::dict d;
        d["this_paper"] = b.this_paper;
        d["chopra"] = b.chopra;
        d["schmidt"] = b.schmidt;
        d["geometric"] = b.geometric;
        return d;
    });

    m.def("rate_lambda_fe", &rate_lambda_fe);
    m.def("rate_lambda_ps", &rate_lambda_ps);
    m.def("sync_frequency_omega", &sync_frequency_omega);
    m.def("weighted_mean_angle", [](const CouplingNetwork& net, const Vec& theta) {
        return weighted_mean_angle(net, PhaseState(theta));
    });

    m.def("lambda2", [](py::array weights) { return lambda2_of_weights(mat_from_numpy(weights)); });
    m.def("laplacian", [](py::array weights) {
        const Laplacian lap = laplacian(mat_from_numpy(weights));
        const std::size_t n = lap.n();
        py::array_t<double> out({n, n});
        auto w = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w(i, j) = lap.matrix(i, j);
        return out;
    });
    m.def("dihedral_cos", &dihedral_cos);

    m.def("arc_length", [](const Vec& theta) -> py::object {
        auto v = arc_length_V(theta);
        return v ? py::cast(*v) : py::none();
    });
    m.def("cohesiveness_norms", [](const Vec& theta) {
        const CohesivenessNorms cn = cohesiveness_norms(theta);
        return py::make_tuple(cn.inf_norm, cn.two_norm);
    });
    m.def("grnd", [](const Vec& theta, double gamma) {
        return grnd(PhaseState(theta), gamma).delta;
    }, py::arg("theta"), py::arg("gamma") = kPi);

    m.def("power_flow", &power_flow_Q);
    m.def("rhs_kuramoto", &rhs_nonuniform_kuramoto);
    m.def("rhs_swing", &rhs_swing);
    m.def("rhs_grounded", &rhs_grounded);

    m.def("simulate",
          [](const CouplingNetwork& net, const std::string& model, const Vec& state0,
             const Vec& dtheta0, double t_end, const std::string& method, double dt, double rtol,
             double atol, std::size_t stride) {
              const IntegrateOptions opts = options_from_kwargs(method, dt, rtol, atol, stride);
              Vec freqs0 = dtheta0;
              if (freqs0.empty()) freqs0.assign(net.n, 0.0);
              Trajectory traj;
              if (model == "kuramoto")
                  traj = integrate_kuramoto(net, PhaseState(state0), t_end, opts);
              else if (model == "swing")
                  traj = integrate_swing(net, PhaseState(state0), freqs0, t_end, opts);
              else if (model == "grounded")
                  traj = integrate_grounded(net, GroundedState{state0}, t_end, opts);
              else if (model == "sp_form")
                  traj = integrate_sp_form(net, GroundedState{state0}, freqs0, t_end, opts);
              else
                  throw py::value_error("model must be kuramoto, swing, grounded or sp_form");
              return trajectory_to_dict(traj);
          },
          py::arg("net"), py::arg("model"), py::arg("state0"), py::arg("dtheta0") = Vec{},
          py::arg("t_end") = 50.0, py::arg("method") = "rk4", py::arg("dt") = 0.01,
          py::arg("rtol") = 1e-9, py::arg("atol") = 1e-11, py::arg("stride") = 1);

    m.def("detect_frequency_sync",
          [](const CouplingNetwork& net, const std::string& model, const Vec& state0,
             const Vec& dtheta0, double t_end, double tol) {
              IntegrateOptions opts;
              Vec freqs0 = dtheta0;
              if (freqs0.empty()) freqs0.assign(net.n, 0.0);
              Trajectory traj;
              if (model == "kuramoto")
                  traj = integrate_kuramoto(net, PhaseState(state0), t_end, opts);
              else
                  traj = integrate_swing(net, PhaseState(state0), freqs0, t_end, opts);
              const SyncVerdict v = detect_frequency_sync(net, traj, tol);
              py::dict d;
              d["frequency_synced"] = v.frequency_synced;
              d["sync_frequency"] = v.sync_frequency;
              d["rate_fit"] = v.rate_fit ? py::cast(*v.rate_fit) : py::none();
              d["settled_at"] = v.settled_at ? py::cast(*v.settled_at) : py::none();
              d["containment_warning"] = v.containment_warning;
              return d;
          },
          py::arg("net"), py::arg("model"), py::arg("state0"), py::arg("dtheta0") = Vec{},
          py::arg("t_end") = 50.0, py::arg("tol") = 1e-6);

    m.def("sp_compare",
          [](const CouplingNetwork& net, const Vec& theta0, const Vec& dtheta0, double t_end) {
              const SpComparison cmp = sp_compare(net, PhaseState(theta0), dtheta0, t_end);
              py::dict d;
              d["epsilon"] = cmp.epsilon;
              d["t_b"] = cmp.t_b;
              d["sup_delta_error"] = cmp.sup_delta_error;
              d["sup_freq_error_after_tb"] = cmp.sup_freq_error_after_tb;
              d["asymptotic_decay"] = check_asymptotic_error_decay(cmp);
              return d;
          },
          py::arg("net"), py::arg("theta0"), py::arg("dtheta0"), py::arg("t_end") = 50.0);

    m.def("sample_arc_uniform", [](std::size_t n, double arc, std::uint64_t seed) {
        Rng rng(seed);
        return sample_arc_uniform(n, arc, rng).angles();
    });
    m.def("sample_two_norm_ball", [](std::size_t n, double radius, std::uint64_t seed) {
        Rng rng(seed);
        return sample_two_norm_ball(n, radius, rng).angles();
    });
}
