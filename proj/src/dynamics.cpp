#include "gridsync/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gridsync/errors.hpp"

namespace gridsync {

namespace {

// q[i] = omega_i - sum_j P_ij sin(th[i] - th[j] + phi_ij), ascending j.
void power_flow_into(const CouplingNetwork& net, const double* th, double* q) {
    const std::size_t n = net.n;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double p = net.coupling(i, j);
            if (p == 0.0) continue;
            s += p * std::sin(th[i] - th[j] + net.phase_shift(i, j));
        }
        q[i] = net.natural_freq[i] - s;
    }
}

} // namespace

Vec power_flow_Q(const CouplingNetwork& net, const Vec& theta) {
    Vec q(net.n, 0.0);
    power_flow_into(net, theta.data(), q.data());
    return q;
}

Vec rhs_nonuniform_kuramoto(const CouplingNetwork& net, const Vec& theta) {
    Vec out = power_flow_Q(net, theta);
    for (std::size_t i = 0; i < net.n; ++i) out[i] /= net.damping[i];
    return out;
}

Vec rhs_swing(const CouplingNetwork& net, const Vec& theta, const Vec& dtheta) {
    if (!net.inertia) fail(Errc::missing_inertia, "swing model needs inertia M");
    Vec out = power_flow_Q(net, theta);
    for (std::size_t i = 0; i < net.n; ++i)
        out[i] = (-net.damping[i] * dtheta[i] + out[i]) / (*net.inertia)[i];
    return out;
}

Vec rhs_grounded(const CouplingNetwork& net, const Vec& delta) {
    const std::size_t n = net.n;
    const std::size_t g = n - 1; // grounded oscillator
    Vec out(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double v = net.natural_freq[i] / net.damping[i] - net.natural_freq[g] / net.damping[g];
        for (std::size_t j = 0; j + 1 < n; ++j) {
            if (j == i) continue;
            v -= net.coupling(i, j) / net.damping[i] *
                 std::sin(delta[i] - delta[j] + net.phase_shift(i, j));
            v -= net.coupling(g, j) / net.damping[g] * std::sin(delta[j] - net.phase_shift(j, g));
        }
        v -= net.coupling(i, g) / net.damping[i] * std::sin(delta[i] + net.phase_shift(i, g));
        v -= net.coupling(i, g) / net.damping[g] * std::sin(delta[i] - net.phase_shift(i, g));
        out[i] = v;
    }
    return out;
}

SpScaling sp_scaling(const CouplingNetwork& net) {
    if (!net.inertia) fail(Errc::missing_inertia, "singular perturbation form needs inertia M");
    double m_max = 0.0, d_min = net.damping[0];
    for (std::size_t i = 0; i < net.n; ++i) {
        m_max = std::max(m_max, (*net.inertia)[i]);
        d_min = std::min(d_min, net.damping[i]);
    }
    SpScaling s;
    s.epsilon = m_max / d_min;
    s.f.resize(net.n);
    for (std::size_t i = 0; i < net.n; ++i)
        s.f[i] = (net.damping[i] / d_min) / ((*net.inertia)[i] / m_max);
    return s;
}

std::pair<Vec, Vec> rhs_sp_form(const CouplingNetwork& net, const Vec& delta, const Vec& dtheta) {
    const SpScaling s = sp_scaling(net);
    const std::size_t n = net.n;
    Vec ddelta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) ddelta[i] = dtheta[i] - dtheta[n - 1];

    Vec angles(delta);
    angles.push_back(0.0); // delta_n := 0
    Vec q(n);
    power_flow_into(net, angles.data(), q.data());
    Vec ddtheta(n);
    for (std::size_t i = 0; i < n; ++i)
        ddtheta[i] = (-s.f[i] * dtheta[i] + s.f[i] / net.damping[i] * q[i]) / s.epsilon;
    return {std::move(ddelta), std::move(ddtheta)};
}

GroundedState grnd(const PhaseState& theta, double gamma) {
    auto arc = min_enclosing_arc(theta.angles());
    if (!arc || !(arc->length < gamma))
        fail(Errc::not_phase_cohesive, "grnd requires theta in Delta(gamma)");
    const Vec lifted = lift_to_arc(theta.angles(), *arc);
    const std::size_t n = theta.size();
    GroundedState out;
    out.delta.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) out.delta[i] = lifted[i] - lifted[n - 1];
    return out;
}

namespace {

using RhsFn = std::function<void(const Vec&, Vec&)>;
using StoreFn = std::function<void(double, const Vec&)>;

void check_finite(const Vec& y, double t) {
    for (double v : y)
        if (!std::isfinite(v))
            fail(Errc::non_finite_state, "state became non-finite at t = " + std::to_string(t));
}

// Classical RK4 with a fixed step; the last step is shortened to land
// exactly on t_end.
void rk4_run(const RhsFn& rhs, Vec y, double t_end, const IntegrateOptions& opts,
             const StoreFn& store) {
    const std::size_t dim = y.size();
    Vec k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    double t = 0.0;
    const double t_edge = t_end - 1e-12 * std::max(1.0, t_end);
    store(t, y);
    std::size_t step = 0;
    while (t < t_edge) {
        const double h = std::min(opts.dt, t_end - t);
        rhs(y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
        ++step;
        check_finite(y, t);
        if (step % opts.stride == 0 || t >= t_edge) store(t, y);
    }
}

// Dormand-Prince 5(4), FSAL, with standard step-size control.
void rk45_run(const RhsFn& rhs, Vec y, double t_end, const IntegrateOptions& opts,
              const StoreFn& store) {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    const std::size_t dim = y.size();
    Vec k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim), ynew(dim);
    double t = 0.0;
    double h = std::min(opts.dt, t_end);
    const double h_floor = 1e-14 * t_end;
    const double t_edge = t_end - 1e-12 * std::max(1.0, t_end);
    store(t, y);
    std::size_t accepted = 0;
    bool have_k1 = false;

    while (t < t_edge) {
        if (h < h_floor)
            fail(Errc::step_underflow, "adaptive step underflow at t = " + std::to_string(t));
        h = std::min(h, t_end - t);

        if (!have_k1) rhs(y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(tmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(tmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(tmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(tmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(ynew, k7); // FSAL

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(dim));

        if (!std::isfinite(err)) { // non-finite stage values poison the estimate
            have_k1 = false;
            h *= 0.2;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            std::swap(y, ynew);
            std::swap(k1, k7);
            have_k1 = true;
            ++accepted;
            check_finite(y, t);
            if (accepted % opts.stride == 0 || t >= t_edge) store(t, y);
        } else {
            have_k1 = false;
        }
        const double fac = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
}

void run(const RhsFn& rhs, Vec y0, double t_end, const IntegrateOptions& opts,
         const StoreFn& store) {
    if (!(t_end > 0.0)) fail(Errc::config_parse, "t_end must be positive");
    if (opts.method == StepMethod::rk4)
        rk4_run(rhs, std::move(y0), t_end, opts, store);
    else
        rk45_run(rhs, std::move(y0), t_end, opts, store);
}

} // namespace

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        fail(Errc::shape_mismatch, std::string(what) + " has " + std::to_string(got) +
                                       " entries, expected " + std::to_string(want));
}

} // namespace

Trajectory integrate_kuramoto(const CouplingNetwork& net, const PhaseState& theta0, double t_end,
                              const IntegrateOptions& opts) {
    require_size(theta0.size(), net.n, "initial phase state");
    Trajectory traj;
    traj.model = Model::kuramoto;
    traj.n = net.n;
    traj.opts = opts;
    RhsFn rhs = [&net](const Vec& y, Vec& dy) {
        power_flow_into(net, y.data(), dy.data());
        for (std::size_t i = 0; i < net.n; ++i) dy[i] /= net.damping[i];
    };
    run(rhs, theta0.angles(), t_end, opts, [&](double t, const Vec& y) {
        traj.times.push_back(t);
        traj.angles.push_back(y);
    });
    return traj;
}

Trajectory integrate_swing(const CouplingNetwork& net, const PhaseState& theta0, const Vec& dtheta0,
                           double t_end, const IntegrateOptions& opts) {
    if (!net.inertia) fail(Errc::missing_inertia, "swing model needs inertia M");
    require_size(theta0.size(), net.n, "initial phase state");
    require_size(dtheta0.size(), net.n, "initial frequency vector");
    const std::size_t n = net.n;
    Trajectory traj;
    traj.model = Model::swing;
    traj.n = n;
    traj.opts = opts;
    Vec y0(2 * n);
    std::copy(theta0.angles().begin(), theta0.angles().end(), y0.begin());
    std::copy(dtheta0.begin(), dtheta0.end(), y0.begin() + static_cast<std::ptrdiff_t>(n));
    const Vec& m = *net.inertia;
    RhsFn rhs = [&net, &m, n](const Vec& y, Vec& dy) {
        const double* th = y.data();
        const double* dth = y.data() + n;
        power_flow_into(net, th, dy.data() + n);
        for (std::size_t i = 0; i < n; ++i) {
            dy[i] = dth[i];
            dy[n + i] = (-net.damping[i] * dth[i] + dy[n + i]) / m[i];
        }
    };
    run(rhs, std::move(y0), t_end, opts, [&](double t, const Vec& y) {
        traj.times.push_back(t);
        traj.angles.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
        traj.freqs.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
    });
    return traj;
}

Trajectory integrate_grounded(const CouplingNetwork& net, const GroundedState& delta0, double t_end,
                              const IntegrateOptions& opts) {
    require_size(delta0.delta.size(), net.n - 1, "grounded state");
    Trajectory traj;
    traj.model = Model::grounded;
    traj.n = net.n;
    traj.opts = opts;
    const std::size_t n = net.n;
    const std::size_t g = n - 1;
    RhsFn rhs = [&net, n, g](const Vec& delta, Vec& out) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double v = net.natural_freq[i] / net.damping[i] - net.natural_freq[g] / net.damping[g];
            for (std::size_t j = 0; j + 1 < n; ++j) {
                if (j == i) continue;
                v -= net.coupling(i, j) / net.damping[i] *
                     std::sin(delta[i] - delta[j] + net.phase_shift(i, j));
                v -= net.coupling(g, j) / net.damping[g] *
                     std::sin(delta[j] - net.phase_shift(j, g));
            }
            v -= net.coupling(i, g) / net.damping[i] * std::sin(delta[i] + net.phase_shift(i, g));
            v -= net.coupling(i, g) / net.damping[g] * std::sin(delta[i] - net.phase_shift(i, g));
            out[i] = v;
        }
    };
    run(rhs, delta0.delta, t_end, opts, [&](double t, const Vec& y) {
        traj.times.push_back(t);
        traj.angles.push_back(y);
    });
    return traj;
}

Trajectory integrate_sp_form(const CouplingNetwork& net, const GroundedState& delta0,
                             const Vec& dtheta0, double t_end, const IntegrateOptions& opts) {
    require_size(delta0.delta.size(), net.n - 1, "grounded state");
    require_size(dtheta0.size(), net.n, "initial frequency vector");
    const std::size_t n = net.n;
    const SpScaling scal = sp_scaling(net);
    Trajectory traj;
    traj.model = Model::sp_form;
    traj.n = n;
    traj.opts = opts;
    Vec y0(2 * n - 1);
    std::copy(delta0.delta.begin(), delta0.delta.end(), y0.begin());
    std::copy(dtheta0.begin(), dtheta0.end(), y0.begin() + static_cast<std::ptrdiff_t>(n - 1));
    Vec angles(n, 0.0), q(n, 0.0);
    RhsFn rhs = [&net, scal, n, angles, q](const Vec& y, Vec& dy) mutable {
        const double* delta = y.data();
        const double* dth = y.data() + (n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = dth[i] - dth[n - 1];
        std::copy(delta, delta + (n - 1), angles.begin());
        angles[n - 1] = 0.0;
        power_flow_into(net, angles.data(), q.data());
        for (std::size_t i = 0; i < n; ++i)
            dy[n - 1 + i] =
                (-scal.f[i] * dth[i] + scal.f[i] / net.damping[i] * q[i]) / scal.epsilon;
    };
    run(rhs, std::move(y0), t_end, opts, [&](double t, const Vec& y) {
        traj.times.push_back(t);
        traj.angles.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n - 1));
        traj.freqs.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(n - 1), y.end());
    });
    return traj;
}

} // namespace gridsync
