#include "gridsync/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>

#include "gridsync/analysis.hpp"
#include "gridsync/conditions.hpp"
#include "gridsync/errors.hpp"
#include "gridsync/sampling.hpp"
#include "gridsync/spectral.hpp"

namespace gridsync {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string opt17(const std::optional<double>& v) { return v ? fmt17(*v) : "n/a"; }

void print_report(const ConditionReport& rep, std::ostream& out) {
    out << rep.name << ": holds=" << (rep.holds ? "true" : "false") << " lhs=" << fmt17(rep.lhs)
        << " rhs=" << fmt17(rep.rhs) << " margin=" << fmt17(rep.lhs != 0.0 ? rep.rhs / rep.lhs
                                                                           : std::numeric_limits<double>::infinity())
        << " gamma_min=" << opt17(rep.gamma_min) << " gamma_max=" << opt17(rep.gamma_max);
    if (rep.alpha) out << " alpha=" << fmt17(*rep.alpha);
    if (rep.alpha && rep.gamma_max) out << " region_two_norm=" << fmt17(*rep.alpha * *rep.gamma_max);
    out << "\n";
}

PhaseState initial_phase(const RunConfig& cfg, Rng& rng) {
    switch (cfg.init) {
        case RunConfig::Init::explicit_values: return PhaseState(cfg.theta0);
        case RunConfig::Init::arc_uniform: return sample_arc_uniform(cfg.net.n, cfg.gamma, rng);
        case RunConfig::Init::two_norm_ball:
            return sample_two_norm_ball(cfg.net.n, cfg.radius, rng);
    }
    return PhaseState(cfg.theta0);
}

// grounded / sp_form initial differences
GroundedState initial_grounded(const RunConfig& cfg, Rng& rng) {
    if (cfg.init == RunConfig::Init::explicit_values) return GroundedState{cfg.theta0};
    return grnd(initial_phase(cfg, rng), kPi);
}

std::size_t thread_budget(std::size_t jobs) {
    std::size_t k = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GRIDSYNC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) k = static_cast<std::size_t>(v);
    }
    return std::min(k, jobs);
}

} // namespace

void cmd_check(const std::string& network_path, std::ostream& out) {
    const CouplingNetwork net = load_network(network_path);
    const bool symmetric = is_symmetric(net);
    const bool complete = is_complete(net);
    const bool connected = is_connected(net);
    const bool reachable = has_globally_reachable_node(GraphView::of(net));
    const double pm = phi_max(net);

    out << "network " << network_path << ": n=" << net.n
        << " symmetric=" << (symmetric ? "true" : "false")
        << " complete=" << (complete ? "true" : "false")
        << " connected=" << (connected ? "true" : "false")
        << " globally_reachable=" << (reachable ? "true" : "false") << " phi_max=" << fmt17(pm)
        << "\n";

    if (net.n >= 2 && symmetric && complete) {
        print_report(condition_I(net), out);
        print_report(condition_appendix_pairwise(net), out);
        print_report(condition_appendix_concave(net), out);
        print_report(condition_appendix_pmin(net), out);
    } else {
        const char* why = net.n < 2    ? "single oscillator"
                          : !symmetric ? "coupling not symmetric"
                                       : "graph not complete";
        out << "condition_I: skipped (" << why << ")\n";
        out << "condition_appendix_pairwise: skipped (" << why << ")\n";
        out << "condition_appendix_concave: skipped (" << why << ")\n";
        out << "condition_appendix_pmin: skipped (" << why << ")\n";
    }

    if (net.n >= 2 && symmetric && connected) {
        const ConditionReport rep = condition_II(net);
        print_report(rep, out);
        if (pm == 0.0 && rep.holds && rep.gamma_min) {
            out << "rate_lambda_fe(gamma_min)=" << fmt17(rate_lambda_fe(net, *rep.gamma_min))
                << " rate_lambda_ps(gamma_min)=" << fmt17(rate_lambda_ps(net, *rep.gamma_min))
                << " sync_frequency=" << fmt17(sync_frequency_omega(net)) << "\n";
        }
    } else {
        out << "condition_II: skipped ("
            << (net.n < 2      ? "single oscillator"
                : !symmetric   ? "coupling not symmetric"
                               : "graph not connected")
            << ")\n";
    }

    const NecessaryReport nec = necessary_condition(net);
    std::size_t blocked = 0;
    for (const auto& p : nec.pairs) blocked += p.blocked ? 1 : 0;
    out << "necessary_condition: blocked_pairs=" << blocked << "\n";
    for (const auto& p : nec.pairs)
        if (p.blocked)
            out << "  blocked pair (" << (p.i + 1) << "," << (p.j + 1) << "): mismatch="
                << fmt17(p.lhs) << " coupling=" << fmt17(p.rhs) << "\n";
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    Rng rng(cfg.seed);
    Trajectory traj;
    switch (cfg.model) {
        case Model::kuramoto:
            traj = integrate_kuramoto(cfg.net, initial_phase(cfg, rng), cfg.t_end, cfg.opts);
            break;
        case Model::swing:
            traj = integrate_swing(cfg.net, initial_phase(cfg, rng), cfg.dtheta0, cfg.t_end,
                                   cfg.opts);
            break;
        case Model::grounded:
            traj = integrate_grounded(cfg.net, initial_grounded(cfg, rng), cfg.t_end, cfg.opts);
            break;
        case Model::sp_form:
            traj = integrate_sp_form(cfg.net, initial_grounded(cfg, rng), cfg.dtheta0, cfg.t_end,
                                     cfg.opts);
            break;
    }

    const bool torus_state = cfg.model == Model::kuramoto || cfg.model == Model::swing;
    const std::size_t n_angles = traj.angles.front().size();

    out << "t";
    for (std::size_t i = 1; i <= n_angles; ++i)
        out << "," << (torus_state ? "theta_" : "delta_") << i;
    if (!traj.freqs.empty())
        for (std::size_t i = 1; i <= cfg.net.n; ++i) out << ",dtheta_" << i;
    out << ",V,Htheta2\n";

    for (std::size_t k = 0; k < traj.samples(); ++k) {
        out << fmt17(traj.times[k]);
        Vec full = traj.angles[k];
        for (double a : full) out << "," << fmt17(torus_state ? wrap_2pi(a) : a);
        if (!traj.freqs.empty())
            for (double f : traj.freqs[k]) out << "," << fmt17(f);
        if (!torus_state) full.push_back(0.0);
        const auto v = arc_length_V(full);
        const auto h2 = try_two_norm(full);
        out << "," << fmt17(v ? *v : std::numeric_limits<double>::quiet_NaN());
        out << "," << fmt17(h2 ? *h2 : std::numeric_limits<double>::quiet_NaN()) << "\n";
    }
}

void cmd_sp_sweep(const RunConfig& cfg, const std::vector<double>& eps_list, std::ostream& out) {
    if (!cfg.net.inertia) fail(Errc::missing_inertia, "sp-sweep needs a network with inertia M");

    struct Row {
        double eps = 0.0;
        bool ok = false;
        double sup_delta = 0.0, sup_freq = 0.0;
        bool decay = false;
        std::string warning;
    };
    std::vector<Row> rows(eps_list.size());

    const double d_min = *std::min_element(cfg.net.damping.begin(), cfg.net.damping.end());
    const double m_max = *std::max_element(cfg.net.inertia->begin(), cfg.net.inertia->end());

    auto eval_row = [&](std::size_t idx) {
        Row& row = rows[idx];
        row.eps = eps_list[idx];
        CouplingNetwork net = cfg.net;
        const double scale = row.eps * d_min / m_max;
        for (double& m : *net.inertia) m *= scale;
        try {
            Rng rng(cfg.seed); // same seed per row: rows differ only in epsilon
            RunConfig local = cfg;
            local.net = net;
            // explicit grounded coordinates are represented as (delta, 0)
            PhaseState theta0;
            if (cfg.init == RunConfig::Init::explicit_values &&
                (cfg.model == Model::grounded || cfg.model == Model::sp_form)) {
                Vec angles = cfg.theta0;
                angles.push_back(0.0);
                theta0 = PhaseState(std::move(angles));
            } else {
                theta0 = initial_phase(local, rng);
            }
            Vec dtheta0 = cfg.dtheta0;
            if (dtheta0.empty()) dtheta0.assign(net.n, 0.0);
            const SpComparison cmp = sp_compare(net, theta0, dtheta0, cfg.t_end);
            row.ok = true;
            row.sup_delta = cmp.sup_delta_error;
            row.sup_freq = cmp.sup_freq_error_after_tb;
            row.decay = check_asymptotic_error_decay(cmp);
        } catch (const Error& e) {
            row.warning = e.what();
        }
    };

    const std::size_t workers = thread_budget(eps_list.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < eps_list.size(); ++i) eval_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < eps_list.size();
                     i = next.fetch_add(1))
                    eval_row(i);
            });
        for (auto& t : pool) t.join();
    }

    out << "epsilon,sup_delta_err,sup_freq_err_tb,asymptotic_decay\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const Row& row : rows) {
        out << fmt17(row.eps) << "," << fmt17(row.ok ? row.sup_delta : nan) << ","
            << fmt17(row.ok ? row.sup_freq : nan) << "," << (row.ok && row.decay ? 1 : 0) << "\n";
    }

    // log-log slope of sup delta error against epsilon, the empirical order
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (const Row& row : rows) {
        if (!row.ok || !(row.sup_delta > 0.0)) continue;
        const double x = std::log(row.eps), y = std::log(row.sup_delta);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) {
        const double slope =
            (static_cast<double>(cnt) * sxy - sx * sy) / (static_cast<double>(cnt) * sxx - sx * sx);
        out << "# loglog_slope=" << fmt17(slope) << "\n";
    }
}

void cmd_bounds(const std::string& network_path, const std::vector<double>& gamma_grid,
                std::ostream& out) {
    const CouplingNetwork net = load_network(network_path);
    if (net.n < 3) fail(Errc::n_too_small, "the n/(n-2) comparison bound needs n >= 3");
    out << "gamma,K_this,K_chopra,K_schmidt,K_geometric\n";
    for (double g : gamma_grid) {
        const LiteratureBounds b = literature_bounds(net.natural_freq, g, net.n);
        out << fmt17(g) << "," << fmt17(b.this_paper) << "," << fmt17(b.chopra) << ","
            << fmt17(b.schmidt) << "," << fmt17(b.geometric) << "\n";
    }
}

void cmd_gamma(double ratio, double phi_max_angle, const std::string& law, std::ostream& out) {
    GammaLaw gl;
    if (law == "sine")
        gl = GammaLaw::sine;
    else if (law == "sinc")
        gl = GammaLaw::sinc;
    else
        fail(Errc::config_parse, "law must be 'sine' or 'sinc'");
    const GammaPair g = solve_gamma(ratio, phi_max_angle, gl);
    out << "gamma_min=" << fmt17(g.gamma_min) << "\n";
    out << "gamma_max=" << fmt17(g.gamma_max) << "\n";
}

std::vector<double> parse_gamma_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || !(step > 0.0))
        fail(Errc::config_parse, "gamma grid must be start:stop:step with positive step");
    std::vector<double> grid;
    for (double g = start; g <= stop + 1e-12; g += step) grid.push_back(g);
    return grid;
}

std::vector<double> parse_eps_list(const std::string& spec) {
    std::vector<double> eps;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string tok = spec.substr(pos, comma - pos);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || tok.empty() || !(v > 0.0))
            fail(Errc::config_parse, "epsilon list must contain positive numbers");
        eps.push_back(v);
        pos = comma + 1;
    }
    if (eps.empty()) fail(Errc::config_parse, "epsilon list is empty");
    return eps;
}

} // namespace gridsync
