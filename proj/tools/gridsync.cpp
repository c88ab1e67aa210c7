// gridsync: synchronization certificates and trajectory simulation for
// coupled-oscillator networks, from the command line.

#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gridsync/commands.hpp"
#include "gridsync/errors.hpp"

namespace {

int run_to_output(const std::string& output, const std::function<void(std::ostream&)>& body) {
    if (output.empty()) {
        body(std::cout);
        return 0;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) {
        std::cerr << "gridsync: cannot open output file '" << output << "'\n";
        return 1;
    }
    body(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synchronization certificates and simulation for coupled oscillator networks"};
    app.require_subcommand(1);

    std::string net_path, run_path, output, eps_spec, gamma_spec, law = "sine";
    double ratio = 0.0, phimax = 0.0;

    auto* check = app.add_subcommand("check", "evaluate every applicable certificate");
    check->add_option("network", net_path, "network config file")->required();
    check->add_option("-o,--output", output, "report file (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "integrate a model and emit a trajectory CSV");
    simulate->add_option("run", run_path, "run config file")->required();
    simulate->add_option("-o,--output", output, "CSV file (overrides the config)");

    auto* sweep = app.add_subcommand("sp-sweep", "singular perturbation error sweep over epsilon");
    sweep->add_option("run", run_path, "run config file")->required();
    sweep->add_option("--eps", eps_spec, "comma separated epsilon list")->required();
    sweep->add_option("-o,--output", output, "CSV file (overrides the config)");

    auto* bounds = app.add_subcommand("bounds", "literature bound comparison over a gamma grid");
    bounds->add_option("network", net_path, "network config file")->required();
    bounds->add_option("--gamma", gamma_spec, "grid start:stop:step")->required();
    bounds->add_option("-o,--output", output, "CSV file (default stdout)");

    auto* gamma = app.add_subcommand("gamma", "solve the gap equations for gamma_min/gamma_max");
    gamma->add_option("--ratio", ratio, "gap ratio in [0,1)")->required();
    gamma->add_option("--phimax", phimax, "maximal phase shift (radians)");
    gamma->add_option("--law", law, "sine or sinc");
    gamma->add_option("-o,--output", output, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return run_to_output(output, [&](std::ostream& o) { gridsync::cmd_check(net_path, o); });
        if (simulate->parsed()) {
            const gridsync::RunConfig cfg = gridsync::load_run_config(run_path);
            const std::string dest = !output.empty() ? output : cfg.output;
            return run_to_output(dest, [&](std::ostream& o) { gridsync::cmd_simulate(cfg, o); });
        }
        if (sweep->parsed()) {
            const gridsync::RunConfig cfg = gridsync::load_run_config(run_path);
            const auto eps = gridsync::parse_eps_list(eps_spec);
            const std::string dest = !output.empty() ? output : cfg.output;
            return run_to_output(dest,
                                 [&](std::ostream& o) { gridsync::cmd_sp_sweep(cfg, eps, o); });
        }
        if (bounds->parsed()) {
            const auto grid = gridsync::parse_gamma_grid(gamma_spec);
            return run_to_output(output,
                                 [&](std::ostream& o) { gridsync::cmd_bounds(net_path, grid, o); });
        }
        if (gamma->parsed())
            return run_to_output(output, [&](std::ostream& o) {
                gridsync::cmd_gamma(ratio, phimax, law, o);
            });
    } catch (const gridsync::Error& e) {
        std::cerr << "gridsync: " << e.what() << "\n";
        return e.is_config_error() ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "gridsync: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
