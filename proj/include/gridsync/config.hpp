#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridsync/dynamics.hpp"
#include "gridsync/network.hpp"

namespace gridsync {

// Minimal TOML-style document: flat `key = value` pairs where a value is a
// number, "string", boolean, [array, ...] (nestable, may span lines) or an
// inline {key = value, ...} table. Exactly what the config files need,
// nothing more.
struct ConfigValue {
    enum class Kind { number, string, boolean, array, table };
    Kind kind = Kind::number;
    double num = 0.0;
    std::string str;
    bool flag = false;
    std::vector<ConfigValue> items;
    std::map<std::string, ConfigValue> fields;
};

using ConfigDoc = std::map<std::string, ConfigValue>;

// Throws ConfigParse with line/field diagnostics.
ConfigDoc parse_config(const std::string& text, const std::string& origin);

// Network file: fields n, D, M (optional), omega, and either dense P / phi
// row arrays or a sparse edges = [{i = .., j = .., p = .., phi = ..}] list
// (1-based indices, auto-symmetrized when symmetric = true). phi entries are
// radians unless degrees = true. The loaded network is validated.
CouplingNetwork load_network(const std::string& path);

struct RunConfig {
    std::string network_path;
    CouplingNetwork net;
    Model model = Model::kuramoto;
    double t_end = 50.0;
    IntegrateOptions opts;
    std::uint64_t seed = 0;

    enum class Init { explicit_values, arc_uniform, two_norm_ball };
    Init init = Init::explicit_values;
    Vec theta0;  // explicit angles (or grounded differences)
    Vec dtheta0; // second-order initial frequencies, zeros when absent
    double gamma = 1.0;  // arc-uniform arc length
    double radius = 1.0; // two-norm ball radius

    std::string output; // empty means stdout
};

// Run file: network = "...", model, t_end, integrator options (method, dt,
// rtol, atol, stride), seed, and an initial-condition spec
// (init = "explicit" | "arc" | "ball" with theta0 / dtheta0 / gamma /
// radius). A relative network path resolves against the run file directory.
RunConfig load_run_config(const std::string& path);

} // namespace gridsync
