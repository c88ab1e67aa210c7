#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gridsync/config.hpp"

namespace gridsync {

// 17 significant digits, the serialization precision for all CSV and report
// floats.
std::string fmt17(double v);

// Certificate report for a network file: one line per certificate with lhs,
// rhs, verdict, gamma bracket and margin, plus applicability notes for the
// certificates whose preconditions fail.
void cmd_check(const std::string& network_path, std::ostream& out);

// Trajectory CSV: t,theta_1..theta_n[,dtheta_1..dtheta_n],V,Htheta2 for the
// torus models; grounded / sp_form runs emit delta columns. Angles are
// reduced to [0, 2pi) at this boundary only.
void cmd_simulate(const RunConfig& cfg, std::ostream& out);

// One row per epsilon: epsilon,sup_delta_err,sup_freq_err_tb,asymptotic_decay.
// A fitted log-log slope line is appended when at least two rows have finite
// errors. Rows whose comparison fails carry nan markers; the command still
// succeeds. Row evaluation honors GRIDSYNC_THREADS.
void cmd_sp_sweep(const RunConfig& cfg, const std::vector<double>& eps_list, std::ostream& out);

// Literature comparison CSV over a gamma grid:
// gamma,K_this,K_chopra,K_schmidt,K_geometric.
void cmd_bounds(const std::string& network_path, const std::vector<double>& gamma_grid,
                std::ostream& out);

// Gap-equation solver front end.
void cmd_gamma(double ratio, double phi_max_angle, const std::string& law, std::ostream& out);

// Parses "start:stop:step" into an inclusive grid; an empty grid is valid.
std::vector<double> parse_gamma_grid(const std::string& spec);

// Parses a comma-separated list of positive reals.
std::vector<double> parse_eps_list(const std::string& spec);

} // namespace gridsync
