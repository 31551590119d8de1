#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopsym/geometry.hpp"

namespace loopsym::cli {

/// Everything a command needs: the input (component file path or the
/// built-in oracle), the sampling chart for oracle input, locus parameters
/// for the sweep, the Sym step, tolerances and the output directory.
struct RunConfig {
    std::string input = "oracle";
    double oracle_c = 1.0;
    double u_min = -1.0, u_max = 1.0, v_min = -1.0, v_max = 1.0;
    int n_u = 65, n_v = 65;
    std::vector<double> lambda_params;               // t (iR*, R*) or phi (S^1)
    std::vector<cd> lambda_raw;                      // raw values, validated per locus
    double dstep = 1e-4;
    std::map<std::string, double> tolerances;        // overrides by report name
    std::string output_dir = ".";

    void validate() const;
};

/// Parse the flat `key = value` config format ('#' starts a comment).
RunConfig load_config(const std::string& path);

/// Default tolerance for a report line; the h^2-scaled defaults take the
/// current grid spacing.
double default_tolerance(const std::string& name, double h);
double tolerance_for(const RunConfig& cfg, const std::string& name, double h);

int cmd_verify(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_sym(const RunConfig& cfg);
int cmd_transfer(const RunConfig& cfg);
int cmd_oracle_selftest(const RunConfig& cfg);

/// Full argv entry point (subcommands verify|sweep|sym|transfer|oracle-selftest).
int run(int argc, const char* const* argv);

}  // namespace loopsym::cli
