#pragma once

#include <string>
#include <vector>

#include "tbci/potentials.hpp"
#include "tbci/solver.hpp"

namespace tbci {

// Shared configuration for all subcommands; parsed from flags and/or a
// key=value config file (flags win on conflict).
struct RunConfig {
    // trap
    std::string potential = "harmonic";  // harmonic | double_well | triple_well | poly
    double a = 0.025;
    std::vector<double> coeffs;          // explicit list for potential=poly

    // interaction: single g for solve/density/orbitals/oracle,
    // range for sweep/crossover
    double g = 0.0;
    double g_min = 0.0;
    double g_max = 0.0;
    int g_points = 0;
    bool log_spacing = false;

    // basis and states
    int K = 40;
    int n_states = 4;
    std::string omega_mode = "auto";     // auto | fixed
    double omega_value = 1.0;

    // grid overrides (0 means module default)
    double grid_L = 0.0;
    int grid_M = 0;
    int density_points = 401;

    // crossover
    double threshold = 0.05;

    // oracle selection: tg | exact-harmonic | grid1d | grid2d
    std::string oracle_type = "tg";

    // output
    std::string out_dir = ".";
    std::string format = "csv";          // csv | json
    int workers = 0;                     // 0 = OpenMP default
    int n_orbitals = 4;
};

void validate(const RunConfig& config);
PotentialSpec potential_from(const RunConfig& config);

struct RunOutput {
    std::vector<std::string> files;
};

struct CrossoverResult {
    double g_cr;
    double g_lo, g_hi;    // final bracket
    double d_lo, d_hi;    // lambda_0 - lambda_1 at the bracket ends
    int iterations;
};

RunOutput run_solve(const RunConfig& config);
RunOutput run_sweep(const RunConfig& config);
CrossoverResult run_crossover(const RunConfig& config, RunOutput* out = nullptr);
RunOutput run_density(const RunConfig& config);
RunOutput run_orbitals(const RunConfig& config);
RunOutput run_oracle(const RunConfig& config);

}  // namespace tbci
