#pragma once

#include <vector>

#include "tbci/hamiltonian.hpp"

namespace tbci {

struct OmegaSearchConfig {
    double omega_lo = 1e-3;
    double omega_hi = 1e3;
    double rel_tol = 1e-8;
    int max_iter = 200;
    int scan_points = 41;  // log-spaced pre-scan to bracket the minimum
};

struct OmegaResult {
    double omega;
    double trace;
    int iterations;
};

struct SpectrumResult {
    double omega;
    int K;
    int D;
    std::vector<double> energies;  // ascending, n_states of them
    // Pair-basis eigenvectors, one length-D vector per state (unit norm,
    // sign fixed so the largest-magnitude component is positive).
    std::vector<std::vector<double>> vectors;
    double trace = 0.0;
    int omega_iterations = 0;

    // CI coefficients a_ij of state s as a full symmetric K x K matrix
    // (a_ij = a_ji = pair component of {i,j}).
    std::vector<double> coefficient_matrix(int s) const;
};

// Minimize trace_of_truncation over omega (the stationarity condition for the
// truncated trace). Golden-section on log(omega) after a log-spaced bracket
// scan; a monotone scan (no interior minimum) raises ConfigError with trace
// samples in the message.
OmegaResult optimize_omega(const ProblemSpec& problem,
                           const OmegaSearchConfig& config = {});

// Lowest n_states eigenpairs of the assembled pair matrix (LAPACK dsyevr).
SpectrumResult diagonalize(const ProblemSpec& problem, double omega, int n_states);

// optimize_omega followed by diagonalize.
SpectrumResult solve(const ProblemSpec& problem, int n_states,
                     const OmegaSearchConfig& config = {});

}  // namespace tbci
