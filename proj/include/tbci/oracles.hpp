#pragma once

#include <string>
#include <vector>

#include "tbci/potentials.hpp"

namespace tbci {

// Uniform grid on [-L, L]; M odd so that x = 0 is a node and the diagonal
// x1 = x2 of a 2D grid passes through nodes.
struct Grid {
    double L;
    int M;

    Grid(double L_, int M_);
    double h() const { return 2.0 * L / (M - 1); }
    std::vector<double> points() const;
};

// Grid-sampled symmetric two-particle wavefunction, h^2 sum psi^2 = 1.
struct GridWavefunction2D {
    Grid grid;
    std::vector<double> values;  // M x M row-major
};

struct SingleParticleResult {
    std::vector<double> energies;
    std::vector<double> orbitals;  // n_states x M row-major, grid-normalized
    bool boundary_warning = false; // edge amplitude above 1e-6
};

// Lowest n_states of -(1/2) D2 + diag(V) with Dirichlet boundaries.
SingleParticleResult grid_single_particle(const PotentialSpec& pot,
                                          const Grid& grid, int n_states);

struct ExactHarmonicResult {
    std::vector<double> energies;        // Richardson-extrapolated totals
    std::vector<double> energies_raw;    // same states at the grid's own h
    GridWavefunction2D ground;
};

// Harmonic trap only: separates into center of mass (exact oscillator) and
// relative motion with a delta of strength g/sqrt(2) at r=0, solved by finite
// differences at spacings h, h/2, h/4 and Richardson-extrapolated (the
// on-node delta gives a clean h^2 error, so the three-level formula
// (4B - A)/3 with A = 2E(h/2)-E(h), B = 2E(h/4)-E(h/2) removes h and h^2).
// Only exchange-symmetric (even relative) states are returned.
ExactHarmonicResult harmonic_exact_ground(const PotentialSpec& pot, double g,
                                          const Grid& grid, int n_states);

// Tonks-Girardeau ground state |u0(x1) u1(x2) - u1(x1) u0(x2)| / sqrt(2)
// from the two lowest grid orbitals.
GridWavefunction2D tg_ground(const PotentialSpec& pot, const Grid& grid);

struct KernelOccupancies {
    std::vector<double> lambda;  // descending
    std::vector<double> k;       // signed, ordered with lambda
};

// Natural occupancies of a grid wavefunction: eigenvalues k of the matrix
// h * psi, lambda = k^2 sorted descending. Input must be normalized to 1e-3.
KernelOccupancies kernel_occupancies(const GridWavefunction2D& psi, int n);

struct TwoParticleGridResult {
    std::vector<double> energies;
    std::vector<GridWavefunction2D> states;
    int iterations = 0;
    double max_residual = 0.0;
};

// Lowest bosonic eigenpairs of the M^2 x M^2 operator: 5-point kinetic
// stencil + diag(V(x1)+V(x2)) + g/h on the x1 = x2 nodes. Shift-invert
// Lanczos (sparse Cholesky factorization of H - sigma I, full
// reorthogonalization, exchange-symmetric projection of the Krylov space).
TwoParticleGridResult grid_two_particle(const PotentialSpec& pot, double g,
                                        const Grid& grid, int n_states);

}  // namespace tbci
