#pragma once

#include <vector>

#include "tbci/potentials.hpp"

namespace tbci {

// Harmonic-oscillator basis phi_0..phi_{K-1} of frequency omega,
//   phi_i(x) = (sqrt(omega)/(sqrt(pi) 2^i i!))^{1/2} H_i(sqrt(omega) x)
//              exp(-omega x^2 / 2).
struct BasisSet {
    double omega;
    int size;  // K

    BasisSet(double omega_, int size_);
};

// Gauss-Hermite rule for the weight exp(-t^2) on (-inf, inf).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Physicists' Hermite polynomials H_0(t)..H_{n_max}(t) by the raw three-term
// recurrence H_{n+1} = 2 t H_n - 2 n H_{n-1}.
std::vector<double> hermite_values(int n_max, double t);

// Orthonormal Hermite functions without the Gaussian factor,
//   htilde_0 = pi^{-1/4},  htilde_{n+1} = t sqrt(2/(n+1)) htilde_n
//                                         - sqrt(n/(n+1)) htilde_{n-1},
// so that phi_i(x) = omega^{1/4} htilde_i(sqrt(omega) x) exp(-omega x^2/2).
// The normalized recurrence never forms 2^i i!, so it stays finite where the
// raw polynomials and explicit factorials would overflow.
std::vector<double> normalized_hermite_values(int n_max, double t);

// phi_i(x) for the given basis.
double ho_eval(const BasisSet& basis, int i, double x);

// npts x K matrix B with B(r, i) = phi_i(x_r).
std::vector<double> basis_on_grid(const BasisSet& basis, const std::vector<double>& x);

// M-point Gauss-Hermite rule by Golub-Welsch (symmetric tridiagonal Jacobi
// matrix, off-diagonal sqrt(k/2); weights sqrt(pi) * first eigenvector
// components squared). Exact for polynomial degree <= 2M-1.
QuadratureRule gauss_hermite(int M);

// Kinetic energy matrix <phi_i| -1/2 d^2/dx^2 |phi_j>:
//   T_ii = omega (2i+1)/4,  T_{i,i+2} = -omega sqrt((i+1)(i+2))/4.
// Row-major K x K.
std::vector<double> kinetic_matrix(const BasisSet& basis);

// Potential matrix <phi_i| V |phi_j> for a polynomial V, computed exactly by
// powers of the position operator in a basis padded to K+degree and then
// truncated back to K x K (x^k couples indices differing by at most k, so the
// padding absorbs every truncation path). Row-major K x K.
std::vector<double> potential_matrix(const BasisSet& basis, const PotentialSpec& pot);

}  // namespace tbci
