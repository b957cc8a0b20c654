#pragma once

#include <vector>

#include "tbci/ho_basis.hpp"
#include "tbci/potentials.hpp"
#include "tbci/solver.hpp"

namespace tbci {

// Schmidt decomposition of a two-boson CI state:
//   Psi(x1,x2) = sum_l k_l v_l(x1) v_l(x2),  lambda_l = k_l^2.
struct SchmidtDecomposition {
    double omega;
    int K;
    std::vector<double> k;        // signed Schmidt coefficients, |k| descending
    std::vector<double> lambda;   // k^2, descending
    std::vector<double> orbitals; // K x K row-major, row l = coefficients p_n of v_l
};

// Schmidt matrix of a pair-basis CI vector (length K(K+1)/2):
// A_nn = a_nn and A_mn = A_nm = a_mn / sqrt(2) for m < n, Frobenius norm 1.
// The input must have unit norm; anything else is a validation error.
std::vector<double> a_matrix(const std::vector<double>& a, int K);

// Eigendecomposition of the K x K symmetric A matrix: eigenvalues are the
// signed k_l, eigenvectors the natural-orbital coefficients. Sorted by
// descending lambda with ties broken by descending k; each orbital's sign is
// fixed so its largest-magnitude coefficient (first such on ties) is positive.
SchmidtDecomposition schmidt(const std::vector<double>& A, int K, double omega);

// v_l(x) = sum_n p_n phi_n(x).
double orbital_eval(const SchmidtDecomposition& decomp, int l, double x);

struct DensityField {
    std::vector<double> x;       // sample points (both axes for 2D fields)
    std::vector<double> values;  // 1D: per point; 2D: row-major npts x npts
    bool is_2d = false;
    double integral = 0.0;       // trapezoid estimate
    bool grid_warning = false;   // integral off target by more than 1e-3
};

// Default sampling grid: 401 points on [-L, L] with
// L = 4 (outermost potential minimum + omega^{-1/2}).
std::vector<double> default_grid(const PotentialSpec& pot, double omega,
                                 int npts = 401);

// One-body density rho(x,x) = sum_l lambda_l v_l(x)^2.
DensityField one_body_density(const SchmidtDecomposition& decomp,
                              const std::vector<double>& x);

// Pair density |Psi(x1,x2)|^2 reconstructed from the A matrix.
DensityField pair_density(const std::vector<double>& a, int K, double omega,
                          const std::vector<double>& x, bool parallel = true);
DensityField pair_density_serial(const std::vector<double>& a, int K,
                                 double omega, const std::vector<double>& x);

// Von Neumann entropy S = -sum lambda_l ln(lambda_l).
double entanglement_entropy(const SchmidtDecomposition& decomp);
double entanglement_entropy(const std::vector<double>& lambda);

}  // namespace tbci
