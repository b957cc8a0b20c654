#pragma once

#include <cstdint>
#include <vector>

#include "tbci/ho_basis.hpp"
#include "tbci/potentials.hpp"

namespace tbci {

// Two-boson problem: H = sum_p [ -1/2 d^2/dx_p^2 + V(x_p) ] + g delta(x2-x1).
struct ProblemSpec {
    PotentialSpec potential;
    double g = 0.0;
    int K = 1;  // one-particle cutoff
};

// Symmetrized pair basis psi_ij = b_ij (phi_i phi_j + phi_j phi_i), i <= j,
// with b_ii = 1/2 and b_ij = 1/sqrt(2), enumerated lexicographically.
struct PairBasis {
    int K;
    std::vector<std::pair<int, int>> pairs;  // (i, j) with i <= j

    explicit PairBasis(int K_);

    int dimension() const { return static_cast<int>(pairs.size()); }
    // Linear index of the (unordered) pair {i, j}.
    int pair_index(int i, int j) const;
    static double b(int i, int j) { return i == j ? 0.5 : 0.70710678118654752440; }
};

// W_ijmn = integral phi_i phi_j phi_m phi_n dx, fully symmetric in all four
// indices and zero for odd i+j+m+n. Stored once per sorted quadruple.
class InteractionTensor {
public:
    InteractionTensor(const BasisSet& basis, bool parallel = true);

    double operator()(int i, int j, int m, int n) const;
    int K() const { return K_; }
    const std::vector<double>& values() const { return vals_; }

private:
    int K_;
    std::vector<double> vals_;
};

// Quadrature table C(i, q) = htilde_i(u_q / sqrt(2)) w_q^{1/4} for the
// M = 2K+2 point rule; sum_q C_i C_j C_m C_n * sqrt(omega/2) = W_ijmn.
struct InteractionQuadrature {
    int K;
    int M;
    double scale;            // sqrt(omega/2)
    std::vector<double> C;   // K x M row-major

    InteractionQuadrature(const BasisSet& basis);
};

std::vector<double> interaction_tensor_serial(const BasisSet& basis);
std::vector<double> interaction_tensor_parallel(const BasisSet& basis);

// Assembled pair-basis Hamiltonian, D x D row-major with D = K(K+1)/2:
//   H[(n,m),(i,j)] = 2 b_nm b_ij ( h_ni d_mj + h_nj d_mi + h_mi d_nj + h_mj d_ni )
//                    + 4 g b_nm b_ij W_nmij,
// where h = T + V is the one-particle matrix. Exactly symmetric.
// When on_the_fly is set the W tensor is never stored; the interaction block
// is accumulated from the quadrature table directly (for large K).
std::vector<double> assemble(const ProblemSpec& problem, double omega,
                             bool parallel = true, bool on_the_fly = false);
std::vector<double> assemble_serial(const ProblemSpec& problem, double omega);

// Trace of the truncated matrix without assembling it:
//   (K+1) tr(h) + g sqrt(omega/2) sum_q (sum_i C_iq^2)^2.
double trace_of_truncation(const ProblemSpec& problem, double omega);

}  // namespace tbci
