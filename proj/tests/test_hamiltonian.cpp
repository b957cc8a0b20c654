#include <cmath>
#include <cstddef>
#include <cstring>
#include <vector>

#include "doctest.h"

#include "tbci/hamiltonian.hpp"
#include "tbci/ho_basis.hpp"
#include "tbci/potentials.hpp"

using tbci::assemble;
using tbci::BasisSet;
using tbci::gauss_hermite;
using tbci::InteractionTensor;
using tbci::kinetic_matrix;
using tbci::make_double_well;
using tbci::make_harmonic;
using tbci::make_triple_well;
using tbci::normalized_hermite_values;
using tbci::PairBasis;
using tbci::potential_matrix;
using tbci::ProblemSpec;
using tbci::QuadratureRule;
using tbci::trace_of_truncation;

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::acos(-1.0));

// Quadrature oracle for W_ijmn = integral phi_i phi_j phi_m phi_n dx.
// Substituting s = sqrt(2 omega) x gives
//   W = sqrt(omega/2) integral prod_a htilde_a(s/sqrt(2)) exp(-s^2) ds,
// exact with M nodes once 4(K-1) <= 2M - 1.
double tensor_entry_by_quadrature(const BasisSet& basis, int i, int j, int m, int n) {
    const int M = 4 * basis.size + 8;
    const QuadratureRule rule = gauss_hermite(M);
    double acc = 0.0;
    for (int q = 0; q < M; ++q) {
        const std::vector<double> h =
            normalized_hermite_values(basis.size - 1, rule.nodes[q] / std::sqrt(2.0));
        acc += rule.weights[q] * h[i] * h[j] * h[m] * h[n];
    }
    return std::sqrt(basis.omega / 2.0) * acc;
}

std::vector<double> one_particle_matrix(const BasisSet& basis,
                                        const tbci::PotentialSpec& pot) {
    std::vector<double> h = kinetic_matrix(basis);
    const std::vector<double> v = potential_matrix(basis, pot);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += v[k];
    return h;
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("pair basis enumeration and index round-trip") {
    const PairBasis pb(40);
    CHECK(pb.dimension() == 820);

    const PairBasis small(7);
    CHECK(small.dimension() == 28);
    int expected = 0;
    for (int i = 0; i < 7; ++i) {
        for (int j = i; j < 7; ++j) {
            CHECK(small.pairs[expected] == std::pair<int, int>(i, j));
            CHECK(small.pair_index(i, j) == expected);
            CHECK(small.pair_index(j, i) == expected);
            ++expected;
        }
    }
    CHECK(PairBasis::b(3, 3) == 0.5);
    CHECK(std::abs(PairBasis::b(0, 1) - 1.0 / std::sqrt(2.0)) <= 1e-15);
}

TEST_CASE("interaction tensor matches the quadrature oracle entrywise") {
    for (const double omega : {1.0, 2.7}) {
        const BasisSet basis(omega, 6);
        const InteractionTensor W(basis);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                for (int m = 0; m < 6; ++m) {
                    for (int n = 0; n < 6; ++n) {
                        const double want = tensor_entry_by_quadrature(basis, i, j, m, n);
                        CHECK(std::abs(W(i, j, m, n) - want) <= 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("closed-form tensor entries at omega = 1") {
    const InteractionTensor W(BasisSet(1.0, 3));
    CHECK(std::abs(W(0, 0, 0, 0) - 1.0 / kSqrt2Pi) <= 1e-14);
    CHECK(std::abs(W(0, 1, 0, 1) - 0.5 / kSqrt2Pi) <= 1e-14);
    CHECK(W(0, 0, 0, 1) == 0.0);
    CHECK(W(0, 1, 1, 1) == 0.0);
}

TEST_CASE("tensor entries scale as sqrt(omega)") {
    const InteractionTensor W1(BasisSet(1.0, 4));
    const InteractionTensor W9(BasisSet(9.0, 4));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(W9(i, i, j, j) - 3.0 * W1(i, i, j, j)) <= 1e-13);
        }
    }
}

TEST_CASE("tensor lookup is permutation invariant") {
    const InteractionTensor W(BasisSet(1.3, 5));
    CHECK(W(1, 3, 0, 2) == W(2, 0, 3, 1));
    CHECK(W(4, 0, 2, 2) == W(2, 2, 0, 4));
    CHECK(W(3, 1, 1, 3) == W(1, 1, 3, 3));
}

TEST_CASE("single-pair Hamiltonian reproduces the hand value") {
    ProblemSpec problem;
    problem.potential = make_harmonic();
    problem.g = 1.0;
    problem.K = 1;
    const std::vector<double> H = assemble(problem, 1.0);
    REQUIRE(H.size() == 1);
    CHECK(std::abs(H[0] - (1.0 + 1.0 / kSqrt2Pi)) <= 1e-14);
}

TEST_CASE("K = 2 block contains the expected matrix elements") {
    ProblemSpec problem;
    problem.potential = make_harmonic();
    problem.g = 0.8;
    problem.K = 2;
    const double omega = 1.0;
    const std::vector<double> H = assemble(problem, omega);
    const PairBasis pb(2);
    REQUIRE(H.size() == 9);
    const InteractionTensor W(BasisSet(omega, 2));

    const int d00 = pb.pair_index(0, 0);
    const int d01 = pb.pair_index(0, 1);
    const int d11 = pb.pair_index(1, 1);

    // diagonal entries: 2 h_ii + g W_iiii for (i,i), h_00 + h_11 + 2 g W_0101
    CHECK(std::abs(H[static_cast<std::size_t>(d00) * 3 + d00] -
                   (1.0 + 0.8 * W(0, 0, 0, 0))) <= 1e-14);
    CHECK(std::abs(H[static_cast<std::size_t>(d01) * 3 + d01] -
                   (2.0 + 1.6 * W(0, 1, 0, 1))) <= 1e-14);
    CHECK(std::abs(H[static_cast<std::size_t>(d11) * 3 + d11] -
                   (3.0 + 0.8 * W(1, 1, 1, 1))) <= 1e-14);

    // coupling (0,0) <-> (1,1) is purely interaction: 4 g b00 b11 W_0011
    CHECK(std::abs(H[static_cast<std::size_t>(d00) * 3 + d11] -
                   0.8 * W(0, 0, 1, 1)) <= 1e-14);

    // odd-parity coupling vanishes exactly for the even trap
    CHECK(H[static_cast<std::size_t>(d00) * 3 + d01] == 0.0);
    CHECK(H[static_cast<std::size_t>(d11) * 3 + d01] == 0.0);
}

TEST_CASE("assembled matrix is exactly symmetric") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 1.7;
    problem.K = 12;
    const std::vector<double> H = assemble(problem, 0.6);
    const int D = PairBasis(12).dimension();
    for (int r = 0; r < D; ++r) {
        for (int c = 0; c < r; ++c) {
            CHECK(H[static_cast<std::size_t>(r) * D + c] ==
                  H[static_cast<std::size_t>(c) * D + r]);
        }
    }
}

TEST_CASE("parity selection rule zeroes odd blocks exactly") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 2.2;
    problem.K = 8;
    const std::vector<double> H = assemble(problem, 1.1);
    const PairBasis pb(8);
    const int D = pb.dimension();
    for (int r = 0; r < D; ++r) {
        for (int c = 0; c < D; ++c) {
            const auto [n, m] = pb.pairs[r];
            const auto [i, j] = pb.pairs[c];
            if ((n + m + i + j) % 2 == 1) {
                CHECK(H[static_cast<std::size_t>(r) * D + c] == 0.0);
            }
        }
    }
}

TEST_CASE("Hamiltonian depends linearly on the coupling") {
    ProblemSpec p0;
    p0.potential = make_double_well(0.025);
    p0.g = 0.0;
    p0.K = 10;
    ProblemSpec p1 = p0;
    p1.g = 1.0;
    ProblemSpec p = p0;
    p.g = 2.5;
    const std::vector<double> H0 = assemble(p0, 0.9);
    const std::vector<double> H1 = assemble(p1, 0.9);
    const std::vector<double> H = assemble(p, 0.9);
    for (std::size_t k = 0; k < H.size(); ++k) {
        CHECK(std::abs(H[k] - (H0[k] + 2.5 * (H1[k] - H0[k]))) <= 1e-12);
    }
}

TEST_CASE("on-the-fly assembly agrees with the stored tensor route") {
    ProblemSpec problem;
    problem.potential = make_triple_well(0.025);
    problem.g = 1.9;
    problem.K = 12;
    const std::vector<double> tensor_route = assemble(problem, 0.8, true, false);
    const std::vector<double> quad_route = assemble(problem, 0.8, true, true);
    REQUIRE(tensor_route.size() == quad_route.size());
    for (std::size_t k = 0; k < tensor_route.size(); ++k) {
        CHECK(std::abs(tensor_route[k] - quad_route[k]) <= 1e-12);
    }
}

TEST_CASE("truncation trace has the closed harmonic forms") {
    ProblemSpec problem;
    problem.potential = make_harmonic();
    problem.g = 0.0;
    problem.K = 2;
    CHECK(std::abs(trace_of_truncation(problem, 1.0) - 6.0) <= 1e-13);

    problem.K = 10;
    CHECK(std::abs(trace_of_truncation(problem, 1.0) - 550.0) <= 1e-11);

    problem.K = 1;
    problem.g = 0.0;
    for (const double omega : {0.3, 1.0, 4.2}) {
        CHECK(std::abs(trace_of_truncation(problem, omega) - 0.5 * (omega + 1.0 / omega)) <=
              1e-13);
    }

    problem.g = 1.6;
    const double w0000 = std::sqrt(1.7 / 2.0) / std::sqrt(std::acos(-1.0));
    CHECK(std::abs(trace_of_truncation(problem, 1.7) -
                   (0.5 * (1.7 + 1.0 / 1.7) + 1.6 * w0000)) <= 1e-13);
}

TEST_CASE("truncation trace equals the assembled diagonal sum") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 2.0;
    problem.K = 10;
    const double omega = 1.3;
    const std::vector<double> H = assemble(problem, omega);
    const int D = PairBasis(10).dimension();
    double diag = 0.0;
    for (int r = 0; r < D; ++r) diag += H[static_cast<std::size_t>(r) * D + r];
    CHECK(std::abs(trace_of_truncation(problem, omega) - diag) <= 1e-10 * std::abs(diag));
}

TEST_CASE("one-body part of the pair Hamiltonian matches h = T + V") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 0.0;
    problem.K = 6;
    const double omega = 1.4;
    const std::vector<double> H = assemble(problem, omega);
    const std::vector<double> h = one_particle_matrix(BasisSet(omega, 6), problem.potential);
    const PairBasis pb(6);
    const int D = pb.dimension();
    auto hv = [&](int r, int c) { return h[static_cast<std::size_t>(r) * 6 + c]; };
    for (int r = 0; r < D; ++r) {
        for (int c = 0; c < D; ++c) {
            const auto [n, m] = pb.pairs[r];
            const auto [i, j] = pb.pairs[c];
            const double want = 2.0 * PairBasis::b(n, m) * PairBasis::b(i, j) *
                                ((m == j ? hv(n, i) : 0.0) + (m == i ? hv(n, j) : 0.0) +
                                 (n == j ? hv(m, i) : 0.0) + (n == i ? hv(m, j) : 0.0));
            CHECK(std::abs(H[static_cast<std::size_t>(r) * D + c] - want) <= 1e-13);
        }
    }
}

}
