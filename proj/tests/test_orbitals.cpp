#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "doctest.h"

#include "tbci/errors.hpp"
#include "tbci/ho_basis.hpp"
#include "tbci/oracles.hpp"
#include "tbci/orbitals.hpp"
#include "tbci/potentials.hpp"
#include "tbci/solver.hpp"

using tbci::a_matrix;
using tbci::BasisSet;
using tbci::ConfigError;
using tbci::DensityField;
using tbci::entanglement_entropy;
using tbci::Grid;
using tbci::harmonic_exact_ground;
using tbci::ho_eval;
using tbci::kernel_occupancies;
using tbci::make_double_well;
using tbci::make_harmonic;
using tbci::one_body_density;
using tbci::orbital_eval;
using tbci::pair_density;
using tbci::PairBasis;
using tbci::ProblemSpec;
using tbci::schmidt;
using tbci::SchmidtDecomposition;
using tbci::solve;
using tbci::SpectrumResult;
using tbci::tg_ground;

namespace {

const double kInvPiQuarter = 0.75112554446494248286;

std::vector<double> pure_pair_state(int K, int i, int j) {
    const PairBasis pb(K);
    std::vector<double> a(pb.dimension(), 0.0);
    a[static_cast<std::size_t>(pb.pair_index(i, j))] = 1.0;
    return a;
}

// Eq.-(5)-style reconstruction straight from the pair coefficients.
double ci_wavefunction(const std::vector<double>& a, const BasisSet& basis, double x1,
                       double x2) {
    const PairBasis pb(basis.size);
    double acc = 0.0;
    for (int r = 0; r < pb.dimension(); ++r) {
        const auto [i, j] = pb.pairs[r];
        acc += a[r] * PairBasis::b(i, j) *
               (ho_eval(basis, i, x1) * ho_eval(basis, j, x2) +
                ho_eval(basis, j, x1) * ho_eval(basis, i, x2));
    }
    return acc;
}

double schmidt_wavefunction(const SchmidtDecomposition& d, double x1, double x2) {
    double acc = 0.0;
    for (int l = 0; l < d.K; ++l) {
        acc += d.k[l] * orbital_eval(d, l, x1) * orbital_eval(d, l, x2);
    }
    return acc;
}

}  // namespace

TEST_SUITE("orbitals") {

TEST_CASE("A matrix of the pure psi_00 and psi_01 states") {
    const std::vector<double> A00 = a_matrix(pure_pair_state(3, 0, 0), 3);
    CHECK(A00[0] == 1.0);
    for (std::size_t k = 1; k < A00.size(); ++k) CHECK(A00[k] == 0.0);

    const std::vector<double> A01 = a_matrix(pure_pair_state(3, 0, 1), 3);
    CHECK(std::abs(A01[1] - 1.0 / std::sqrt(2.0)) <= 1e-15);
    CHECK(A01[1] == A01[3]);
    CHECK(A01[0] == 0.0);
    CHECK(A01[4] == 0.0);
}

TEST_CASE("A matrix keeps unit Frobenius norm for any normalized state") {
    const int K = 12;
    const PairBasis pb(K);
    std::mt19937 rng(777);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> a(pb.dimension());
    double norm2 = 0.0;
    for (double& c : a) {
        c = gauss(rng);
        norm2 += c * c;
    }
    for (double& c : a) c /= std::sqrt(norm2);

    const std::vector<double> A = a_matrix(a, K);
    double frob2 = 0.0;
    for (const double v : A) frob2 += v * v;
    CHECK(std::abs(frob2 - 1.0) <= 1e-12);
}

TEST_CASE("A matrix validation rejects bad input") {
    std::vector<double> a = pure_pair_state(4, 0, 0);
    a[0] = 1.01;
    CHECK_THROWS_AS(a_matrix(a, 4), ConfigError);
    CHECK_THROWS_AS(a_matrix(std::vector<double>{1.0, 0.0}, 4), ConfigError);
}

TEST_CASE("Schmidt decomposition of pure psi_00") {
    const SchmidtDecomposition d = schmidt(a_matrix(pure_pair_state(4, 0, 0), 4), 4, 1.0);
    CHECK(std::abs(d.k[0] - 1.0) <= 1e-14);
    CHECK(std::abs(d.lambda[0] - 1.0) <= 1e-14);
    for (int l = 1; l < 4; ++l) CHECK(std::abs(d.lambda[l]) <= 1e-14);
    CHECK(std::abs(orbital_eval(d, 0, 0.0) - kInvPiQuarter) <= 1e-12);
    CHECK(entanglement_entropy(d) >= 0.0);
    CHECK(entanglement_entropy(d) <= 1e-12);
}

TEST_CASE("Schmidt decomposition of pure psi_01 is the fragmented archetype") {
    const SchmidtDecomposition d = schmidt(a_matrix(pure_pair_state(4, 0, 1), 4), 4, 1.0);
    CHECK(std::abs(d.k[0] - 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(d.k[1] + 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(d.lambda[0] - 0.5) <= 1e-14);
    CHECK(std::abs(d.lambda[1] - 0.5) <= 1e-14);

    // orbitals (phi_0 +- phi_1)/sqrt(2), both signed positive on the leading
    // coefficient
    CHECK(std::abs(d.orbitals[0] - 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(d.orbitals[1] - 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(d.orbitals[4] - 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(d.orbitals[5] + 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(orbital_eval(d, 0, 0.0) - kInvPiQuarter / std::sqrt(2.0)) <= 1e-12);

    CHECK(std::abs(entanglement_entropy(d) - std::log(2.0)) <= 1e-12);
}

TEST_CASE("Schmidt form reconstructs the CI wavefunction at random points") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 1.0;
    problem.K = 20;
    const SpectrumResult s = solve(problem, 1);
    const std::vector<double>& a = s.vectors[0];
    const SchmidtDecomposition d = schmidt(a_matrix(a, problem.K), problem.K, s.omega);
    const BasisSet basis(s.omega, problem.K);

    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> pos(-8.0, 8.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double x1 = pos(rng);
        const double x2 = pos(rng);
        const double direct = ci_wavefunction(a, basis, x1, x2);
        const double viaschmidt = schmidt_wavefunction(d, x1, x2);
        CHECK(std::abs(direct - viaschmidt) <= 1e-8);
    }
}

TEST_CASE("occupancies are sorted, nonnegative, and sum to one") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 1.0;
    problem.K = 20;
    const SpectrumResult s = solve(problem, 1);
    const SchmidtDecomposition d = schmidt(a_matrix(s.vectors[0], 20), 20, s.omega);

    double sum = 0.0;
    for (int l = 0; l < 20; ++l) {
        CHECK(d.lambda[l] >= 0.0);
        if (l > 0) CHECK(d.lambda[l] <= d.lambda[l - 1]);
        CHECK(std::abs(d.lambda[l] - d.k[l] * d.k[l]) <= 1e-15);
        sum += d.lambda[l];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-10);

    for (int l = 0; l < 20; ++l) {
        for (int m = 0; m < 20; ++m) {
            double dot = 0.0;
            for (int n = 0; n < 20; ++n) {
                dot += d.orbitals[static_cast<std::size_t>(l) * 20 + n] *
                       d.orbitals[static_cast<std::size_t>(m) * 20 + n];
            }
            CHECK(std::abs(dot - (l == m ? 1.0 : 0.0)) <= 1e-10);
        }
    }
}

TEST_CASE("orbitals of an even trap have definite parity") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 1.0;
    problem.K = 20;
    const SpectrumResult s = solve(problem, 1);
    const SchmidtDecomposition d = schmidt(a_matrix(s.vectors[0], 20), 20, s.omega);
    for (int l = 0; l < 6; ++l) {
        for (double x = 0.25; x <= 8.0; x += 0.25) {
            CHECK(std::abs(std::abs(orbital_eval(d, l, x)) -
                           std::abs(orbital_eval(d, l, -x))) <= 1e-8);
        }
    }
}

TEST_CASE("orbitals are unit-normalized on a wide grid") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 1.5;
    problem.K = 16;
    const SpectrumResult s = solve(problem, 1);
    const SchmidtDecomposition d = schmidt(a_matrix(s.vectors[0], 16), 16, s.omega);
    // the window must reach far past the wells at +-6.3 or the truncated
    // tails dominate the trapezoid error
    const int npts = 4001;
    const double half_width = 18.0;
    for (int l = 0; l < 4; ++l) {
        double integral = 0.0;
        double prev = 0.0;
        for (int r = 0; r < npts; ++r) {
            const double x = -half_width + 2.0 * half_width * r / (npts - 1);
            const double f = orbital_eval(d, l, x) * orbital_eval(d, l, x);
            if (r > 0) integral += 0.5 * (2.0 * half_width / (npts - 1)) * (f + prev);
            prev = f;
        }
        CHECK(std::abs(integral - 1.0) <= 1e-8);
    }
}

TEST_CASE("noninteracting one-body density is the oscillator ground density") {
    const SchmidtDecomposition d = schmidt(a_matrix(pure_pair_state(6, 0, 0), 6), 6, 1.0);
    const std::vector<double> x = tbci::default_grid(make_harmonic(), 1.0);
    CHECK(x.size() == 401);
    CHECK(x.front() == -4.0);
    CHECK(x.back() == 4.0);
    const DensityField rho = one_body_density(d, x);
    CHECK(!rho.is_2d);
    CHECK(std::abs(rho.integral - 1.0) <= 1e-6);
    CHECK(!rho.grid_warning);
    const BasisSet basis(1.0, 6);
    for (std::size_t r = 0; r < x.size(); ++r) {
        const double phi0 = ho_eval(basis, 0, x[r]);
        CHECK(std::abs(rho.values[r] - phi0 * phi0) <= 1e-12);
        CHECK(rho.values[r] >= -1e-12);
    }
}

TEST_CASE("a too-coarse grid raises the density warning flag") {
    const SchmidtDecomposition d = schmidt(a_matrix(pure_pair_state(6, 0, 0), 6), 6, 1.0);
    const DensityField rho = one_body_density(d, tbci::default_grid(make_harmonic(), 1.0, 5));
    CHECK(rho.grid_warning);
}

TEST_CASE("interacting one-body density matches the exact-harmonic oracle") {
    ProblemSpec problem;
    problem.potential = make_harmonic();
    problem.g = 1.0;
    problem.K = 40;
    const SpectrumResult s = solve(problem, 1);
    const SchmidtDecomposition d = schmidt(a_matrix(s.vectors[0], 40), 40, s.omega);

    const Grid grid(8.0, 801);
    const tbci::ExactHarmonicResult oracle = harmonic_exact_ground(problem.potential, 1.0,
                                                                   grid, 1);
    const std::vector<double> x = grid.points();
    const int M = grid.M;
    const double h = grid.h();
    const DensityField rho = one_body_density(d, x);
    // the delta cusp caps the pointwise agreement near the center at a few
    // 1e-3 for K = 40 (the deviation shrinks as K^{-1/2} and is independent
    // of the oracle grid)
    double worst = 0.0;
    for (int i = 0; i < M; ++i) {
        double traced = 0.0;
        for (int j = 0; j < M; ++j) {
            const double v = oracle.ground.values[static_cast<std::size_t>(i) * M + j];
            traced += v * v;
        }
        traced *= h;
        worst = std::max(worst, std::abs(rho.values[i] - traced));
    }
    CHECK(worst <= 5e-3);
}

TEST_CASE("noninteracting pair density is the squared product state") {
    const std::vector<double> A = a_matrix(pure_pair_state(5, 0, 0), 5);
    const std::vector<double> x = tbci::default_grid(make_harmonic(), 1.0, 101);
    const DensityField rho = pair_density(A, 5, 1.0, x);
    CHECK(rho.is_2d);
    CHECK(std::abs(rho.integral - 1.0) <= 1e-6);
    const BasisSet basis(1.0, 5);
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; i += 10) {
        for (int j = 0; j < n; j += 10) {
            const double f1 = ho_eval(basis, 0, x[i]);
            const double f2 = ho_eval(basis, 0, x[j]);
            CHECK(std::abs(rho.values[static_cast<std::size_t>(i) * n + j] -
                           f1 * f1 * f2 * f2) <= 1e-12);
        }
    }
    const int c = n / 2;
    for (int i = 0; i < n; ++i) {
        CHECK(rho.values[static_cast<std::size_t>(c) * n + c] >=
              rho.values[static_cast<std::size_t>(i) * n + i]);
    }
}

TEST_CASE("pair density of pure psi_01 vanishes at the origin") {
    const std::vector<double> A = a_matrix(pure_pair_state(5, 0, 1), 5);
    const std::vector<double> x = tbci::default_grid(make_harmonic(), 1.0, 101);
    const DensityField rho = pair_density(A, 5, 1.0, x);
    const int n = static_cast<int>(x.size());
    const int c = n / 2;
    CHECK(x[c] == 0.0);
    CHECK(rho.values[static_cast<std::size_t>(c) * n + c] == 0.0);
}

TEST_CASE("pair density is symmetric under particle exchange") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 0.5;
    problem.K = 14;
    const SpectrumResult s = solve(problem, 1);
    const std::vector<double> A = a_matrix(s.vectors[0], 14);
    const std::vector<double> x = tbci::default_grid(problem.potential, s.omega, 81);
    const DensityField rho = pair_density(A, 14, s.omega, x);
    const int n = 81;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            CHECK(std::abs(rho.values[static_cast<std::size_t>(i) * n + j] -
                           rho.values[static_cast<std::size_t>(j) * n + i]) <= 1e-13);
        }
    }
}

TEST_CASE("nearly fragmented double well lives in the off-diagonal quadrants") {
    ProblemSpec problem;
    problem.potential = make_double_well(0.025);
    problem.g = 1e-6;
    problem.K = 60;
    const SpectrumResult s = solve(problem, 1);
    const std::vector<double> A = a_matrix(s.vectors[0], 60);
    const std::vector<double> x = tbci::default_grid(problem.potential, s.omega);
    const DensityField rho = pair_density(A, 60, s.omega, x);

    // trapezoid weights per axis, quadrant masses from the sign pattern
    const int n = static_cast<int>(x.size());
    std::vector<double> w(n, 0.0);
    for (int r = 0; r + 1 < n; ++r) {
        const double half = 0.5 * (x[r + 1] - x[r]);
        w[r] += half;
        w[r + 1] += half;
    }
    double same = 0.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double mass = w[i] * w[j] * rho.values[static_cast<std::size_t>(i) * n + j];
            total += mass;
            if (x[i] * x[j] > 0.0) same += mass;
        }
    }
    CHECK(total > 0.9);
    CHECK(same / total < 0.10);
}

TEST_CASE("entropy of the TG gas occupancies") {
    const tbci::GridWavefunction2D psi = tg_ground(make_harmonic(), Grid(8.0, 801));
    const tbci::KernelOccupancies occ = kernel_occupancies(psi, 60);
    const double S = entanglement_entropy(occ.lambda);
    CHECK(std::abs(S - 0.6830) <= 1e-3);
}

TEST_CASE("entropy closed forms") {
    CHECK(entanglement_entropy(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);
    CHECK(std::abs(entanglement_entropy(std::vector<double>{0.5, 0.5}) - std::log(2.0)) <=
          1e-12);
}

}
