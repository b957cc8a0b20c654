#include "tbci/hamiltonian.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include <cblas.h>

#include "tbci/errors.hpp"

namespace tbci {

namespace {

// linear index of the sorted quadruple a <= b <= c <= d
inline std::int64_t quad_index(int a, int b, int c, int d) {
    const std::int64_t b2 = static_cast<std::int64_t>(b) * (b + 1) / 2;
    const std::int64_t c3 = static_cast<std::int64_t>(c) * (c + 1) * (c + 2) / 6;
    const std::int64_t d4 =
        static_cast<std::int64_t>(d) * (d + 1) * (d + 2) * (d + 3) / 24;
    return d4 + c3 + b2 + a;
}

inline std::int64_t quad_count(int K) {
    return static_cast<std::int64_t>(K) * (K + 1) * (K + 2) * (K + 3) / 24;
}

inline void sort4(int& a, int& b, int& c, int& d) {
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    if (a > c) std::swap(a, c);
    if (b > d) std::swap(b, d);
    if (b > c) std::swap(b, c);
}

std::vector<double> interaction_tensor_impl(const BasisSet& basis, bool parallel) {
    const InteractionQuadrature quad(basis);
    const int K = quad.K;
    const int M = quad.M;
    std::vector<double> vals(quad_count(K), 0.0);
    const double* C = quad.C.data();
    const double scale = quad.scale;

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int d = 0; d < K; ++d) {
        const double* Cd = C + static_cast<std::size_t>(d) * M;
        for (int c = 0; c <= d; ++c) {
            const double* Cc = C + static_cast<std::size_t>(c) * M;
            for (int b = 0; b <= c; ++b) {
                const double* Cb = C + static_cast<std::size_t>(b) * M;
                for (int a = (b + c + d) % 2; a <= b; a += 2) {
                    const double* Ca = C + static_cast<std::size_t>(a) * M;
                    double s = 0.0;
                    for (int q = 0; q < M; ++q) s += Ca[q] * Cb[q] * Cc[q] * Cd[q];
                    vals[quad_index(a, b, c, d)] = s * scale;
                }
            }
        }
    }
    return vals;
}

}  // namespace

PairBasis::PairBasis(int K_) : K(K_) {
    if (K < 1) throw ConfigError("pair basis needs K >= 1");
    pairs.reserve(static_cast<std::size_t>(K) * (K + 1) / 2);
    for (int i = 0; i < K; ++i) {
        for (int j = i; j < K; ++j) pairs.emplace_back(i, j);
    }
}

int PairBasis::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= K) throw ConfigError("pair index out of range");
    return i * K - i * (i - 1) / 2 + (j - i);
}

InteractionTensor::InteractionTensor(const BasisSet& basis, bool parallel)
    : K_(basis.size), vals_(interaction_tensor_impl(basis, parallel)) {}

double InteractionTensor::operator()(int i, int j, int m, int n) const {
    sort4(i, j, m, n);
    return vals_[quad_index(i, j, m, n)];
}

InteractionQuadrature::InteractionQuadrature(const BasisSet& basis)
    : K(basis.size), M(2 * basis.size + 2), scale(std::sqrt(basis.omega / 2.0)) {
    const QuadratureRule rule = gauss_hermite(M);
    const double inv_sqrt2 = 0.70710678118654752440;
    C.assign(static_cast<std::size_t>(K) * M, 0.0);
    for (int q = 0; q < M; ++q) {
        const std::vector<double> h = normalized_hermite_values(K - 1, rule.nodes[q] * inv_sqrt2);
        const double w4 = std::pow(rule.weights[q], 0.25);
        for (int i = 0; i < K; ++i) C[static_cast<std::size_t>(i) * M + q] = h[i] * w4;
    }
}

std::vector<double> interaction_tensor_serial(const BasisSet& basis) {
    return interaction_tensor_impl(basis, false);
}

std::vector<double> interaction_tensor_parallel(const BasisSet& basis) {
    return interaction_tensor_impl(basis, true);
}

std::vector<double> assemble(const ProblemSpec& problem, double omega, bool parallel,
                             bool on_the_fly) {
    const int K = problem.K;
    const BasisSet basis(omega, K);
    const PairBasis pb(K);
    const int D = pb.dimension();
    const double g = problem.g;

    std::vector<double> h = kinetic_matrix(basis);
    {
        const std::vector<double> V = potential_matrix(basis, problem.potential);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += V[i];
    }

    std::vector<double> H(static_cast<std::size_t>(D) * D, 0.0);

    if (!on_the_fly) {
        const InteractionTensor W(basis, parallel);
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (int r = 0; r < D; ++r) {
            const auto [n, m] = pb.pairs[r];
            const double bnm = PairBasis::b(n, m);
            for (int col = r; col < D; ++col) {
                const auto [i, j] = pb.pairs[col];
                double one = 0.0;
                if (m == j) one += h[static_cast<std::size_t>(n) * K + i];
                if (m == i) one += h[static_cast<std::size_t>(n) * K + j];
                if (n == j) one += h[static_cast<std::size_t>(m) * K + i];
                if (n == i) one += h[static_cast<std::size_t>(m) * K + j];
                const double bb = bnm * PairBasis::b(i, j);
                H[static_cast<std::size_t>(r) * D + col] =
                    2.0 * bb * one + 4.0 * g * bb * W(n, m, i, j);
            }
        }
    } else {
        // G(r, q) = C_n(q) C_m(q); the interaction block is scale * G G^T,
        // formed without ever storing the four-index tensor
        const InteractionQuadrature quad(basis);
        const int M = quad.M;
        std::vector<double> G(static_cast<std::size_t>(D) * M);
#pragma omp parallel for schedule(static) if (parallel)
        for (int r = 0; r < D; ++r) {
            const auto [n, m] = pb.pairs[r];
            const double* Cn = quad.C.data() + static_cast<std::size_t>(n) * M;
            const double* Cm = quad.C.data() + static_cast<std::size_t>(m) * M;
            for (int q = 0; q < M; ++q) G[static_cast<std::size_t>(r) * M + q] = Cn[q] * Cm[q];
        }
        cblas_dsyrk(CblasRowMajor, CblasUpper, CblasNoTrans, D, M, 1.0, G.data(), M, 0.0,
                    H.data(), D);
#pragma omp parallel for schedule(static) if (parallel)
        for (int r = 0; r < D; ++r) {
            const auto [n, m] = pb.pairs[r];
            const double bnm = PairBasis::b(n, m);
            for (int col = r; col < D; ++col) {
                const auto [i, j] = pb.pairs[col];
                double one = 0.0;
                if (m == j) one += h[static_cast<std::size_t>(n) * K + i];
                if (m == i) one += h[static_cast<std::size_t>(n) * K + j];
                if (n == j) one += h[static_cast<std::size_t>(m) * K + i];
                if (n == i) one += h[static_cast<std::size_t>(m) * K + j];
                const double bb = bnm * PairBasis::b(i, j);
                double& entry = H[static_cast<std::size_t>(r) * D + col];
                entry = 2.0 * bb * one + 4.0 * g * bb * quad.scale * entry;
            }
        }
    }

    for (int r = 0; r < D; ++r) {
        for (int col = r + 1; col < D; ++col) {
            H[static_cast<std::size_t>(col) * D + r] = H[static_cast<std::size_t>(r) * D + col];
        }
    }
    return H;
}

std::vector<double> assemble_serial(const ProblemSpec& problem, double omega) {
    return assemble(problem, omega, false, false);
}

double trace_of_truncation(const ProblemSpec& problem, double omega) {
    const int K = problem.K;
    const BasisSet basis(omega, K);
    const std::vector<double> T = kinetic_matrix(basis);
    const std::vector<double> V = potential_matrix(basis, problem.potential);
    double tr_h = 0.0;
    for (int i = 0; i < K; ++i) {
        tr_h += T[static_cast<std::size_t>(i) * K + i] + V[static_cast<std::size_t>(i) * K + i];
    }

    const InteractionQuadrature quad(basis);
    double s = 0.0;
    for (int q = 0; q < quad.M; ++q) {
        double col = 0.0;
        for (int i = 0; i < K; ++i) {
            const double c = quad.C[static_cast<std::size_t>(i) * quad.M + q];
            col += c * c;
        }
        s += col * col;
    }
    return (K + 1) * tr_h + problem.g * quad.scale * s;
}

}  // namespace tbci
