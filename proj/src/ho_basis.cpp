#include "tbci/ho_basis.hpp"

#include <cmath>
#include <string>

#include <cblas.h>
#include <lapacke.h>

#include "tbci/errors.hpp"

namespace tbci {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvPiQuarter = 0.75112554446494248286;  // pi^{-1/4}

}  // namespace

BasisSet::BasisSet(double omega_, int size_) : omega(omega_), size(size_) {
    if (!(omega > 0.0)) throw ConfigError("basis frequency must be positive");
    if (size < 1) throw ConfigError("basis size must be at least 1");
}

std::vector<double> hermite_values(int n_max, double t) {
    if (n_max < 0) throw ConfigError("Hermite order must be non-negative");
    std::vector<double> H(n_max + 1);
    H[0] = 1.0;
    if (n_max >= 1) H[1] = 2.0 * t;
    for (int n = 1; n < n_max; ++n) H[n + 1] = 2.0 * t * H[n] - 2.0 * n * H[n - 1];
    return H;
}

std::vector<double> normalized_hermite_values(int n_max, double t) {
    if (n_max < 0) throw ConfigError("Hermite order must be non-negative");
    std::vector<double> h(n_max + 1);
    h[0] = kInvPiQuarter;
    if (n_max >= 1) h[1] = std::sqrt(2.0) * t * h[0];
    for (int n = 1; n < n_max; ++n) {
        h[n + 1] = t * std::sqrt(2.0 / (n + 1)) * h[n] - std::sqrt(n / (n + 1.0)) * h[n - 1];
    }
    return h;
}

double ho_eval(const BasisSet& basis, int i, double x) {
    if (i < 0 || i >= basis.size) throw ConfigError("basis index out of range");
    const double t = std::sqrt(basis.omega) * x;
    // The Gaussian factor commutes with the linear recurrence, so iterating
    // on htilde_n(t) exp(-t^2/2) directly keeps every intermediate bounded
    // even far outside the classical region.
    double f0 = std::pow(basis.omega, 0.25) * kInvPiQuarter * std::exp(-0.5 * t * t);
    if (i == 0) return f0;
    double f1 = std::sqrt(2.0) * t * f0;
    for (int n = 1; n < i; ++n) {
        const double f2 = t * std::sqrt(2.0 / (n + 1)) * f1 - std::sqrt(n / (n + 1.0)) * f0;
        f0 = f1;
        f1 = f2;
    }
    return f1;
}

std::vector<double> basis_on_grid(const BasisSet& basis, const std::vector<double>& x) {
    const int K = basis.size;
    const int npts = static_cast<int>(x.size());
    std::vector<double> B(static_cast<std::size_t>(npts) * K);
    const double root_omega = std::sqrt(basis.omega);
    const double amp = std::pow(basis.omega, 0.25) * kInvPiQuarter;
    for (int r = 0; r < npts; ++r) {
        double* row = &B[static_cast<std::size_t>(r) * K];
        const double t = root_omega * x[r];
        double f0 = amp * std::exp(-0.5 * t * t);
        row[0] = f0;
        if (K == 1) continue;
        double f1 = std::sqrt(2.0) * t * f0;
        row[1] = f1;
        for (int n = 1; n + 1 < K; ++n) {
            const double f2 =
                t * std::sqrt(2.0 / (n + 1)) * f1 - std::sqrt(n / (n + 1.0)) * f0;
            row[n + 1] = f2;
            f0 = f1;
            f1 = f2;
        }
    }
    return B;
}

QuadratureRule gauss_hermite(int M) {
    if (M < 1) throw ConfigError("quadrature size must be at least 1");
    std::vector<double> diag(M, 0.0);
    std::vector<double> off(M > 1 ? M - 1 : 1, 0.0);
    for (int k = 1; k < M; ++k) off[k - 1] = std::sqrt(k / 2.0);
    std::vector<double> z(static_cast<std::size_t>(M) * M);
    const lapack_int info =
        LAPACKE_dstev(LAPACK_ROW_MAJOR, 'V', M, diag.data(), off.data(), z.data(), M);
    if (info != 0) {
        throw NumericalError("Gauss-Hermite eigensolve failed, info=" + std::to_string(info));
    }

    QuadratureRule rule;
    rule.nodes = diag;  // ascending
    rule.weights.resize(M);
    const double sqrt_pi = std::sqrt(kPi);
    for (int q = 0; q < M; ++q) {
        const double v0 = z[q];  // first component of eigenvector q
        rule.weights[q] = sqrt_pi * v0 * v0;
    }

    // enforce the exact +- symmetry of the rule
    for (int q = 0; q < M / 2; ++q) {
        const int r = M - 1 - q;
        const double node = 0.5 * (rule.nodes[r] - rule.nodes[q]);
        rule.nodes[q] = -node;
        rule.nodes[r] = node;
        const double w = 0.5 * (rule.weights[q] + rule.weights[r]);
        rule.weights[q] = w;
        rule.weights[r] = w;
    }
    if (M % 2 == 1) rule.nodes[M / 2] = 0.0;
    return rule;
}

std::vector<double> kinetic_matrix(const BasisSet& basis) {
    const int K = basis.size;
    std::vector<double> T(static_cast<std::size_t>(K) * K, 0.0);
    for (int i = 0; i < K; ++i) {
        T[static_cast<std::size_t>(i) * K + i] = basis.omega * (2 * i + 1) / 4.0;
        if (i + 2 < K) {
            const double t = -basis.omega * std::sqrt((i + 1.0) * (i + 2.0)) / 4.0;
            T[static_cast<std::size_t>(i) * K + i + 2] = t;
            T[static_cast<std::size_t>(i + 2) * K + i] = t;
        }
    }
    return T;
}

std::vector<double> potential_matrix(const BasisSet& basis, const PotentialSpec& pot) {
    const int K = basis.size;
    std::vector<double> out(static_cast<std::size_t>(K) * K, 0.0);
    const int p = pot.degree();
    if (p < 0) return out;

    // x^k couples states at most k places apart, so a basis padded by the
    // polynomial degree reproduces the untruncated K x K block exactly.
    const int N = K + p;
    std::vector<double> X(static_cast<std::size_t>(N) * N, 0.0);
    for (int i = 0; i + 1 < N; ++i) {
        const double v = std::sqrt((i + 1) / (2.0 * basis.omega));
        X[static_cast<std::size_t>(i) * N + i + 1] = v;
        X[static_cast<std::size_t>(i + 1) * N + i] = v;
    }

    std::vector<double> power(static_cast<std::size_t>(N) * N, 0.0);
    std::vector<double> next(static_cast<std::size_t>(N) * N);
    std::vector<double> acc(static_cast<std::size_t>(N) * N, 0.0);
    for (int i = 0; i < N; ++i) power[static_cast<std::size_t>(i) * N + i] = 1.0;
    for (int i = 0; i < N; ++i) acc[static_cast<std::size_t>(i) * N + i] = pot.coeffs[0];
    for (int k = 1; k <= p; ++k) {
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, N, N, N, 1.0, X.data(), N,
                    power.data(), N, 0.0, next.data(), N);
        power.swap(next);
        const double c = pot.coeffs[k];
        if (c != 0.0) {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * power[i];
        }
    }

    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            const double vij = acc[static_cast<std::size_t>(i) * N + j];
            const double vji = acc[static_cast<std::size_t>(j) * N + i];
            out[static_cast<std::size_t>(i) * K + j] = 0.5 * (vij + vji);
        }
    }
    return out;
}

}  // namespace tbci
