#include "tbci/orbitals.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>

#include <cblas.h>
#include <lapacke.h>

#include "tbci/errors.hpp"
#include "tbci/io.hpp"

namespace tbci {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t r = 0; r + 1 < x.size(); ++r) {
        s += 0.5 * (x[r + 1] - x[r]) * (f[r] + f[r + 1]);
    }
    return s;
}

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t r = 0; r + 1 < n; ++r) {
        const double half = 0.5 * (x[r + 1] - x[r]);
        w[r] += half;
        w[r + 1] += half;
    }
    return w;
}

}  // namespace

std::vector<double> a_matrix(const std::vector<double>& a, int K) {
    const PairBasis pb(K);
    if (static_cast<int>(a.size()) != pb.dimension()) {
        throw ConfigError("coefficient vector length does not match K(K+1)/2");
    }
    double norm2 = 0.0;
    for (const double c : a) norm2 += c * c;
    if (std::abs(norm2 - 1.0) > 1e-6) {
        throw ConfigError("state vector must be normalized, got |a|^2 = " + format_float(norm2));
    }
    std::vector<double> A(static_cast<std::size_t>(K) * K, 0.0);
    for (int r = 0; r < pb.dimension(); ++r) {
        const auto [i, j] = pb.pairs[r];
        if (i == j) {
            A[static_cast<std::size_t>(i) * K + i] = a[r];
        } else {
            A[static_cast<std::size_t>(i) * K + j] = a[r] * kInvSqrt2;
            A[static_cast<std::size_t>(j) * K + i] = a[r] * kInvSqrt2;
        }
    }
    return A;
}

SchmidtDecomposition schmidt(const std::vector<double>& A, int K, double omega) {
    if (K < 1) throw ConfigError("Schmidt decomposition needs K >= 1");
    if (static_cast<int>(A.size()) != K * K) {
        throw ConfigError("A matrix size does not match K x K");
    }
    std::vector<double> work(A);
    std::vector<double> w(K);
    const lapack_int info =
        LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', K, work.data(), K, w.data());
    if (info != 0) {
        throw NumericalError("Schmidt eigensolver failed, info=" + std::to_string(info));
    }

    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int p, int q) {
        const double lp = w[p] * w[p];
        const double lq = w[q] * w[q];
        if (lp != lq) return lp > lq;
        return w[p] > w[q];
    });

    SchmidtDecomposition d;
    d.omega = omega;
    d.K = K;
    d.k.resize(K);
    d.lambda.resize(K);
    d.orbitals.assign(static_cast<std::size_t>(K) * K, 0.0);
    for (int l = 0; l < K; ++l) {
        const int src = order[l];
        d.k[l] = w[src];
        d.lambda[l] = w[src] * w[src];
        double* row = &d.orbitals[static_cast<std::size_t>(l) * K];
        for (int n = 0; n < K; ++n) row[n] = work[static_cast<std::size_t>(n) * K + src];
        int imax = 0;
        for (int n = 1; n < K; ++n) {
            if (std::abs(row[n]) > std::abs(row[imax])) imax = n;
        }
        if (row[imax] < 0.0) {
            for (int n = 0; n < K; ++n) row[n] = -row[n];
        }
    }
    return d;
}

double orbital_eval(const SchmidtDecomposition& decomp, int l, double x) {
    if (l < 0 || l >= decomp.K) throw ConfigError("orbital index out of range");
    const BasisSet basis(decomp.omega, decomp.K);
    const std::vector<double> B = basis_on_grid(basis, {x});
    const double* p = &decomp.orbitals[static_cast<std::size_t>(l) * decomp.K];
    double v = 0.0;
    for (int n = 0; n < decomp.K; ++n) v += p[n] * B[n];
    return v;
}

std::vector<double> default_grid(const PotentialSpec& pot, double omega, int npts) {
    if (npts < 2) throw ConfigError("grid needs at least 2 points");
    if (!(omega > 0.0)) throw ConfigError("basis frequency must be positive");
    const double L = 4.0 * (outermost_minimum(pot) + 1.0 / std::sqrt(omega));
    std::vector<double> x(npts);
    for (int r = 0; r < npts; ++r) x[r] = -L + 2.0 * L * r / (npts - 1);
    return x;
}

DensityField one_body_density(const SchmidtDecomposition& decomp,
                              const std::vector<double>& x) {
    const int K = decomp.K;
    const int npts = static_cast<int>(x.size());
    const BasisSet basis(decomp.omega, K);
    const std::vector<double> B = basis_on_grid(basis, x);

    // orbital values O(r, l) = sum_n B(r, n) P(l, n)
    std::vector<double> O(static_cast<std::size_t>(npts) * K);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, npts, K, K, 1.0, B.data(), K,
                decomp.orbitals.data(), K, 0.0, O.data(), K);

    DensityField field;
    field.x = x;
    field.values.assign(npts, 0.0);
    for (int r = 0; r < npts; ++r) {
        double rho = 0.0;
        for (int l = 0; l < K; ++l) {
            const double v = O[static_cast<std::size_t>(r) * K + l];
            rho += decomp.lambda[l] * v * v;
        }
        field.values[r] = rho;
    }
    field.is_2d = false;
    field.integral = trapezoid(x, field.values);
    field.grid_warning = std::abs(field.integral - 1.0) > 1e-3;
    return field;
}

DensityField pair_density(const std::vector<double>& A, int K, double omega,
                          const std::vector<double>& x, bool parallel) {
    if (static_cast<int>(A.size()) != K * K) {
        throw ConfigError("A matrix size does not match K x K");
    }
    const int npts = static_cast<int>(x.size());
    const BasisSet basis(omega, K);
    const std::vector<double> B = basis_on_grid(basis, x);

    std::vector<double> BA(static_cast<std::size_t>(npts) * K);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, npts, K, K, 1.0, B.data(), K,
                A.data(), K, 0.0, BA.data(), K);

    DensityField field;
    field.x = x;
    field.values.assign(static_cast<std::size_t>(npts) * npts, 0.0);
    field.is_2d = true;
#pragma omp parallel for schedule(static) if (parallel)
    for (int r = 0; r < npts; ++r) {
        const double* rowBA = &BA[static_cast<std::size_t>(r) * K];
        for (int s = 0; s < npts; ++s) {
            const double* rowB = &B[static_cast<std::size_t>(s) * K];
            double psi = 0.0;
            for (int n = 0; n < K; ++n) psi += rowBA[n] * rowB[n];
            field.values[static_cast<std::size_t>(r) * npts + s] = psi * psi;
        }
    }

    const std::vector<double> wts = trapezoid_weights(x);
    double integral = 0.0;
    for (int r = 0; r < npts; ++r) {
        double row = 0.0;
        for (int s = 0; s < npts; ++s) {
            row += wts[s] * field.values[static_cast<std::size_t>(r) * npts + s];
        }
        integral += wts[r] * row;
    }
    field.integral = integral;
    field.grid_warning = std::abs(integral - 1.0) > 1e-3;
    return field;
}

DensityField pair_density_serial(const std::vector<double>& A, int K, double omega,
                                 const std::vector<double>& x) {
    return pair_density(A, K, omega, x, false);
}

double entanglement_entropy(const std::vector<double>& lambda) {
    double s = 0.0;
    for (const double l : lambda) {
        if (l > 0.0) s -= l * std::log(l);
    }
    return s;
}

double entanglement_entropy(const SchmidtDecomposition& decomp) {
    return entanglement_entropy(decomp.lambda);
}

}  // namespace tbci
