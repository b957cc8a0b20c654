#include "tbci/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <cblas.h>
#include <lapacke.h>

#include "tbci/errors.hpp"
#include "tbci/io.hpp"

namespace tbci {

std::vector<double> SpectrumResult::coefficient_matrix(int s) const {
    if (s < 0 || s >= static_cast<int>(vectors.size())) {
        throw ConfigError("state index out of range");
    }
    const PairBasis pb(K);
    const double inv_sqrt2 = 0.70710678118654752440;
    std::vector<double> a(static_cast<std::size_t>(K) * K, 0.0);
    for (int r = 0; r < D; ++r) {
        const auto [i, j] = pb.pairs[r];
        const double c = vectors[s][r];
        if (i == j) {
            a[static_cast<std::size_t>(i) * K + i] = c;
        } else {
            a[static_cast<std::size_t>(i) * K + j] = c * inv_sqrt2;
            a[static_cast<std::size_t>(j) * K + i] = c * inv_sqrt2;
        }
    }
    return a;
}

OmegaResult optimize_omega(const ProblemSpec& problem, const OmegaSearchConfig& config) {
    if (!(config.omega_lo > 0.0) || !(config.omega_hi > config.omega_lo)) {
        throw ConfigError("omega search interval must satisfy 0 < lo < hi");
    }
    if (!(config.rel_tol > 0.0)) throw ConfigError("omega search tolerance must be positive");
    if (config.scan_points < 5) throw ConfigError("omega pre-scan needs at least 5 points");

    auto f = [&](double t) { return trace_of_truncation(problem, std::exp(t)); };
    const double t_lo = std::log(config.omega_lo);
    const double t_hi = std::log(config.omega_hi);
    int evals = 0;

    // log-spaced scan to bracket an interior minimum of the trace
    const int n = config.scan_points;
    std::vector<double> ts(n), fs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = t_lo + (t_hi - t_lo) * i / (n - 1);
        fs[i] = f(ts[i]);
        ++evals;
    }
    int imin = 0;
    for (int i = 1; i < n; ++i) {
        if (fs[i] < fs[imin]) imin = i;
    }
    if (imin == 0 || imin == n - 1) {
        std::string msg = "trace has no interior minimum on the omega search interval;";
        msg += " samples (omega, trace):";
        for (int i : {0, n / 2, n - 1}) {
            msg += " (" + format_float(std::exp(ts[i])) + ", " + format_float(fs[i]) + ")";
        }
        throw ConfigError(msg);
    }

    double a = ts[imin - 1];
    double b = ts[imin + 1];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    evals += 2;
    int iter = 0;
    while (b - a > config.rel_tol && iter < config.max_iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        ++evals;
        ++iter;
    }

    OmegaResult result;
    result.omega = std::exp(0.5 * (a + b));
    result.trace = trace_of_truncation(problem, result.omega);
    result.iterations = evals + 1;
    return result;
}

SpectrumResult diagonalize(const ProblemSpec& problem, double omega, int n_states) {
    if (n_states < 1) throw ConfigError("number of states must be at least 1");
    const PairBasis pb(problem.K);
    const int D = pb.dimension();
    const int ns = std::min(n_states, D);
    const bool on_the_fly = problem.K > 80;

    const std::vector<double> H = assemble(problem, omega, true, on_the_fly);
    std::vector<double> A(H);  // dsyevr overwrites its input
    std::vector<double> w(D);
    std::vector<double> z(static_cast<std::size_t>(D) * ns);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(ns));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_ROW_MAJOR, 'V', 'I', 'U', D, A.data(), D, 0.0, 0.0, 1, ns,
                       0.0, &found, w.data(), z.data(), ns, isuppz.data());
    if (info != 0 || found < ns) {
        throw NumericalError("pair-basis eigensolver failed, info=" + std::to_string(info));
    }

    // infinity norm of H for the residual scale
    double h_norm = 0.0;
    for (int r = 0; r < D; ++r) {
        double row = 0.0;
        for (int col = 0; col < D; ++col) {
            row += std::abs(H[static_cast<std::size_t>(r) * D + col]);
        }
        h_norm = std::max(h_norm, row);
    }

    SpectrumResult result;
    result.omega = omega;
    result.K = problem.K;
    result.D = D;
    result.trace = trace_of_truncation(problem, omega);
    result.energies.assign(w.begin(), w.begin() + ns);
    result.vectors.assign(ns, std::vector<double>(D));
    std::vector<double> resid(D);
    for (int s = 0; s < ns; ++s) {
        std::vector<double>& v = result.vectors[s];
        for (int r = 0; r < D; ++r) v[r] = z[static_cast<std::size_t>(r) * ns + s];
        int imax = 0;
        for (int r = 1; r < D; ++r) {
            if (std::abs(v[r]) > std::abs(v[imax])) imax = r;
        }
        if (v[imax] < 0.0) {
            for (double& x : v) x = -x;
        }
        cblas_dsymv(CblasRowMajor, CblasUpper, D, 1.0, H.data(), D, v.data(), 1, 0.0,
                    resid.data(), 1);
        double rmax = 0.0;
        for (int r = 0; r < D; ++r) {
            rmax = std::max(rmax, std::abs(resid[r] - result.energies[s] * v[r]));
        }
        if (rmax > 1e-9 * h_norm) {
            throw NumericalError("eigenpair residual " + format_float(rmax) +
                                 " exceeds 1e-9 * |H| = " + format_float(1e-9 * h_norm));
        }
    }
    return result;
}

SpectrumResult solve(const ProblemSpec& problem, int n_states,
                     const OmegaSearchConfig& config) {
    const OmegaResult opt = optimize_omega(problem, config);
    SpectrumResult result = diagonalize(problem, opt.omega, n_states);
    result.trace = opt.trace;
    result.omega_iterations = opt.iterations;
    return result;
}

}  // namespace tbci
