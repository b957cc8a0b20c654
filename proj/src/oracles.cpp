#include "tbci/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <lapacke.h>

#include "tbci/errors.hpp"
#include "tbci/io.hpp"

namespace tbci {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2 = 0.70710678118654752440;

struct TridiagStates {
    std::vector<double> energies;
    std::vector<double> vectors;  // count x n row-major, unit 2-norm
};

TridiagStates lowest_states_tridiag(std::vector<double> diag, std::vector<double> off,
                                    int count) {
    const int n = static_cast<int>(diag.size());
    count = std::min(count, n);
    std::vector<double> w(n);
    std::vector<double> z(static_cast<std::size_t>(n) * count);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_ROW_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0,
                       1, count, 0.0, &found, w.data(), z.data(), count, isuppz.data());
    if (info != 0 || found < count) {
        throw NumericalError("tridiagonal eigensolver failed, info=" + std::to_string(info));
    }
    TridiagStates out;
    out.energies.assign(w.begin(), w.begin() + count);
    out.vectors.assign(static_cast<std::size_t>(count) * n, 0.0);
    for (int s = 0; s < count; ++s) {
        for (int i = 0; i < n; ++i) {
            out.vectors[static_cast<std::size_t>(s) * n + i] =
                z[static_cast<std::size_t>(i) * count + s];
        }
    }
    return out;
}

// lowest even-parity states of -(1/2)u'' + c2 r^2 u + g_eff delta(r) u
// on [-R, R] with n grid points (n odd so r = 0 is a node)
struct RelLevel {
    int n = 0;
    double h = 0.0;
    std::vector<double> energies;  // even states, ascending
    std::vector<double> vectors;   // matching rows, length n each
};

RelLevel relative_even_states(double c2, double g_eff, double R, int n, int count_even) {
    const double h = 2.0 * R / (n - 1);
    std::vector<double> diag(n);
    std::vector<double> off(n - 1, -0.5 / (h * h));
    for (int i = 0; i < n; ++i) {
        const double r = -R + h * i;
        diag[i] = 1.0 / (h * h) + c2 * r * r;
    }
    diag[(n - 1) / 2] += g_eff / h;

    const int want = std::min(n, 2 * count_even + 4);
    const TridiagStates eig = lowest_states_tridiag(std::move(diag), std::move(off), want);

    RelLevel level;
    level.n = n;
    level.h = h;
    for (int s = 0; s < want; ++s) {
        if (static_cast<int>(level.energies.size()) == count_even) break;
        const double* u = &eig.vectors[static_cast<std::size_t>(s) * n];
        double sym = 0.0;
        for (int i = 0; i < n; ++i) sym += u[i] * u[n - 1 - i];
        if (sym > 0.0) {
            level.energies.push_back(eig.energies[s]);
            level.vectors.insert(level.vectors.end(), u, u + n);
        }
    }
    if (static_cast<int>(level.energies.size()) < count_even) {
        throw NumericalError("could not isolate enough exchange-symmetric relative states");
    }
    return level;
}

}  // namespace

Grid::Grid(double L_, int M_) : L(L_), M(M_) {
    if (!(L > 0.0)) throw ConfigError("grid half-width must be positive");
    if (M < 3 || M % 2 == 0) throw ConfigError("grid point count must be odd and at least 3");
}

std::vector<double> Grid::points() const {
    std::vector<double> x(M);
    const double step = h();
    for (int i = 0; i < M; ++i) x[i] = -L + step * i;
    x[(M - 1) / 2] = 0.0;  // keep the center node exact
    return x;
}

SingleParticleResult grid_single_particle(const PotentialSpec& pot, const Grid& grid,
                                          int n_states) {
    if (n_states < 1) throw ConfigError("number of states must be at least 1");
    const int M = grid.M;
    if (n_states > M) throw ConfigError("more states requested than grid points");
    const double h = grid.h();
    const std::vector<double> x = grid.points();

    std::vector<double> diag(M);
    std::vector<double> off(M - 1, -0.5 / (h * h));
    for (int i = 0; i < M; ++i) diag[i] = 1.0 / (h * h) + eval(pot, x[i]);
    const TridiagStates eig = lowest_states_tridiag(std::move(diag), std::move(off), n_states);

    SingleParticleResult result;
    result.energies = eig.energies;
    result.orbitals.assign(static_cast<std::size_t>(n_states) * M, 0.0);
    const double inv_sqrt_h = 1.0 / std::sqrt(h);
    for (int s = 0; s < n_states; ++s) {
        double* u = &result.orbitals[static_cast<std::size_t>(s) * M];
        const double* z = &eig.vectors[static_cast<std::size_t>(s) * M];
        for (int i = 0; i < M; ++i) u[i] = z[i] * inv_sqrt_h;
        int imax = 0;
        for (int i = 1; i < M; ++i) {
            if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
        }
        if (u[imax] < 0.0) {
            for (int i = 0; i < M; ++i) u[i] = -u[i];
        }
        if (std::abs(u[0]) > 1e-6 || std::abs(u[M - 1]) > 1e-6) result.boundary_warning = true;
    }
    return result;
}

ExactHarmonicResult harmonic_exact_ground(const PotentialSpec& pot, double g,
                                          const Grid& grid, int n_states) {
    if (n_states < 1) throw ConfigError("number of states must be at least 1");
    const int p = pot.degree();
    const double c1 = pot.coeffs.size() > 1 ? pot.coeffs[1] : 0.0;
    if (p != 2 || c1 != 0.0 || pot.coeffs[2] <= 0.0) {
        throw ConfigError("exact oracle requires a harmonic trap c2 x^2 (+ constant)");
    }
    const double c0 = pot.coeffs.empty() ? 0.0 : pot.coeffs[0];
    const double c2 = pot.coeffs[2];
    const double omega_t = std::sqrt(2.0 * c2);

    // center of mass R = (x1+x2)/sqrt(2) separates exactly; the relative
    // coordinate r = (x2-x1)/sqrt(2) sees a delta of strength g/sqrt(2).
    // The relative grid [-L sqrt(2), L sqrt(2)] with spacing h/sqrt(2) puts
    // both combinations of 2D grid nodes exactly onto relative-grid nodes.
    const double g_eff = g * kInvSqrt2;
    const double R = grid.L * kSqrt2;
    const int n0 = 2 * grid.M - 1;
    const int count_even = n_states + 1;
    const RelLevel lv0 = relative_even_states(c2, g_eff, R, n0, count_even);
    const RelLevel lv1 = relative_even_states(c2, g_eff, R, 2 * n0 - 1, count_even);
    const RelLevel lv2 = relative_even_states(c2, g_eff, R, 4 * n0 - 3, count_even);

    // the on-node delta leaves a clean h^2 error; the three-level formula
    // annihilates both the h and h^2 terms
    std::vector<double> rel_star(count_even);
    for (int a = 0; a < count_even; ++a) {
        const double A = 2.0 * lv1.energies[a] - lv0.energies[a];
        const double B = 2.0 * lv2.energies[a] - lv1.energies[a];
        rel_star[a] = (4.0 * B - A) / 3.0;
    }

    struct Total {
        double star;
        double raw;
    };
    std::vector<Total> totals;
    for (int a = 0; a < count_even; ++a) {
        for (int nc = 0; nc <= n_states; ++nc) {
            const double com = omega_t * (nc + 0.5) + 2.0 * c0;
            totals.push_back({rel_star[a] + com, lv0.energies[a] + com});
        }
    }
    std::stable_sort(totals.begin(), totals.end(),
                     [](const Total& u, const Total& v) { return u.star < v.star; });

    ExactHarmonicResult result{{}, {}, GridWavefunction2D{grid, {}}};
    for (int s = 0; s < n_states; ++s) {
        result.energies.push_back(totals[s].star);
        result.energies_raw.push_back(totals[s].raw);
    }

    // ground wavefunction: finest relative solution times the analytic
    // center-of-mass Gaussian, sampled back onto the 2D grid
    const int M = grid.M;
    const std::vector<double> x = grid.points();
    std::vector<double> u_rel(lv2.vectors.begin(), lv2.vectors.begin() + lv2.n);
    double orient = std::accumulate(u_rel.begin(), u_rel.end(), 0.0);
    if (orient < 0.0) {
        for (double& u : u_rel) u = -u;
    }
    std::vector<double> values(static_cast<std::size_t>(M) * M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const int coarse = (M - 1) + (j - i);
            const double rc = (x[i] + x[j]) * kInvSqrt2;
            values[static_cast<std::size_t>(i) * M + j] =
                u_rel[static_cast<std::size_t>(4) * coarse] *
                std::exp(-0.5 * omega_t * rc * rc);
        }
    }
    const double h = grid.h();
    double norm2 = 0.0;
    for (const double v : values) norm2 += v * v;
    const double scale = 1.0 / (h * std::sqrt(norm2));
    for (double& v : values) v *= scale;
    result.ground.values = std::move(values);
    return result;
}

GridWavefunction2D tg_ground(const PotentialSpec& pot, const Grid& grid) {
    const SingleParticleResult sp = grid_single_particle(pot, grid, 2);
    const int M = grid.M;
    const double* u0 = &sp.orbitals[0];
    const double* u1 = &sp.orbitals[static_cast<std::size_t>(M)];
    GridWavefunction2D psi{grid, std::vector<double>(static_cast<std::size_t>(M) * M)};
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            psi.values[static_cast<std::size_t>(i) * M + j] =
                std::abs(u0[i] * u1[j] - u1[i] * u0[j]) * kInvSqrt2;
        }
    }
    const double h = grid.h();
    double norm2 = 0.0;
    for (const double v : psi.values) norm2 += v * v;
    const double scale = 1.0 / (h * std::sqrt(norm2));
    for (double& v : psi.values) v *= scale;
    return psi;
}

KernelOccupancies kernel_occupancies(const GridWavefunction2D& psi, int n) {
    if (n < 1) throw ConfigError("number of occupancies must be at least 1");
    const int M = psi.grid.M;
    if (static_cast<int>(psi.values.size()) != M * M) {
        throw ConfigError("wavefunction size does not match its grid");
    }
    const double h = psi.grid.h();
    double norm2 = 0.0;
    for (const double v : psi.values) norm2 += v * v;
    norm2 *= h * h;
    if (std::abs(norm2 - 1.0) > 1e-3) {
        throw ConfigError("wavefunction must be grid-normalized, got " + format_float(norm2));
    }

    std::vector<double> B(static_cast<std::size_t>(M) * M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            B[static_cast<std::size_t>(i) * M + j] =
                0.5 * h *
                (psi.values[static_cast<std::size_t>(i) * M + j] +
                 psi.values[static_cast<std::size_t>(j) * M + i]);
        }
    }
    std::vector<double> w(M);
    const lapack_int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', M, B.data(), M, w.data());
    if (info != 0) {
        throw NumericalError("kernel eigensolver failed, info=" + std::to_string(info));
    }

    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int p, int q) {
        const double lp = w[p] * w[p];
        const double lq = w[q] * w[q];
        if (lp != lq) return lp > lq;
        return w[p] > w[q];
    });

    KernelOccupancies occ;
    const int count = std::min(n, M);
    for (int l = 0; l < count; ++l) {
        occ.k.push_back(w[order[l]]);
        occ.lambda.push_back(w[order[l]] * w[order[l]]);
    }
    return occ;
}

TwoParticleGridResult grid_two_particle(const PotentialSpec& pot, double g,
                                        const Grid& grid, int n_states) {
    if (n_states < 1) throw ConfigError("number of states must be at least 1");
    if (n_states > 20) throw ConfigError("grid oracle supports at most 20 states");
    const int M = grid.M;
    const std::int64_t N = static_cast<std::int64_t>(M) * M;
    const double h = grid.h();
    const std::vector<double> x = grid.points();

    std::vector<double> V(M);
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < M; ++i) {
        V[i] = eval(pot, x[i]);
        vmin = std::min(vmin, V[i]);
    }
    // the discrete kinetic operator is positive semidefinite, so H - sigma I
    // is positive definite for any sigma below the lowest diagonal potential
    const double sigma = 2.0 * vmin + std::min(0.0, g / h) - 0.5;

    const double off = -0.5 / (h * h);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5) * N);
    double gersh = 0.0;  // Gershgorin bound on ||A||, sets the residual scale
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const int idx = i * M + j;
            double d = 2.0 / (h * h) + V[i] + V[j] - sigma;
            if (i == j) d += g / h;
            trip.emplace_back(idx, idx, d);
            int neighbors = 0;
            if (i + 1 < M) trip.emplace_back(idx, idx + M, off), ++neighbors;
            if (i > 0) trip.emplace_back(idx, idx - M, off), ++neighbors;
            if (j + 1 < M) trip.emplace_back(idx, idx + 1, off), ++neighbors;
            if (j > 0) trip.emplace_back(idx, idx - 1, off), ++neighbors;
            gersh = std::max(gersh, std::abs(d) + neighbors * std::abs(off));
        }
    }
    Eigen::SparseMatrix<double> A(N, N);
    A.setFromTriplets(trip.begin(), trip.end());
    trip.clear();
    trip.shrink_to_fit();

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success) {
        throw NumericalError("sparse factorization of the shifted operator failed");
    }

    auto symmetrize = [&](Eigen::VectorXd& v) {
        for (int i = 0; i < M; ++i) {
            for (int j = i + 1; j < M; ++j) {
                const double s = 0.5 * (v[i * M + j] + v[j * M + i]);
                v[i * M + j] = s;
                v[j * M + i] = s;
            }
        }
    };

    // shift-invert Lanczos with full reorthogonalization; the projected
    // operator is kept as a small dense matrix so that thick restarts only
    // swap the basis for Ritz vectors and keep iterating
    const int max_basis = std::min<std::int64_t>(150, N);
    const int max_steps = 600;
    const double conv_tol = 1e-11;

    std::mt19937_64 rng(0x5eed2b0c1dULL);
    auto random_unit = [&]() {
        Eigen::VectorXd v(N);
        for (std::int64_t idx = 0; idx < N; ++idx) {
            const double u = static_cast<double>(rng() >> 11) / 9007199254740992.0;
            v[idx] = 2.0 * u - 1.0;
        }
        symmetrize(v);
        v.normalize();
        return v;
    };

    std::vector<Eigen::VectorXd> basis;
    basis.reserve(max_basis);
    std::vector<double> T(static_cast<std::size_t>(max_basis) * max_basis, 0.0);
    std::vector<double> theta;
    std::vector<double> S;

    Eigen::VectorXd r = random_unit();
    double beta = 1.0;
    int steps = 0;
    bool converged = false;

    auto analyze = [&](int k) {
        theta.assign(k, 0.0);
        S.assign(static_cast<std::size_t>(k) * k, 0.0);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                S[static_cast<std::size_t>(i) * k + j] = T[static_cast<std::size_t>(i) * max_basis + j];
            }
        }
        const lapack_int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', k, S.data(), k,
                                              theta.data());
        if (info != 0) {
            throw NumericalError("projected eigensolver failed, info=" + std::to_string(info));
        }
    };

    while (steps < max_steps) {
        int k = static_cast<int>(basis.size());
        if (k == max_basis) {
            // thick restart: keep the dominant Ritz vectors, the residual
            // direction couples back in through the next Gram row
            analyze(k);
            const int keep = std::min(k - 2, 2 * n_states + 8);
            std::vector<Eigen::VectorXd> kept;
            kept.reserve(keep);
            for (int l = 0; l < keep; ++l) {
                const int col = k - 1 - l;  // largest theta first
                Eigen::VectorXd y = Eigen::VectorXd::Zero(N);
                for (int j = 0; j < k; ++j) y += S[static_cast<std::size_t>(j) * k + col] * basis[j];
                y.normalize();
                kept.push_back(std::move(y));
            }
            basis = std::move(kept);
            std::fill(T.begin(), T.end(), 0.0);
            for (int l = 0; l < keep; ++l) {
                T[static_cast<std::size_t>(l) * max_basis + l] = theta[k - 1 - l];
            }
            k = keep;
        }

        if (beta < 1e-13) {
            r = random_unit();
            for (int pass = 0; pass < 2; ++pass) {
                for (const Eigen::VectorXd& v : basis) r -= v.dot(r) * v;
            }
            beta = r.norm();
            if (beta < 1e-13) throw NumericalError("Lanczos basis collapsed");
        }
        basis.push_back(r / beta);
        const int kk = static_cast<int>(basis.size()) - 1;

        Eigen::VectorXd w = ldlt.solve(basis[kk]);
        if (ldlt.info() != Eigen::Success) throw NumericalError("sparse solve failed");
        symmetrize(w);
        ++steps;

        for (int i = 0; i <= kk; ++i) {
            const double c = basis[i].dot(w);
            T[static_cast<std::size_t>(i) * max_basis + kk] = c;
            T[static_cast<std::size_t>(kk) * max_basis + i] = c;
            w -= c * basis[i];
        }
        for (int i = 0; i <= kk; ++i) w -= basis[i].dot(w) * basis[i];
        beta = w.norm();
        r.swap(w);

        const int k_now = kk + 1;
        if (k_now >= n_states + 2) {
            analyze(k_now);
            const double theta_max = theta[k_now - 1];
            bool ok = theta_max > 0.0;
            for (int l = 0; l < n_states && ok; ++l) {
                const int col = k_now - 1 - l;
                const double res = std::abs(beta * S[static_cast<std::size_t>(k_now - 1) * k_now + col]);
                ok = theta[col] > 0.0 && res <= conv_tol * theta_max;
            }
            if (ok) {
                converged = true;
                break;
            }
        }
    }
    if (!converged) {
        throw NumericalError("two-particle grid eigensolver did not converge within " +
                             std::to_string(max_steps) + " steps");
    }

    const int k = static_cast<int>(basis.size());
    TwoParticleGridResult result;
    result.iterations = steps;

    struct Pair {
        double energy;
        Eigen::VectorXd y;
    };
    std::vector<Pair> pairs;
    double max_residual = 0.0;
    for (int l = 0; l < n_states; ++l) {
        const int col = k - 1 - l;
        Eigen::VectorXd y = Eigen::VectorXd::Zero(N);
        for (int j = 0; j < k; ++j) y += S[static_cast<std::size_t>(j) * k + col] * basis[j];
        y.normalize();
        symmetrize(y);
        const Eigen::VectorXd Ay = A * y;
        const double mu = y.dot(Ay);  // Rayleigh quotient of H - sigma I
        const double res = (Ay - mu * y).norm();
        max_residual = std::max(max_residual, res);
        const double energy = sigma + mu;
        if (res > 1e-9 * gersh) {
            throw NumericalError("grid eigenpair residual too large: " + format_float(res));
        }
        pairs.push_back({energy, std::move(y)});
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& u, const Pair& v) { return u.energy < v.energy; });

    result.max_residual = max_residual;
    for (Pair& pr : pairs) {
        result.energies.push_back(pr.energy);
        std::vector<double> values(N);
        int imax = 0;
        for (std::int64_t idx = 0; idx < N; ++idx) {
            if (std::abs(pr.y[idx]) > std::abs(pr.y[imax])) imax = static_cast<int>(idx);
        }
        const double flip = pr.y[imax] < 0.0 ? -1.0 : 1.0;
        for (std::int64_t idx = 0; idx < N; ++idx) values[idx] = flip * pr.y[idx] / h;
        result.states.push_back(GridWavefunction2D{grid, std::move(values)});
    }
    return result;
}

}  // namespace tbci
