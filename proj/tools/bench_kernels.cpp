// Times the OpenMP kernels against their serial twins and reports the
// largest elementwise deviation (expected to be exactly zero).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "tbci/hamiltonian.hpp"
#include "tbci/ho_basis.hpp"
#include "tbci/orbitals.hpp"
#include "tbci/potentials.hpp"
#include "tbci/solver.hpp"

using namespace tbci;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

void row(const char* name, double serial, double parallel, double diff) {
    std::printf("%-22s %10.3f ms %10.3f ms %8.2fx %10.1e\n", name, 1e3 * serial,
                1e3 * parallel, serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
    const int K = argc > 1 ? std::atoi(argv[1]) : 40;
    if (K < 2) {
        std::fprintf(stderr, "usage: bench_kernels [K >= 2]\n");
        return 1;
    }
    const int reps = 3;

    std::printf("kernel benchmarks at K = %d (best of %d)\n", K, reps);
    std::printf("%-22s %13s %13s %9s %10s\n", "kernel", "serial", "parallel", "speedup",
                "max|diff|");

    const BasisSet basis(1.1, K);
    std::vector<double> w_serial, w_parallel;
    const double t_ws = time_best_of(reps, [&] { w_serial = interaction_tensor_serial(basis); });
    const double t_wp =
        time_best_of(reps, [&] { w_parallel = interaction_tensor_parallel(basis); });
    row("interaction tensor", t_ws, t_wp, max_abs_diff(w_serial, w_parallel));

    ProblemSpec problem;
    problem.potential = make_triple_well(0.025);
    problem.g = 1.5;
    problem.K = K;
    const double omega = 0.9;
    std::vector<double> h_serial, h_parallel;
    const double t_hs = time_best_of(reps, [&] { h_serial = assemble_serial(problem, omega); });
    const double t_hp =
        time_best_of(reps, [&] { h_parallel = assemble(problem, omega, true, false); });
    row("hamiltonian assembly", t_hs, t_hp, max_abs_diff(h_serial, h_parallel));

    std::vector<double> f_serial, f_parallel;
    const double t_fs =
        time_best_of(reps, [&] { f_serial = assemble(problem, omega, false, true); });
    const double t_fp =
        time_best_of(reps, [&] { f_parallel = assemble(problem, omega, true, true); });
    row("assembly, on the fly", t_fs, t_fp, max_abs_diff(f_serial, f_parallel));

    const SpectrumResult s = solve(problem, 1);
    const std::vector<double> A = a_matrix(s.vectors[0], K);
    std::vector<double> x(201);
    for (int r = 0; r < 201; ++r) x[r] = -12.0 + 0.12 * r;
    DensityField d_serial, d_parallel;
    const double t_ds =
        time_best_of(reps, [&] { d_serial = pair_density_serial(A, K, s.omega, x); });
    const double t_dp = time_best_of(reps, [&] { d_parallel = pair_density(A, K, s.omega, x); });
    row("pair density", t_ds, t_dp, max_abs_diff(d_serial.values, d_parallel.values));

    return 0;
}
