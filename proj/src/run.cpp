#include "tbci/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>

#include "tbci/errors.hpp"
#include "tbci/io.hpp"
#include "tbci/oracles.hpp"
#include "tbci/orbitals.hpp"
#include "tbci/version.hpp"

namespace tbci {

namespace {

std::string sanitize(std::string msg) {
    for (char& ch : msg) {
        if (ch == ',') ch = ';';
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return msg;
}

std::vector<double> g_values(const RunConfig& config) {
    if (config.g_points < 2) throw ConfigError("sweep needs at least 2 g points");
    if (!(config.g_max > config.g_min)) throw ConfigError("sweep needs g_max > g_min");
    std::vector<double> g(config.g_points);
    const int n = config.g_points;
    if (config.log_spacing) {
        if (!(config.g_min > 0.0)) throw ConfigError("log spacing needs g_min > 0");
        const double lmin = std::log(config.g_min);
        const double lmax = std::log(config.g_max);
        for (int i = 0; i < n; ++i) g[i] = std::exp(lmin + (lmax - lmin) * i / (n - 1));
    } else {
        for (int i = 0; i < n; ++i) {
            g[i] = config.g_min + (config.g_max - config.g_min) * i / (n - 1);
        }
    }
    g.front() = config.g_min;
    g.back() = config.g_max;
    return g;
}

SpectrumResult solve_config(const RunConfig& config, const PotentialSpec& pot, double g) {
    const ProblemSpec problem{pot, g, config.K};
    if (config.omega_mode == "fixed") {
        return diagonalize(problem, config.omega_value, config.n_states);
    }
    return solve(problem, config.n_states);
}

MetaBlock base_meta(const RunConfig& config, const PotentialSpec& pot) {
    MetaBlock meta;
    meta.emplace_back("potential", config.potential);
    if (pot.a) meta.emplace_back("a", format_float(*pot.a));
    if (config.potential == "poly") {
        std::string joined;
        for (std::size_t k = 0; k < pot.coeffs.size(); ++k) {
            if (k > 0) joined += ' ';
            joined += format_float(pot.coeffs[k]);
        }
        meta.emplace_back("coeffs", joined);
    }
    meta.emplace_back("K", std::to_string(config.K));
    meta.emplace_back("n_states", std::to_string(config.n_states));
    meta.emplace_back("omega_mode", config.omega_mode);
    if (config.omega_mode == "fixed") meta.emplace_back("omega", format_float(config.omega_value));
    return meta;
}

std::vector<std::string> row_columns(const RunConfig& config, bool with_status) {
    std::vector<std::string> cols{"g"};
    for (int i = 0; i < config.n_states; ++i) cols.push_back("E_" + std::to_string(i));
    for (const char* c : {"lambda_0", "lambda_1", "lambda_2", "S", "omega", "K", "D"}) {
        cols.emplace_back(c);
    }
    if (with_status) cols.emplace_back("status");
    return cols;
}

std::vector<std::string> spectrum_row(const RunConfig& config, double g,
                                      const SpectrumResult& s) {
    const double qnan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> row;
    row.push_back(format_float(g));
    for (int i = 0; i < config.n_states; ++i) {
        row.push_back(
            format_float(i < static_cast<int>(s.energies.size()) ? s.energies[i] : qnan));
    }
    const std::vector<double> A = a_matrix(s.vectors[0], config.K);
    const SchmidtDecomposition sd = schmidt(A, config.K, s.omega);
    for (int l = 0; l < 3; ++l) {
        row.push_back(format_float(l < config.K ? sd.lambda[l] : 0.0));
    }
    row.push_back(format_float(entanglement_entropy(sd)));
    row.push_back(format_float(s.omega));
    row.push_back(std::to_string(s.K));
    row.push_back(std::to_string(s.D));
    return row;
}

std::vector<std::string> failed_row(const RunConfig& config, double g,
                                    const std::string& message) {
    const std::string nan_cell = format_float(std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> row;
    row.push_back(format_float(g));
    for (int i = 0; i < config.n_states + 5; ++i) row.push_back(nan_cell);
    row.push_back(std::to_string(config.K));
    row.push_back(std::to_string(config.K * (config.K + 1) / 2));
    row.push_back("error: " + sanitize(message));
    return row;
}

std::string write_table(const RunConfig& config, const Table& table,
                        const std::string& stem) {
    std::filesystem::create_directories(config.out_dir);
    const std::string ext = config.format == "json" ? ".json" : ".csv";
    const std::string path =
        (std::filesystem::path(config.out_dir) / (stem + ext)).string();
    write_file(path, config.format == "json" ? to_json(table) : to_csv(table));
    return path;
}

std::vector<double> density_grid(const RunConfig& config, const PotentialSpec& pot,
                                 double omega) {
    if (config.grid_L > 0.0) {
        const int npts = config.density_points;
        std::vector<double> x(npts);
        for (int r = 0; r < npts; ++r) {
            x[r] = -config.grid_L + 2.0 * config.grid_L * r / (npts - 1);
        }
        return x;
    }
    return default_grid(pot, omega, config.density_points);
}

}  // namespace

void validate(const RunConfig& config) {
    const std::string& p = config.potential;
    if (p != "harmonic" && p != "double_well" && p != "triple_well" && p != "poly") {
        throw ConfigError("unknown potential: " + p);
    }
    if (p == "poly" && config.coeffs.empty()) {
        throw ConfigError("poly potential needs explicit coefficients");
    }
    if (config.K < 1) throw ConfigError("K must be at least 1");
    if (config.n_states < 1) throw ConfigError("n_states must be at least 1");
    if (config.n_orbitals < 1) throw ConfigError("n_orbitals must be at least 1");
    if (config.omega_mode != "auto" && config.omega_mode != "fixed") {
        throw ConfigError("omega mode must be auto or fixed");
    }
    if (config.omega_mode == "fixed" && !(config.omega_value > 0.0)) {
        throw ConfigError("fixed omega must be positive");
    }
    if (config.format != "csv" && config.format != "json") {
        throw ConfigError("format must be csv or json");
    }
    if (config.grid_L < 0.0) throw ConfigError("grid half-width must be positive");
    if (config.grid_M != 0 && (config.grid_M < 3 || config.grid_M % 2 == 0)) {
        throw ConfigError("grid point count must be odd and at least 3");
    }
    if (config.density_points < 2) throw ConfigError("density grid needs at least 2 points");
    if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
        throw ConfigError("crossover threshold must be in (0, 1)");
    }
    const std::string& o = config.oracle_type;
    if (o != "tg" && o != "exact-harmonic" && o != "grid1d" && o != "grid2d") {
        throw ConfigError("unknown oracle type: " + o);
    }
    if (config.workers < 0) throw ConfigError("workers must be non-negative");
}

PotentialSpec potential_from(const RunConfig& config) {
    if (config.potential == "harmonic") return make_harmonic();
    if (config.potential == "double_well") return make_double_well(config.a);
    if (config.potential == "triple_well") return make_triple_well(config.a);
    if (config.potential == "poly") return make_polynomial(config.coeffs);
    throw ConfigError("unknown potential: " + config.potential);
}

RunOutput run_solve(const RunConfig& config) {
    validate(config);
    const PotentialSpec pot = potential_from(config);
    const SpectrumResult s = solve_config(config, pot, config.g);

    Table table;
    table.meta = base_meta(config, pot);
    table.meta.emplace_back("g", format_float(config.g));
    table.meta.emplace_back("D", std::to_string(s.D));
    table.meta.emplace_back("trace", format_float(s.trace));
    table.meta.emplace_back("omega_iterations", std::to_string(s.omega_iterations));
    table.meta.emplace_back("version", kVersion);
    table.columns = row_columns(config, false);
    table.rows.push_back(spectrum_row(config, config.g, s));

    RunOutput out;
    out.files.push_back(write_table(config, table, "solve"));
    return out;
}

RunOutput run_sweep(const RunConfig& config) {
    validate(config);
    const PotentialSpec pot = potential_from(config);
    const std::vector<double> gs = g_values(config);
    const int npts = static_cast<int>(gs.size());
    std::vector<std::vector<std::string>> rows(npts);
    const int workers = std::max(1, config.workers);

#pragma omp parallel for num_threads(workers) schedule(static) if (config.workers > 1)
    for (int p = 0; p < npts; ++p) {
        try {
            const SpectrumResult s = solve_config(config, pot, gs[p]);
            rows[p] = spectrum_row(config, gs[p], s);
            rows[p].push_back("ok");
        } catch (const std::exception& e) {
            rows[p] = failed_row(config, gs[p], e.what());
        }
    }

    Table table;
    table.meta = base_meta(config, pot);
    table.meta.emplace_back("g_min", format_float(config.g_min));
    table.meta.emplace_back("g_max", format_float(config.g_max));
    table.meta.emplace_back("g_points", std::to_string(config.g_points));
    table.meta.emplace_back("spacing", config.log_spacing ? "log" : "linear");
    table.meta.emplace_back("version", kVersion);
    table.columns = row_columns(config, true);
    table.rows = std::move(rows);

    RunOutput out;
    out.files.push_back(write_table(config, table, "sweep"));
    return out;
}

CrossoverResult run_crossover(const RunConfig& config, RunOutput* out) {
    validate(config);
    if (!(config.g_max > config.g_min)) throw ConfigError("crossover needs g_max > g_min");
    const PotentialSpec pot = potential_from(config);

    auto dval = [&](double g) {
        const SpectrumResult s = solve_config(config, pot, g);
        const std::vector<double> A = a_matrix(s.vectors[0], config.K);
        const SchmidtDecomposition sd = schmidt(A, config.K, s.omega);
        const double l1 = config.K > 1 ? sd.lambda[1] : 0.0;
        return sd.lambda[0] - l1;
    };

    double lo = config.g_min;
    double hi = config.g_max;
    double flo = dval(lo) - config.threshold;
    double fhi = dval(hi) - config.threshold;
    if (flo * fhi > 0.0) {
        throw ConfigError("no crossover bracket: occupancy gap minus threshold is " +
                          format_float(flo) + " at g_min and " + format_float(fhi) +
                          " at g_max");
    }
    int iter = 0;
    while (hi - lo > 1e-6 * std::abs(hi) + 1e-12 && iter < 200) {
        const double mid = 0.5 * (lo + hi);
        const double fm = dval(mid) - config.threshold;
        ++iter;
        if (fm == 0.0) {
            lo = mid;
            hi = mid;
            flo = fm;
            fhi = fm;
            break;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    CrossoverResult result;
    result.g_cr = 0.5 * (lo + hi);
    result.g_lo = lo;
    result.g_hi = hi;
    result.d_lo = flo + config.threshold;
    result.d_hi = fhi + config.threshold;
    result.iterations = iter;

    Table table;
    table.meta = base_meta(config, pot);
    table.meta.emplace_back("threshold", format_float(config.threshold));
    table.meta.emplace_back("g_min", format_float(config.g_min));
    table.meta.emplace_back("g_max", format_float(config.g_max));
    table.meta.emplace_back("version", kVersion);
    table.columns = {"g_cr", "g_lo", "g_hi", "d_lo", "d_hi", "iterations"};
    table.rows.push_back({format_float(result.g_cr), format_float(result.g_lo),
                          format_float(result.g_hi), format_float(result.d_lo),
                          format_float(result.d_hi), std::to_string(result.iterations)});
    const std::string path = write_table(config, table, "crossover");
    if (out) out->files.push_back(path);
    return result;
}

RunOutput run_density(const RunConfig& config) {
    validate(config);
    const PotentialSpec pot = potential_from(config);
    const SpectrumResult s = solve_config(config, pot, config.g);
    const std::vector<double> A = a_matrix(s.vectors[0], config.K);
    const SchmidtDecomposition sd = schmidt(A, config.K, s.omega);
    const std::vector<double> x = density_grid(config, pot, s.omega);
    const DensityField pair = pair_density(A, config.K, s.omega, x, true);
    const DensityField rho = one_body_density(sd, x);
    const int npts = static_cast<int>(x.size());

    RunOutput out;
    {
        Table table;
        table.meta = base_meta(config, pot);
        table.meta.emplace_back("g", format_float(config.g));
        table.meta.emplace_back("omega", format_float(s.omega));
        table.meta.emplace_back("integral", format_float(pair.integral));
        table.meta.emplace_back("grid_warning", pair.grid_warning ? "1" : "0");
        table.meta.emplace_back("version", kVersion);
        table.columns = {"x1", "x2", "density"};
        table.rows.reserve(static_cast<std::size_t>(npts) * npts);
        for (int r = 0; r < npts; ++r) {
            for (int c = 0; c < npts; ++c) {
                table.rows.push_back(
                    {format_float(x[r]), format_float(x[c]),
                     format_float(pair.values[static_cast<std::size_t>(r) * npts + c])});
            }
        }
        out.files.push_back(write_table(config, table, "density_pair"));
    }
    {
        Table table;
        table.meta = base_meta(config, pot);
        table.meta.emplace_back("g", format_float(config.g));
        table.meta.emplace_back("omega", format_float(s.omega));
        table.meta.emplace_back("integral", format_float(rho.integral));
        table.meta.emplace_back("grid_warning", rho.grid_warning ? "1" : "0");
        table.meta.emplace_back("version", kVersion);
        table.columns = {"x", "density"};
        for (int r = 0; r < npts; ++r) {
            table.rows.push_back({format_float(x[r]), format_float(rho.values[r])});
        }
        out.files.push_back(write_table(config, table, "density_one_body"));
    }
    return out;
}

RunOutput run_orbitals(const RunConfig& config) {
    validate(config);
    const PotentialSpec pot = potential_from(config);
    const SpectrumResult s = solve_config(config, pot, config.g);
    const std::vector<double> A = a_matrix(s.vectors[0], config.K);
    const SchmidtDecomposition sd = schmidt(A, config.K, s.omega);
    const std::vector<double> x = density_grid(config, pot, s.omega);
    const int npts = static_cast<int>(x.size());
    const int n_orb = std::min(config.n_orbitals, config.K);

    const BasisSet basis(s.omega, config.K);
    const std::vector<double> B = basis_on_grid(basis, x);

    Table table;
    table.meta = base_meta(config, pot);
    table.meta.emplace_back("g", format_float(config.g));
    table.meta.emplace_back("omega", format_float(s.omega));
    for (int l = 0; l < n_orb; ++l) {
        table.meta.emplace_back("lambda_" + std::to_string(l), format_float(sd.lambda[l]));
    }
    table.meta.emplace_back("S", format_float(entanglement_entropy(sd)));
    table.meta.emplace_back("version", kVersion);

    table.columns = {"x"};
    for (int l = 0; l < n_orb; ++l) table.columns.push_back("v_" + std::to_string(l));
    for (int r = 0; r < npts; ++r) {
        std::vector<std::string> row{format_float(x[r])};
        for (int l = 0; l < n_orb; ++l) {
            const double* p = &sd.orbitals[static_cast<std::size_t>(l) * config.K];
            double v = 0.0;
            for (int n = 0; n < config.K; ++n) {
                v += p[n] * B[static_cast<std::size_t>(r) * config.K + n];
            }
            row.push_back(format_float(v));
        }
        table.rows.push_back(std::move(row));
    }

    RunOutput out;
    out.files.push_back(write_table(config, table, "orbitals"));
    return out;
}

RunOutput run_oracle(const RunConfig& config) {
    validate(config);
    const PotentialSpec pot = potential_from(config);
    const int default_M = config.oracle_type == "grid2d" ? 201 : 801;
    const Grid grid(config.grid_L > 0.0 ? config.grid_L : 8.0,
                    config.grid_M != 0 ? config.grid_M : default_M);

    Table table;
    table.meta = base_meta(config, pot);
    table.meta.emplace_back("oracle", config.oracle_type);
    table.meta.emplace_back("L", format_float(grid.L));
    table.meta.emplace_back("M", std::to_string(grid.M));

    if (config.oracle_type == "tg") {
        const GridWavefunction2D psi = tg_ground(pot, grid);
        const KernelOccupancies occ = kernel_occupancies(psi, std::min(8, grid.M));
        table.meta.emplace_back("version", kVersion);
        table.columns = {"l", "lambda", "k"};
        for (std::size_t l = 0; l < occ.lambda.size(); ++l) {
            table.rows.push_back({std::to_string(l), format_float(occ.lambda[l]),
                                  format_float(occ.k[l])});
        }
    } else if (config.oracle_type == "exact-harmonic") {
        const ExactHarmonicResult r =
            harmonic_exact_ground(pot, config.g, grid, config.n_states);
        table.meta.emplace_back("g", format_float(config.g));
        table.meta.emplace_back("version", kVersion);
        table.columns = {"state", "energy", "energy_raw"};
        for (std::size_t s = 0; s < r.energies.size(); ++s) {
            table.rows.push_back({std::to_string(s), format_float(r.energies[s]),
                                  format_float(r.energies_raw[s])});
        }
    } else if (config.oracle_type == "grid1d") {
        const SingleParticleResult r = grid_single_particle(pot, grid, config.n_states);
        table.meta.emplace_back("boundary_warning", r.boundary_warning ? "1" : "0");
        table.meta.emplace_back("version", kVersion);
        table.columns = {"state", "energy"};
        for (std::size_t s = 0; s < r.energies.size(); ++s) {
            table.rows.push_back({std::to_string(s), format_float(r.energies[s])});
        }
    } else {
        const TwoParticleGridResult r =
            grid_two_particle(pot, config.g, grid, config.n_states);
        const KernelOccupancies occ =
            kernel_occupancies(r.states[0], std::min(3, grid.M));
        table.meta.emplace_back("g", format_float(config.g));
        table.meta.emplace_back("iterations", std::to_string(r.iterations));
        table.meta.emplace_back("max_residual", format_float(r.max_residual));
        for (std::size_t l = 0; l < occ.lambda.size(); ++l) {
            table.meta.emplace_back("lambda_" + std::to_string(l),
                                    format_float(occ.lambda[l]));
        }
        table.meta.emplace_back("version", kVersion);
        table.columns = {"state", "energy"};
        for (std::size_t s = 0; s < r.energies.size(); ++s) {
            table.rows.push_back({std::to_string(s), format_float(r.energies[s])});
        }
    }

    RunOutput out;
    out.files.push_back(write_table(config, table, "oracle"));
    return out;
}

}  // namespace tbci
