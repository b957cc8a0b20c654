#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tbci/errors.hpp"
#include "tbci/run.hpp"
#include "tbci/version.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& val) {
    char* end = nullptr;
    const double v = std::strtod(val.c_str(), &end);
    if (val.empty() || end != val.c_str() + val.size()) {
        throw tbci::ConfigError("config key " + key + ": expected a number, got '" + val + "'");
    }
    return v;
}

int to_int(const std::string& key, const std::string& val) {
    char* end = nullptr;
    const long v = std::strtol(val.c_str(), &end, 10);
    if (val.empty() || end != val.c_str() + val.size()) {
        throw tbci::ConfigError("config key " + key + ": expected an integer, got '" + val +
                                "'");
    }
    return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& val) {
    if (val == "true" || val == "1") return true;
    if (val == "false" || val == "0") return false;
    throw tbci::ConfigError("config key " + key + ": expected true or false, got '" + val + "'");
}

std::vector<double> to_doubles(const std::string& key, std::string val) {
    for (char& c : val) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(val);
    std::vector<double> out;
    std::string token;
    while (in >> token) out.push_back(to_double(key, token));
    if (out.empty()) {
        throw tbci::ConfigError("config key " + key + ": expected at least one number");
    }
    return out;
}

// Plain key = value file using the long option names; '#' starts a comment.
// Values given on the command line keep priority over the file.
void apply_config_file(const std::string& path, const CLI::App* sub, tbci::RunConfig& config,
                       std::string& omega_flag) {
    std::ifstream in(path);
    if (!in) throw tbci::ConfigError("cannot open config file: " + path);

    const auto flag_set = [&](const char* name) {
        const CLI::Option* o = sub->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw tbci::ConfigError(path + ":" + std::to_string(lineno) +
                                    ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        std::string val = trim(stripped.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') {
            val = val.substr(1, val.size() - 2);
        }

        if (key == "potential") {
            if (!flag_set("--potential")) config.potential = val;
        } else if (key == "a" || key == "well-parameter") {
            if (!flag_set("--a")) config.a = to_double(key, val);
        } else if (key == "coeffs") {
            if (!flag_set("--coeffs")) config.coeffs = to_doubles(key, val);
        } else if (key == "g" || key == "interaction") {
            if (!flag_set("--g")) config.g = to_double(key, val);
        } else if (key == "K" || key == "basis-size") {
            if (!flag_set("--K")) config.K = to_int(key, val);
        } else if (key == "n-states") {
            if (!flag_set("--n-states")) config.n_states = to_int(key, val);
        } else if (key == "omega") {
            if (!flag_set("--omega")) omega_flag = val;
        } else if (key == "grid-L") {
            if (!flag_set("--grid-L")) config.grid_L = to_double(key, val);
        } else if (key == "grid-M") {
            if (!flag_set("--grid-M")) config.grid_M = to_int(key, val);
        } else if (key == "density-points") {
            if (!flag_set("--density-points")) config.density_points = to_int(key, val);
        } else if (key == "n-orbitals") {
            if (!flag_set("--n-orbitals")) config.n_orbitals = to_int(key, val);
        } else if (key == "out-dir") {
            if (!flag_set("--out-dir")) config.out_dir = val;
        } else if (key == "format") {
            if (!flag_set("--format")) config.format = val;
        } else if (key == "workers") {
            if (!flag_set("--workers")) config.workers = to_int(key, val);
        } else if (key == "g-min") {
            if (!flag_set("--g-min")) config.g_min = to_double(key, val);
        } else if (key == "g-max") {
            if (!flag_set("--g-max")) config.g_max = to_double(key, val);
        } else if (key == "g-points") {
            if (!flag_set("--g-points")) config.g_points = to_int(key, val);
        } else if (key == "log-spacing") {
            if (!flag_set("--log-spacing")) config.log_spacing = to_bool(key, val);
        } else if (key == "threshold") {
            if (!flag_set("--threshold")) config.threshold = to_double(key, val);
        } else if (key == "type" || key == "oracle") {
            if (!flag_set("--type")) config.oracle_type = val;
        } else {
            throw tbci::ConfigError(path + ":" + std::to_string(lineno) +
                                    ": unknown config key '" + key + "'");
        }
    }
}

// exit codes: 0 success, 1 invalid input, 2 numerical failure
int dispatch(const std::string& command, tbci::RunConfig& config,
             const std::string& omega_flag) {
    if (omega_flag == "auto") {
        config.omega_mode = "auto";
    } else {
        char* end = nullptr;
        const double value = std::strtod(omega_flag.c_str(), &end);
        if (end != omega_flag.c_str() + omega_flag.size() || !(value > 0.0)) {
            throw tbci::ConfigError("--omega expects 'auto' or a positive number, got '" +
                                    omega_flag + "'");
        }
        config.omega_mode = "fixed";
        config.omega_value = value;
    }

    tbci::RunOutput out;
    if (command == "solve") {
        out = tbci::run_solve(config);
    } else if (command == "sweep") {
        out = tbci::run_sweep(config);
    } else if (command == "crossover") {
        const tbci::CrossoverResult r = tbci::run_crossover(config, &out);
        std::printf("g_cr = %.16e in [%.16e, %.16e] after %d bisections\n", r.g_cr, r.g_lo,
                    r.g_hi, r.iterations);
    } else if (command == "density") {
        out = tbci::run_density(config);
    } else if (command == "orbitals") {
        out = tbci::run_orbitals(config);
    } else {
        out = tbci::run_oracle(config);
    }
    for (const std::string& path : out.files) std::printf("wrote %s\n", path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // keep BLAS single-threaded; all parallelism is explicit OpenMP
    openblas_set_num_threads(1);

    CLI::App app{"two interacting bosons in polynomial traps"};
    app.set_version_flag("--version", std::string(tbci::kVersion));
    app.require_subcommand(1);

    tbci::RunConfig config;
    std::string omega_flag = "auto";
    std::string config_file;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--potential", config.potential,
                        "trap: harmonic, double_well, triple_well or poly");
        sub->add_option("-a,--a,--well-parameter", config.a,
                        "shape parameter of the named wells");
        sub->add_option("--coeffs", config.coeffs, "polynomial coefficients c0 c1 ...")
            ->delimiter(',');
        sub->add_option("-g,--g,--interaction", config.g, "contact interaction strength");
        sub->add_option("-K,--K,--basis-size", config.K, "one-particle basis cutoff");
        sub->add_option("--n-states", config.n_states, "number of eigenstates to report");
        sub->add_option("--omega", omega_flag, "basis frequency: auto or a fixed value");
        sub->add_option("--grid-L", config.grid_L, "override grid half-width");
        sub->add_option("--grid-M", config.grid_M, "override grid point count (odd)");
        sub->add_option("--density-points", config.density_points,
                        "sample count for density and orbital grids");
        sub->add_option("--n-orbitals", config.n_orbitals, "natural orbitals to write");
        sub->add_option("--out-dir", config.out_dir, "output directory");
        sub->add_option("--format", config.format, "output format: csv or json");
        sub->add_option("--workers", config.workers, "parallel sweep workers (0 = serial)");
        sub->add_option("--config", config_file,
                        "key=value configuration file; flags win on conflict");
    };
    auto add_range = [&](CLI::App* sub) {
        sub->add_option("--g-min", config.g_min, "lowest interaction strength");
        sub->add_option("--g-max", config.g_max, "highest interaction strength");
        sub->add_flag("--log-spacing", config.log_spacing, "space sweep points geometrically");
    };

    CLI::App* solve = app.add_subcommand("solve", "spectrum and occupancies at one g");
    CLI::App* sweep = app.add_subcommand("sweep", "scan a range of interaction strengths");
    CLI::App* crossover =
        app.add_subcommand("crossover", "bisect for the occupancy crossover point");
    CLI::App* density = app.add_subcommand("density", "pair and one-body density profiles");
    CLI::App* orbitals = app.add_subcommand("orbitals", "natural orbital profiles");
    CLI::App* oracle = app.add_subcommand("oracle", "independent grid reference solvers");

    for (CLI::App* sub : {solve, sweep, crossover, density, orbitals, oracle}) {
        add_common(sub);
    }
    add_range(sweep);
    add_range(crossover);
    sweep->add_option("--g-points", config.g_points, "number of sweep points");
    crossover->add_option("--threshold", config.threshold,
                          "occupancy gap defining the crossover");
    oracle->add_option("--type,--oracle", config.oracle_type,
                       "tg, exact-harmonic, grid1d or grid2d");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        if (!config_file.empty()) apply_config_file(config_file, sub, config, omega_flag);
        return dispatch(sub->get_name(), config, omega_flag);
    } catch (const tbci::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
