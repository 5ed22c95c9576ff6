// Command-line front end: sample equitable graphs, evaluate the closed-form
// core-periphery law, sweep the block cavity density, and compare sampled
// spectra against the analytic curve. Every run writes a manifest next to
// its outputs so results can be reproduced byte for byte.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "equispec/equispec.hpp"

namespace {

using equispec::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_infeasible = 2;
constexpr int exit_sampling = 3;
constexpr int exit_solver = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec grid;
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw UsageError("grid must be lo:hi:npoints, got '" + text + "'");
    }
    try {
        grid.lo = std::stod(text.substr(0, first));
        grid.hi = std::stod(text.substr(first + 1, second - first - 1));
        grid.points = std::stoi(text.substr(second + 1));
    } catch (const std::exception&) {
        throw UsageError("grid must be lo:hi:npoints, got '" + text + "'");
    }
    if (!std::isfinite(grid.lo) || !std::isfinite(grid.hi) ||
        grid.points < 2 || !(grid.lo < grid.hi)) {
        throw UsageError("grid needs finite lo < hi and npoints >= 2");
    }
    return grid;
}

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct StructureArgs {
    std::string file;
    int core = 0;
    int k = -1;
    int kp = -1;

    bool inline_given() const { return core > 0 || k >= 0 || kp >= 0; }

    equispec::BlockStructure resolve() const {
        if (!file.empty()) {
            if (inline_given()) {
                throw UsageError("give either --structure or --core/--k/--kp");
            }
            json parsed;
            try {
                parsed = json::parse(equispec::read_text_file(file));
            } catch (const std::exception& e) {
                throw UsageError("cannot read structure file: " +
                                 std::string(e.what()));
            }
            try {
                return equispec::structure_from_json(parsed);
            } catch (const std::exception& e) {
                throw UsageError("structure file needs sizes + connectivity: " +
                                 std::string(e.what()));
            }
        }
        if (core <= 0 || k < 0 || kp < 0) {
            throw UsageError(
                "structure missing: give --structure FILE or all of "
                "--core/--k/--kp");
        }
        return equispec::CorePeripheryParams{k, kp, core}.structure();
    }

    json config() const {
        if (!file.empty()) return json{{"structure_file", file}};
        return json{{"core", core}, {"k", k}, {"kp", kp}};
    }
};

void write_manifest(const std::string& prefix, const std::string& command,
                    json config, const std::vector<std::string>& outputs) {
    json manifest{{"command", command},
                  {"version", equispec::version},
                  {"config", std::move(config)},
                  {"outputs", outputs}};
    equispec::write_text_file(prefix + ".manifest.json", manifest.dump(2) + "\n");
}

struct CommonArgs {
    std::string out = "equispec";
    int threads = default_threads();
    std::uint64_t seed = 0;
    bool seed_given = false;

    /// --seed wins; EQUISPEC_SEED is the fallback for scripted runs.
    std::uint64_t require_seed() {
        if (seed_given) return seed;
        if (const char* env = std::getenv("EQUISPEC_SEED")) {
            try {
                seed = std::stoull(env);
                seed_given = true;
                return seed;
            } catch (const std::exception&) {
                throw UsageError("EQUISPEC_SEED is not an integer: " +
                                 std::string(env));
            }
        }
        throw UsageError("stochastic subcommand: give --seed or set "
                         "EQUISPEC_SEED");
    }
};

int run_generate(CommonArgs& common, const StructureArgs& structure_args) {
    common.require_seed();
    const auto structure = structure_args.resolve();
    const auto graph = equispec::generate_equitable(structure, common.seed);

    const std::string edges_path = common.out + ".edges";
    const std::string blocks_path = common.out + ".blocks";
    equispec::write_with(edges_path, [&](std::ostream& out) {
        equispec::write_edge_list(out, graph, common.seed);
    });
    equispec::write_with(blocks_path, [&](std::ostream& out) {
        equispec::write_block_assignment(out, graph);
    });

    json config = structure_args.config();
    config["seed"] = common.seed;
    write_manifest(common.out, "generate", std::move(config),
                   {edges_path, blocks_path});
    std::cout << "wrote " << edges_path << " (" << graph.num_vertices()
              << " vertices, " << graph.edges.size() << " edges)\n";
    return exit_ok;
}

int run_analytic(const CommonArgs& common, int k, int kp, int n_core,
                 const std::string& grid_text) {
    const GridSpec grid = parse_grid(grid_text);

    equispec::DensityCurve curve;
    curve.epsilon = 0.0;
    curve.provenance =
        describe(equispec::CorePeripheryParams{k, kp, n_core}.structure());
    const double step = (grid.hi - grid.lo) / (grid.points - 1);
    for (int i = 0; i < grid.points; ++i) {
        const double lambda = grid.lo + i * step;
        curve.lambdas.push_back(lambda);
        curve.rho.push_back(equispec::analytic_density(lambda, k, kp));
    }

    json summary_json;
    if (kp >= 1) {
        summary_json = to_json(equispec::spectral_summary(k, kp, n_core));
    } else {
        // Degenerate k-regular case: a single band, one Perron eigenvalue,
        // no kernel point mass.
        const auto support = equispec::support_intervals(k, 0);
        summary_json = json{{"k", k},
                            {"kp", 0},
                            {"n_core", n_core},
                            {"support", json::array({json::array(
                                            {support[0].lo, support[0].hi})})},
                            {"lambda_minus", nullptr},
                            {"lambda_plus", static_cast<double>(k)},
                            {"zero_multiplicity", 0},
                            {"continuous_fraction",
                             (n_core - 1.0) / static_cast<double>(n_core)}};
    }

    const std::string density_path = common.out + ".density.csv";
    const std::string summary_path = common.out + ".summary.json";
    equispec::write_with(density_path, [&](std::ostream& out) {
        equispec::write_density_csv(out, curve);
    });
    equispec::write_text_file(summary_path, summary_json.dump(2) + "\n");

    write_manifest(common.out, "analytic",
                   json{{"k", k},
                        {"kp", kp},
                        {"n_core", n_core},
                        {"grid", grid_text}},
                   {density_path, summary_path});
    std::cout << "wrote " << density_path << " (" << curve.lambdas.size()
              << " points)\n";
    return exit_ok;
}

int run_cavity(const CommonArgs& common, const StructureArgs& structure_args,
               const std::string& grid_text, double epsilon,
               const equispec::CavityOptions& options) {
    const GridSpec grid = parse_grid(grid_text);
    const auto structure = structure_args.resolve();

    const auto curve =
        equispec::density_grid(structure, grid.lo, grid.hi, grid.points,
                               epsilon, options, common.threads);
    for (const auto& failure : curve.failures) {
        std::cerr << "point lambda=" << failure.lambda
                  << " skipped: " << failure.reason << "\n";
    }
    if (curve.lambdas.empty()) {
        std::cerr << "all " << grid.points << " grid points failed\n";
        return exit_solver;
    }

    const std::string density_path = common.out + ".density.csv";
    const std::string sidecar_path = common.out + ".density.json";
    equispec::write_with(density_path, [&](std::ostream& out) {
        equispec::write_density_csv(out, curve);
    });
    equispec::write_text_file(
        sidecar_path,
        curve_sidecar_json(curve, structure, options).dump(2) + "\n");

    json config = structure_args.config();
    config["grid"] = grid_text;
    config["epsilon"] = epsilon;
    config["tol"] = options.tol;
    config["damping"] = options.damping;
    config["max_iter"] = options.max_iter;
    config["threads"] = common.threads;
    write_manifest(common.out, "cavity", std::move(config),
                   {density_path, sidecar_path});
    std::cout << "wrote " << density_path << " (" << curve.lambdas.size()
              << " points, " << curve.failures.size() << " failed)\n";
    return exit_ok;
}

int run_compare(CommonArgs& common, int k, int kp, int n_core,
                int samples, int bins, double zero_tol, double isolated_tol) {
    common.require_seed();
    if (samples < 1) {
        throw UsageError("compare needs --samples >= 1");
    }
    if (kp < 1) {
        throw UsageError("compare targets the two-block class: --kp >= 1");
    }
    const equispec::CorePeripheryParams params{k, kp, n_core};
    equispec::check_core_periphery(params);

    equispec::EnsembleOptions options;
    options.zero_tol = zero_tol;
    options.isolated_tol = isolated_tol;
    options.threads = common.threads;
    const auto spectrum = equispec::ensemble_spectrum(
        params.structure(), samples, common.seed, options);

    const auto comparison = equispec::compare(
        spectrum,
        [k, kp](double x) { return equispec::analytic_density(x, k, kp); },
        equispec::support_intervals(k, kp), bins);

    const std::string spectrum_path = common.out + ".spectrum.csv";
    const std::string hist_path = common.out + ".hist.csv";
    const std::string hist_json_path = common.out + ".hist.json";
    equispec::write_with(spectrum_path, [&](std::ostream& out) {
        equispec::write_spectrum_csv(out, spectrum);
    });
    equispec::write_with(hist_path, [&](std::ostream& out) {
        equispec::write_histogram_csv(out, comparison);
    });
    equispec::write_text_file(
        hist_json_path, comparison_json(comparison, spectrum).dump(2) + "\n");

    write_manifest(common.out, "compare",
                   json{{"k", k},
                        {"kp", kp},
                        {"core", n_core},
                        {"samples", samples},
                        {"seed", common.seed},
                        {"bins", bins},
                        {"zero_tol", zero_tol},
                        {"isolated_tol", isolated_tol},
                        {"threads", common.threads}},
                   {spectrum_path, hist_path, hist_json_path});

    std::cout << "l1 = " << equispec::format_double(comparison.l1_distance)
              << "\n";
    std::cout << "sup_cdf = "
              << equispec::format_double(comparison.sup_cdf_distance) << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equitable block-regular graphs and their spectral densities"};
    app.require_subcommand(1);

    CommonArgs common;
    StructureArgs structure_args;
    std::string grid_text;
    double epsilon = 1e-3;
    equispec::CavityOptions cavity_options;
    int k = 10;
    int kp = 4;
    int n_core = 500;
    int samples = 1;
    int bins = 0;
    double zero_tol = 1e-8;
    double isolated_tol = 1e-6;

    auto add_common = [&](CLI::App* cmd, bool stochastic, bool threaded) {
        cmd->add_option("--out", common.out, "output path prefix")
            ->capture_default_str();
        if (threaded) {
            cmd->add_option("--threads", common.threads,
                            "worker threads (default: available parallelism)");
        }
        if (stochastic) {
            cmd->add_option("--seed", common.seed,
                            "random seed (fallback: EQUISPEC_SEED)")
                ->each([&](const std::string&) { common.seed_given = true; });
        }
    };
    auto add_structure = [&](CLI::App* cmd) {
        cmd->add_option("--structure", structure_args.file,
                        "JSON file with {sizes, connectivity}");
        cmd->add_option("--core", structure_args.core, "core size N_c");
        cmd->add_option("--k", structure_args.k, "core-core degree");
        cmd->add_option("--kp", structure_args.kp, "core-periphery degree");
    };

    auto* generate = app.add_subcommand(
        "generate", "sample an equitable graph, write edge list + blocks");
    add_common(generate, true, false);
    add_structure(generate);

    auto* analytic = app.add_subcommand(
        "analytic", "closed-form core-periphery density curve + summary");
    add_common(analytic, false, false);
    analytic->add_option("--k", k, "core-core degree")->capture_default_str();
    analytic->add_option("--kp", kp, "core-periphery degree (0 = regular)")
        ->capture_default_str();
    analytic->add_option("--core", n_core, "core size N_c (for the summary)")
        ->capture_default_str();
    analytic->add_option("--grid", grid_text, "lo:hi:npoints")->required();

    auto* cavity = app.add_subcommand(
        "cavity", "numeric density from the block cavity fixed point");
    add_common(cavity, false, true);
    add_structure(cavity);
    cavity->add_option("--grid", grid_text, "lo:hi:npoints")->required();
    cavity->add_option("--epsilon", epsilon, "spectral regularizer")
        ->capture_default_str();
    cavity->add_option("--tol", cavity_options.tol, "fixed-point tolerance")
        ->capture_default_str();
    cavity->add_option("--damping", cavity_options.damping, "update damping")
        ->capture_default_str();
    cavity->add_option("--max-iter", cavity_options.max_iter,
                       "sweep budget per point")
        ->capture_default_str();

    auto* compare = app.add_subcommand(
        "compare", "ensemble diagonalization vs the analytic density");
    add_common(compare, true, true);
    compare->add_option("--k", k, "core-core degree")->capture_default_str();
    compare->add_option("--kp", kp, "core-periphery degree")
        ->capture_default_str();
    compare->add_option("--core", n_core, "core size N_c")
        ->capture_default_str();
    compare->add_option("--samples", samples, "ensemble size")
        ->capture_default_str();
    compare->add_option("--bins", bins,
                        "histogram bins (0 = Freedman-Diaconis)")
        ->capture_default_str();
    compare->add_option("--zero-tol", zero_tol, "zero classification threshold")
        ->capture_default_str();
    compare->add_option("--isolated-tol", isolated_tol,
                        "isolated classification threshold")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (generate->parsed()) return run_generate(common, structure_args);
        if (analytic->parsed()) return run_analytic(common, k, kp, n_core,
                                                    grid_text);
        if (cavity->parsed()) return run_cavity(common, structure_args,
                                                grid_text, epsilon,
                                                cavity_options);
        return run_compare(common, k, kp, n_core, samples, bins, zero_tol,
                           isolated_tol);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const equispec::SamplingError& e) {
        std::cerr << "sampling failure: " << e.what() << "\n";
        return exit_sampling;
    } catch (const equispec::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_infeasible;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_infeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const equispec::ConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
