// taildep: estimation of max-linear tail dependence structures from data,
// synthetic generation, and seeded Monte Carlo studies.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "taildep/chi.hpp"
#include "taildep/error.hpp"
#include "taildep/htsp.hpp"
#include "taildep/hyperparams.hpp"
#include "taildep/io.hpp"
#include "taildep/mc.hpp"
#include "taildep/metrics.hpp"
#include "taildep/rng.hpp"
#include "taildep/simgen.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParameter = 2;
constexpr int kExitIo = 3;
constexpr int kExitGeneration = 4;

std::string sidecar_path(const std::string& out) {
    fs::path p(out);
    if (p.has_extension() && p.extension() != ".json") {
        p.replace_extension(".json");
        return p.string();
    }
    return out + ".json";
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream file(path);
    if (!file) throw taildep::io_error("cannot open " + path + " for writing");
    file << j.dump(2) << '\n';
}

struct EstimateArgs {
    std::string input;
    std::string out = "ahat.csv";
    std::size_t k = 0;
    double kappa = 0.0;
    bool adaptive = false;
    std::uint64_t seed = 0;
};

int run_estimate(const EstimateArgs& args) {
    const taildep::Matrix raw = taildep::read_csv_matrix(args.input);
    const taildep::DataMatrix data(raw);

    taildep::HyperParams hp;
    const bool has_fixed = args.k > 0 || args.kappa > 0.0;
    if (args.adaptive || !has_fixed) {
        hp = taildep::adaptive_hyperparams(data.n(), data.d());
    } else {
        if (args.k == 0 || args.kappa <= 0.0)
            throw taildep::parameter_error("estimate: pass both --k and --kappa, or --adaptive");
        hp.k = args.k;
        hp.kappa = args.kappa;
        hp.mode = taildep::HyperParams::Mode::fixed;
    }

    const taildep::ChiMatrix chi = taildep::empirical_chi(data, hp.k, args.seed);
    const taildep::HtspEstimate est = taildep::htsp(chi, hp.kappa);

    taildep::write_csv_matrix(args.out, est.a_hat.values());
    json sidecar{{"k_hat", est.purevar.k_hat},
                 {"s_hat", est.s_hat},
                 {"pure_set", est.purevar.pure_set},
                 {"partition", est.purevar.partition},
                 {"clique", est.purevar.clique},
                 {"k_used", hp.k},
                 {"kappa_used", hp.kappa},
                 {"fallback_rows", est.fallback_rows}};
    write_json_file(sidecar_path(args.out), sidecar);

    std::cout << "estimate: n=" << data.n() << " d=" << data.d() << " k=" << hp.k
              << " kappa=" << taildep::format_double(hp.kappa)
              << " -> K_hat=" << est.purevar.k_hat << " s_hat=" << est.s_hat << "\n"
              << "wrote " << args.out << " and " << sidecar_path(args.out) << "\n";
    return kExitOk;
}

struct SimulateArgs {
    std::string model = "max_linear";
    bool noise = false;
    std::size_t d = 10, K = 3, s = 2, n = 1000;
    double eta = 0.2, factor_alpha = 1.0, noise_alpha = 2.0;
    std::uint64_t seed = 0;
    std::string out = "simulated";
};

int run_simulate(const SimulateArgs& args) {
    taildep::ModelSpec spec;
    spec.kind = taildep::model_kind_from_string(args.model);
    spec.noise = args.noise;
    spec.d = args.d;
    spec.K = args.K;
    spec.eta = args.eta;
    spec.s = args.s;
    spec.factor_alpha = args.factor_alpha;
    spec.noise_alpha = args.noise_alpha;
    spec.validate();

    const taildep::LoadingMatrix A = taildep::gen_loading_matrix(spec, args.seed);
    const taildep::DataMatrix data =
        taildep::sample_dataset(A, spec, args.n, taildep::derive_seed(args.seed, 2));

    fs::create_directories(args.out);
    const fs::path dir(args.out);
    taildep::write_csv_matrix((dir / "dataset.csv").string(), data.values());
    taildep::write_csv_matrix((dir / "A.csv").string(), A.values());

    // Pure-variable structure of the generated matrix. The supports (and
    // hence I and the partition) are the same for the implied tail matrix at
    // any factor tail index.
    std::vector<std::vector<std::size_t>> partition(spec.K);
    std::vector<std::size_t> pure_set;
    for (std::size_t j = 0; j < A.d(); ++j) {
        std::size_t nonzero = 0, factor = 0;
        for (std::size_t a = 0; a < A.factors(); ++a) {
            if (A(j, a) > taildep::kSupportTol) {
                ++nonzero;
                factor = a;
            }
        }
        if (nonzero == 1) {
            partition[factor].push_back(j);
            pure_set.push_back(j);
        }
    }

    json truth{{"n", args.n},
               {"d", spec.d},
               {"K", spec.K},
               {"s", spec.s},
               {"eta", spec.eta},
               {"model", args.model},
               {"noise", spec.noise},
               {"factor_alpha", spec.factor_alpha},
               {"noise_alpha", spec.noise_alpha},
               {"seed", args.seed},
               {"pure_set", pure_set},
               {"partition", partition}};
    write_json_file((dir / "truth.json").string(), truth);

    if (spec.factor_alpha != 1.0) {
        const taildep::LoadingMatrix abar =
            taildep::implied_loading(A.values(), spec.factor_alpha);
        taildep::write_csv_matrix((dir / "Abar.csv").string(), abar.values());
    }

    std::cout << "simulate: wrote dataset.csv, A.csv, truth.json under " << args.out << "\n";
    return kExitOk;
}

struct McArgs {
    std::string config;
    std::string out = "mc_out";
    std::size_t threads = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t reps = 0;
};

int run_mc(const McArgs& args) {
    taildep::StudyConfig cfg = taildep::load_study_config(args.config);
    if (args.seed_given) cfg.master_seed = args.seed;
    if (args.reps > 0) cfg.replicates = args.reps;
    cfg.validate();

    const taildep::McReport report = taildep::run_study(cfg, args.threads, args.out);
    std::cout << "mc: " << cfg.cells().size() << " cells x " << cfg.hyper.size()
              << " hyper settings x " << cfg.replicates << " replicates = "
              << report.records.size() << " records\n"
              << "wrote " << (fs::path(args.out) / "records.csv").string() << " and "
              << (fs::path(args.out) / "aggregate.json").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Max-linear tail dependence estimation under the pure-variable assumption"};
    app.require_subcommand(1);

    EstimateArgs est_args;
    CLI::App* est = app.add_subcommand("estimate", "Estimate the loading matrix from a CSV dataset");
    est->add_option("input", est_args.input, "headerless CSV, rows = samples")->required();
    auto* opt_k = est->add_option("--k", est_args.k, "exceedance count");
    auto* opt_kappa = est->add_option("--kappa", est_args.kappa, "threshold in (0, 1/2)");
    est->add_flag("--adaptive", est_args.adaptive, "data-adaptive (k, kappa); the default")
        ->excludes(opt_k)
        ->excludes(opt_kappa);
    est->add_option("--seed", est_args.seed, "seed for rank tie-breaking");
    est->add_option("--out", est_args.out, "output CSV for the estimate (JSON sidecar alongside)");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Generate a synthetic factor-model dataset");
    sim->add_option("--model", sim_args.model, "linear or max_linear");
    sim->add_flag("--noise,!--no-noise", sim_args.noise, "add Pareto noise");
    sim->add_option("--d", sim_args.d, "number of observed variables");
    sim->add_option("--K", sim_args.K, "number of factors");
    sim->add_option("--s", sim_args.s, "row sparsity");
    sim->add_option("--eta", sim_args.eta, "signal strength in (0, 1/2)");
    sim->add_option("--n", sim_args.n, "sample size");
    sim->add_option("--factor-alpha", sim_args.factor_alpha, "factor tail index");
    sim->add_option("--noise-alpha", sim_args.noise_alpha, "noise tail index");
    sim->add_option("--seed", sim_args.seed, "master seed");
    sim->add_option("--out", sim_args.out, "output directory");

    McArgs mc_args;
    CLI::App* mc = app.add_subcommand("mc", "Run a Monte Carlo study from a JSON config");
    mc->add_option("--config", mc_args.config, "StudyConfig JSON file")->required();
    mc->add_option("--threads", mc_args.threads, "worker threads (0 = all cores)");
    auto* mc_seed = mc->add_option("--seed", mc_args.seed, "override the config master seed");
    mc->add_option("--reps", mc_args.reps, "override replicates per cell");
    mc->add_option("--out", mc_args.out, "output directory");

    try {
        app.parse(argc, argv);
        mc_args.seed_given = mc_seed->count() > 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitParameter;
    }

    try {
        if (est->parsed()) return run_estimate(est_args);
        if (sim->parsed()) return run_simulate(sim_args);
        if (mc->parsed()) return run_mc(mc_args);
        return kExitParameter;
    } catch (const taildep::generation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const taildep::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const taildep::parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const taildep::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
