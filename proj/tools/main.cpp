#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdl/acceptance.hpp"
#include "sdl/errors.hpp"
#include "sdl/experiments.hpp"
#include "sdl/io.hpp"

namespace {

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("SDL_THREADS")) {
        const int k = std::atoi(env);
        if (k > 0) omp_set_num_threads(k);
    }
#endif
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"numerical laboratory for the symplectic Dirichlet energy"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one named experiment");
    sdl::ExperimentConfig cfg;
    std::string config_file;
    auto* o_exp = run->add_option("--experiment", cfg.experiment,
                                  "energy|flow|hopf|spectrum|threshold|surface2d|homogeneous|bound_sweep");
    auto* o_res = run->add_option("--resolution", cfg.resolution, "grid nodes per axis");
    auto* o_t = run->add_option("--t", cfg.t, "Berger squash parameter");
    auto* o_alpha = run->add_option("--alpha", cfg.alpha, "Dirichlet coupling in the flow objective");
    auto* o_seed = run->add_option("--seed", cfg.seed, "random-map seed");
    auto* o_out = run->add_option("--out", cfg.out_dir, "output directory");
    run->add_option("--config", config_file, "key=value config file (CLI flags take precedence)");
    auto* o_n = run->add_option("--n", cfg.n, "su(n) rank parameter (homogeneous)");
    auto* o_pi0 = run->add_option("--pi0", cfg.pi0, "simple-root subset, e.g. 'a2' (homogeneous)");
    auto* o_pi0p = run->add_option("--pi0p", cfg.pi0p, "simple-root subset containing pi0 (homogeneous)");
    auto* o_alo = run->add_option("--alpha-lo", cfg.alpha_lo, "threshold bracket lower end");
    auto* o_ahi = run->add_option("--alpha-hi", cfg.alpha_hi, "threshold bracket upper end");
    auto* o_deg = run->add_option("--degree", cfg.degree, "winding degree (surface2d)");
    auto* o_cnt = run->add_option("--count", cfg.map_count, "sample count (bound_sweep)");
    auto* o_amp = run->add_option("--amplitude", cfg.amplitude, "perturbation amplitude (flow)");

    auto* verify = app.add_subcommand("verify", "run the full acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return sdl::kExitConfigError;
    }

    try {
        if (verify->parsed()) return sdl::run_acceptance(stdout) ? sdl::kExitPass : sdl::kExitAssertionFailure;

        // precedence: CLI flags > config file > defaults
        if (!config_file.empty()) {
            sdl::ExperimentConfig from_file = cfg;
            for (const auto& [k, v] : sdl::read_kv_file(config_file))
                sdl::apply_config_entry(from_file, k, v);
            if (o_exp->count() == 0) cfg.experiment = from_file.experiment;
            if (o_res->count() == 0) cfg.resolution = from_file.resolution;
            if (o_t->count() == 0) cfg.t = from_file.t;
            if (o_alpha->count() == 0) cfg.alpha = from_file.alpha;
            if (o_seed->count() == 0) cfg.seed = from_file.seed;
            if (o_out->count() == 0) cfg.out_dir = from_file.out_dir;
            if (o_n->count() == 0) cfg.n = from_file.n;
            if (o_pi0->count() == 0) cfg.pi0 = from_file.pi0;
            if (o_pi0p->count() == 0) cfg.pi0p = from_file.pi0p;
            if (o_alo->count() == 0) cfg.alpha_lo = from_file.alpha_lo;
            if (o_ahi->count() == 0) cfg.alpha_hi = from_file.alpha_hi;
            if (o_deg->count() == 0) cfg.degree = from_file.degree;
            if (o_cnt->count() == 0) cfg.map_count = from_file.map_count;
            if (o_amp->count() == 0) cfg.amplitude = from_file.amplitude;
        }
        if (cfg.experiment.empty())
            throw sdl::config_error("no experiment selected (use --experiment or a config file)");
        return sdl::run_experiment(cfg);
    } catch (const sdl::config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return sdl::kExitConfigError;
    } catch (const sdl::usage_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return sdl::kExitConfigError;
    } catch (const sdl::unsupported_target_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return sdl::kExitConfigError;
    } catch (const sdl::degree_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return sdl::kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return sdl::kExitNumericalFailure;
    }
}
