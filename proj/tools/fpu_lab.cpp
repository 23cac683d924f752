#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fpulab/experiments.hpp"

using namespace fpulab;

int main(int argc, char** argv) {
    CLI::App app{"FPU lattice experiment driver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;

    const char* env_out = std::getenv("FPU_LAB_OUT");
    if (env_out != nullptr && *env_out != '\0') out_dir = env_out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed override")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--threads", threads, "worker threads");
    };

    CLI::App* recurrence =
        app.add_subcommand("fpu-recurrence", "single-mode recurrence study");
    CLI::App* kdv = app.add_subcommand("kdv-compare",
                                       "lattice vs KdV continuum comparison");
    CLI::App* toda =
        app.add_subcommand("toda-drift", "Lax spectrum and action drift study");
    CLI::App* gibbs = app.add_subcommand("gibbs-adiabatic",
                                         "thermal adiabatic-invariance probe");
    for (CLI::App* sub : {recurrence, kdv, toda, gibbs}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = Config::from_file(config_path);
        if (seed_given) cfg.set("gibbs.seed", std::to_string(seed));
        if (threads > 0)
            cfg.set("experiment.threads", std::to_string(threads));

        // a second env check so the variable also beats a config default
        if (env_out != nullptr && *env_out != '\0' &&
            !app.get_subcommands()[0]->count("--out"))
            out_dir = env_out;

        if (recurrence->parsed()) {
            const auto res = experiments::run_fpu_recurrence(cfg, out_dir);
            std::cout << "recurrence_time=" << res.recurrence_time
                      << " ratio=" << res.recurrence_ratio
                      << " n_eff=" << res.n_eff_final << "\n";
        } else if (kdv->parsed()) {
            const auto res = experiments::run_kdv_compare(cfg, out_dir);
            std::cout << "order=" << res.order
                      << " min_sigma=" << res.min_packet_sigma << "\n";
        } else if (toda->parsed()) {
            const auto res = experiments::run_toda_drift(cfg, out_dir);
            std::cout << "toda_drift=" << res.toda_drift
                      << " fpu_drift_a2=" << res.fpu_drift_a2
                      << " scan_exponent=" << res.scan_exponent << "\n";
        } else if (gibbs->parsed()) {
            const auto res = experiments::run_gibbs_adiabatic(cfg, out_dir);
            std::cout << "slope=" << res.slope << " r2=" << res.r_squared
                      << "\n";
        }
    } catch (const BlowupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const StabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
