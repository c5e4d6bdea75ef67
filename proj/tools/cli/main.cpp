#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

using namespace qiopa::cli;

RunSettings resolve_settings(const std::string& config_path, const Overrides& overrides) {
    RunSettings s;
    if (!config_path.empty()) s = load_settings(config_path);
    apply_overrides(s, overrides);
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"amplified photon pair simulation and entanglement witness"};
    app.require_subcommand(1);
    // lets the global flags (--out, --seed, ...) appear after the subcommand
    app.fallthrough();

    std::string config_path;
    std::string out_dir = ".";
    Overrides overrides;
    app.add_option("--config", config_path, "JSON run description")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--seed", overrides.seed, "override the random seed");
    app.add_option("--trials", overrides.trials, "override trials per phase point")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", overrides.threads, "worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--threshold-multiple", overrides.threshold_multiple,
                   "filter threshold as a multiple of the mean arm signal")
        ->check(CLI::NonNegativeNumber);

    DistributionArgs dist;
    CLI::App* cmd_dist = app.add_subcommand(
        "distribution", "exact photon-number distribution of one amplified state");
    cmd_dist->add_option("--g", dist.g, "amplifier gain")->capture_default_str();
    cmd_dist->add_option("--label", dist.label, "plus or perp")->capture_default_str();
    cmd_dist->add_option("--max-p", dist.max_p, "window bound, own mode")->capture_default_str();
    cmd_dist->add_option("--max-q", dist.max_q, "window bound, orthogonal mode")
        ->capture_default_str();
    cmd_dist->add_flag("--svg", dist.svg, "also write a heat map");

    CLI::App* cmd_scan_app = app.add_subcommand(
        "scan", "Monte Carlo fringe scan over Alice's analysis phase");

    CLI::App* cmd_witness_app = app.add_subcommand(
        "witness", "two-basis correlation visibilities and the witness S");
    bool decorrelate_flag = false;
    cmd_witness_app->add_flag("--decorrelate", decorrelate_flag,
                              "control run: replace the recorded heralding outcome with a coin");

    std::vector<double> sweep_multiples{0.0, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0};
    CLI::App* cmd_sweep_app = app.add_subcommand(
        "sweep", "filter-threshold sweep over a shared trial pool");
    cmd_sweep_app
        ->add_option("--multiples", sweep_multiples,
                     "ascending threshold multiples of the mean arm signal")
        ->delimiter(',')
        ->capture_default_str();

    OracleCheckArgs oracle;
    CLI::App* cmd_oracle_app = app.add_subcommand(
        "oracle-check", "cross-validate the samplers against the dense expansion");
    cmd_oracle_app->add_option("--g", oracle.g, "amplifier gain (keep small: dense expansion)")
        ->capture_default_str();
    cmd_oracle_app->add_option("--cutoff", oracle.cutoff, "total photon number cutoff")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_oracle_app->add_option("--seed", oracle.seed, "sampling seed")->capture_default_str();

    try {
        app.parse(argc, argv);

        if (cmd_dist->parsed()) return cmd_distribution(dist, out_dir);
        if (cmd_oracle_app->parsed()) {
            if (overrides.seed) oracle.seed = *overrides.seed;
            return cmd_oracle_check(oracle, out_dir);
        }

        RunSettings settings = resolve_settings(config_path, overrides);
        if (cmd_scan_app->parsed()) return cmd_scan(settings, out_dir);
        if (cmd_witness_app->parsed()) {
            if (decorrelate_flag) settings.decorrelate = true;
            return cmd_witness(settings, out_dir);
        }
        if (cmd_sweep_app->parsed()) return cmd_sweep(settings, sweep_multiples, out_dir);
        std::cerr << "error: no command selected\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const PhysicsError& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 1;
    }
}
