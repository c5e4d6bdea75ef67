#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qiopa/experiment.hpp"

namespace qiopa::cli {

// exit(2)-class problems: unparsable flags, bad config files, invalid values
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exit(1)-class problems: a physics check or run-level contract failed
struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key-value run description, JSON on disk. Threshold is given either
// absolutely or as a multiple of the analytic mean detected arm signal;
// the multiple form is the default.
struct RunSettings {
    double g = 1.0;
    double eta_b = 1.0;
    double eta_a = 1.0;
    double pm_noise = 0.0;
    std::optional<double> threshold_multiple;
    std::optional<double> threshold_absolute;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string discriminator = "orthogonality_filter";
    int threads = 0;
    double phi_b = 0.0;
    int scan_points = 12;
    std::vector<double> phi_a_list; // optional explicit override of the scan grid
    bool decorrelate = false;

    nlohmann::json echo() const;
};

RunSettings load_settings(const std::string& path);

// Command-line overrides applied on top of the file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::optional<int> threads;
    std::optional<double> threshold_multiple;
};

void apply_overrides(RunSettings& s, const Overrides& o);

// Resolves the settings into a runnable configuration (gain constants,
// absolute threshold, scan grid).
ExperimentConfig to_experiment_config(const RunSettings& s);

std::vector<double> scan_grid(const RunSettings& s);

} // namespace qiopa::cli
