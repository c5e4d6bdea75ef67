#include "cli/config.hpp"

#include <cmath>
#include <fstream>

namespace qiopa::cli {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

Discriminator parse_discriminator(const std::string& name) {
    if (name == "orthogonality_filter") return Discriminator::OrthogonalityFilter;
    if (name == "ideal_parity") return Discriminator::IdealParity;
    if (name == "ideal_difference") return Discriminator::IdealDifference;
    throw ConfigError("unknown discriminator '" + name
                      + "' (expected orthogonality_filter, ideal_parity or ideal_difference)");
}

} // namespace

nlohmann::json RunSettings::echo() const {
    json j;
    j["g"] = g;
    j["eta_b"] = eta_b;
    j["eta_a"] = eta_a;
    j["pm_noise"] = pm_noise;
    if (threshold_multiple) j["threshold_multiple"] = *threshold_multiple;
    if (threshold_absolute) j["threshold_absolute"] = *threshold_absolute;
    j["trials"] = trials;
    j["seed"] = seed;
    j["discriminator"] = discriminator;
    j["threads"] = threads;
    j["phi_b"] = phi_b;
    j["scan_points"] = scan_points;
    if (!phi_a_list.empty()) j["phi_a_list"] = phi_a_list;
    j["decorrelate"] = decorrelate;
    return j;
}

RunSettings load_settings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object: " + path);

    static const char* known[] = {"g",       "eta_b",   "eta_a",     "pm_noise",
                                  "threshold_multiple", "threshold_absolute",
                                  "trials",  "seed",    "discriminator", "threads",
                                  "phi_b",   "scan_points", "phi_a_list", "decorrelate"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config field '" + key + "' in " + path);
    }

    RunSettings s;
    read_field(j, "g", s.g);
    read_field(j, "eta_b", s.eta_b);
    read_field(j, "eta_a", s.eta_a);
    read_field(j, "pm_noise", s.pm_noise);
    if (j.contains("threshold_multiple")) {
        double v = 0;
        read_field(j, "threshold_multiple", v);
        s.threshold_multiple = v;
    }
    if (j.contains("threshold_absolute")) {
        double v = 0;
        read_field(j, "threshold_absolute", v);
        s.threshold_absolute = v;
    }
    read_field(j, "trials", s.trials);
    read_field(j, "seed", s.seed);
    read_field(j, "discriminator", s.discriminator);
    read_field(j, "threads", s.threads);
    read_field(j, "phi_b", s.phi_b);
    read_field(j, "scan_points", s.scan_points);
    read_field(j, "phi_a_list", s.phi_a_list);
    if (j.contains("phi_a_list") && s.phi_a_list.empty())
        throw ConfigError("phi_a_list must not be empty when given");
    read_field(j, "decorrelate", s.decorrelate);
    if (s.threshold_multiple && s.threshold_absolute)
        throw ConfigError("give either threshold_multiple or threshold_absolute, not both");
    return s;
}

void apply_overrides(RunSettings& s, const Overrides& o) {
    if (o.seed) s.seed = *o.seed;
    if (o.trials) s.trials = *o.trials;
    if (o.threads) s.threads = *o.threads;
    if (o.threshold_multiple) {
        s.threshold_multiple = *o.threshold_multiple;
        s.threshold_absolute.reset();
    }
}

ExperimentConfig to_experiment_config(const RunSettings& s) {
    ExperimentConfig cfg;
    try {
        cfg.gain = make_gain(s.g);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    cfg.detection.eta_B = s.eta_b;
    cfg.detection.eta_A = s.eta_a;
    cfg.detection.pm_noise = s.pm_noise;
    if (s.threshold_absolute) {
        cfg.detection.threshold = *s.threshold_absolute;
    } else {
        const double multiple = s.threshold_multiple.value_or(8.0);
        cfg.detection.threshold = multiple * mean_arm_signal(cfg.gain, s.eta_b);
    }
    cfg.phi_B = s.phi_b;
    cfg.trials = s.trials;
    cfg.seed = s.seed;
    cfg.discriminator = parse_discriminator(s.discriminator);
    cfg.threads = s.threads;
    cfg.decorrelate = s.decorrelate;
    cfg.phi_A_list = scan_grid(s);
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::vector<double> scan_grid(const RunSettings& s) {
    if (!s.phi_a_list.empty()) return s.phi_a_list;
    if (s.scan_points < 1) throw ConfigError("scan_points must be at least 1");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(s.scan_points));
    for (int k = 0; k < s.scan_points; ++k)
        grid.push_back(s.phi_b + 2.0 * M_PI * k / s.scan_points);
    return grid;
}

} // namespace qiopa::cli
