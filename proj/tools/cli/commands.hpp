#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace qiopa::cli {

// Collects the files a command writes and lands them in a manifest next to
// the outputs; re-running with the echoed config and seed reproduces the
// tables byte for byte.
class Manifest {
public:
    Manifest(std::string out_dir, std::string command, nlohmann::json config_echo,
             std::uint64_t seed);

    // registers a file (relative to the output directory) and returns its path
    std::string add(const std::string& filename);
    void finish();

private:
    std::string out_dir_;
    nlohmann::json doc_;
    std::vector<std::string> outputs_;
};

struct DistributionArgs {
    double g = 1.6;
    std::string label = "plus"; // plus | perp
    int max_p = 40;
    int max_q = 40;
    bool svg = false;
};

int cmd_distribution(const DistributionArgs& args, const std::string& out_dir);

int cmd_scan(const RunSettings& settings, const std::string& out_dir);

int cmd_witness(const RunSettings& settings, const std::string& out_dir);

int cmd_sweep(const RunSettings& settings, const std::vector<double>& threshold_multiples,
              const std::string& out_dir);

struct OracleCheckArgs {
    double g = 1.0;
    int cutoff = 48;
    std::uint64_t seed = 1;
};

int cmd_oracle_check(const OracleCheckArgs& args, const std::string& out_dir);

} // namespace qiopa::cli
