#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace restrictlab::cli {

/// Every tunable of every subcommand. Flags fill it first, then a JSON file
/// given by --config overrides any key it names (keys are the long flag names).
struct RunConfig {
    std::string command;
    std::uint64_t seed = 1;
    int d = 2;
    double p = 1.0;
    double q = 2.0;
    double rho = 2.0;
    std::string measure = "gaussian";
    std::string surface = "sphere";
    double radius = 1.0;        // paraboloid patch |eta| <= radius
    double inner = 1.0;         // cone patch inner radius
    double outer = 2.0;         // cone patch outer radius
    int resolution = 16;
    int points_per_octave = 16;
    int k_min = -4;
    int k_max = 4;
    int instances = 1000;
    int max_blocks = 16;
    int max_lattice = 4096;
    int max_atoms = 32;
    int cases = 1000;
    int max_len = 12;
    double alpha_max = 5.0;
    double z_max = 50.0;
    int z_points = 201;
    double r_min = 10.0;
    double r_max = 100.0;
    int samples = 200;
    int order = 2;
    int delta_exp_min = 2;
    int delta_exp_max = 7;
    double eps_min = 1e-3;
    double eps_max = 1e-1;
    int eps_points = 9;
    std::string out_dir = ".";

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
    /// Applies every key of `j`; unknown keys and type mismatches throw ConfigError.
    void apply_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Parses argv, runs the subcommand and writes <out-dir>/<command>.csv and
/// <out-dir>/<command>.json. Returns 0 on success, 1 when a checked
/// inequality fails (the failing instance is written next to the outputs)
/// and 2 for invalid flags or configuration.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace restrictlab::cli
