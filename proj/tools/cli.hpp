#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace bnls::cli {

enum ExitCode : int { exit_pass = 0, exit_check_failure = 1, exit_config = 2, exit_divergence = 3 };

/// Flat run configuration: Params + SolverConfig + grid + I/O.
struct RunConfig {
    int N = 1;
    double p = 8.0;
    std::optional<double> eps;
    std::optional<double> omega;
    std::optional<double> mass;
    std::size_t points = 1024;
    double L = 40.0;

    int max_iters = 4000;
    double tol_residual = 1e-10;
    double relaxation = 1.0;
    std::uint64_t seed = 0;
    std::string init = "gaussian_bump";
    bool filter = false;
    std::optional<double> gamma;

    std::string route = "weinstein_Q";  ///< ground-state: weinstein_Q | mass_flow
    std::optional<std::string> load;    ///< initial field file
    std::optional<std::string> energy_state;
    std::optional<std::string> action_state;
    bool fresh = false;
    int gn_samples = 500;
    std::vector<double> p_grid;
    std::vector<double> eps_grid;
    std::string out = ".";
};

nlohmann::json to_json(const RunConfig& c);
/// Applies the keys present in j; throws ConfigError on unknown keys or bad types.
void apply_json(RunConfig& c, const nlohmann::json& j);
/// Hex FNV-1a hash of the canonical JSON dump, output directory excluded.
std::string config_hash(const RunConfig& c);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnls::cli
