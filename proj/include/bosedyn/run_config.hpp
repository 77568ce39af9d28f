#ifndef BOSEDYN_RUN_CONFIG_HPP
#define BOSEDYN_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosedyn/experiments.hpp"

namespace bosedyn {

enum class Command { hartree, nls, bogoliubov, exact, sweep, gn_constant, check };

Command command_from_string(const std::string& s);
std::string command_to_string(Command c);

// A run is one command plus a strict nested parameter document. Unknown keys
// are rejected with a nearest-key suggestion; physical parameters are
// validated before any compute starts.
struct RunConfig {
    Command command = Command::check;
    nlohmann::json parameters;  // canonical (defaults filled, keys sorted)
    std::string output_dir = "runs";
    std::uint64_t seed = 1;

    // stable content hash of {command, parameters, seed}
    std::string run_id() const;

    // typed views
    SweepConfig sweep() const;
    int scaling_N() const { return parameters.at("scaling").at("N").get<int>(); }
    double scaling_beta() const { return parameters.at("scaling").at("beta").get<double>(); }
    std::string sweep_kind() const { return parameters.at("sweep").at("kind").get<std::string>(); }
};

// file + overrides -> validated config; flags override file values
RunConfig load_config(Command command, const std::string& config_path,
                      const std::vector<std::string>& overrides, const std::string& out_dir);

// schema defaults for a command (also the documentation of known keys)
nlohmann::json default_parameters(Command command);

}  // namespace bosedyn

#endif
