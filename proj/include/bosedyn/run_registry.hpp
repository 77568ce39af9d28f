#ifndef BOSEDYN_RUN_REGISTRY_HPP
#define BOSEDYN_RUN_REGISTRY_HPP

#include "bosedyn/run_config.hpp"

namespace bosedyn {

struct RunRecord {
    std::string run_id;
    Command command = Command::check;
    std::string run_dir;
    int exit_code = 0;  // 0 ok, 1 validation, 2 divergence, 3 resource cap
    std::string message;
    nlohmann::json summary;  // echo of summary.json (series manifest included)
};

// Executes the configured pipeline, writes all outputs under
// output_dir/run_id/, appends one line to the registry (JSONL, advisory
// file lock). Timings and timestamps live only in the registry line, so the
// result files are byte-stable across reruns.
RunRecord dispatch(const RunConfig& cfg);

// registry path: $BOSEDYN_REGISTRY or <output_dir>/registry.jsonl
std::string registry_path(const std::string& output_dir);

// extract a named series from a finished run into a CSV file; throws with
// the list of available series on an unknown name
void emit_plotdata(const std::string& run_dir, const std::string& series,
                   const std::string& out_csv);

struct CheckItem {
    std::string name;
    bool pass = false;
    double value = 0.0;
};

// fast invariant suite (used by the `check` command)
std::vector<CheckItem> run_check_suite();

}  // namespace bosedyn

#endif
