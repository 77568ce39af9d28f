#ifndef BOSEDYN_EXPERIMENTS_HPP
#define BOSEDYN_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bosedyn/field.hpp"
#include "bosedyn/potential.hpp"

namespace bosedyn {

enum class MRule { fixed, pow_two_beta_plus_one_third, pow_one_minus_delta };

struct SweepConfig {
    int d = 1;
    double beta = 1.0;
    std::vector<int> N_list;
    MRule m_rule = MRule::pow_two_beta_plus_one_third;
    int m_fixed = 0;
    double delta = 0.5;
    double t_final = 0.3;
    double dt = 1e-3;

    std::string potential_name = "gaussian";
    double potential_amplitude = 0.3;
    double potential_width = 0.8;

    int grid_points = 8;
    double box_length = 2.0 * M_PI;
    double initial_width = 1.1;       // width of the condensate datum
    std::string phi0 = "vacuum";      // vacuum | squeezed
    double squeeze = 0.2;

    int m_trunc = -1;                 // fluctuation-space truncation; -1 = N
    double tail_target = 1e-8;
    double support_tol = 1e-4;        // condensate-support defect allowed at unmap
    double freeze_time = 0.1;         // kernel sweep: u snapshot time
    std::uint64_t seed = 1;
    double alpha_probe = 0.0;         // d=2 exponent probe, informational

    void validate() const;            // throws std::invalid_argument
    int m_of(int N) const;
};

struct SweepRow {
    int N = 0;
    int M = 0;
    double beta = 0.0;
    double t = 0.0;
    double err_norm2 = 0.0;
    double err_trace = 0.0;
    double tail_mass = 0.0;
};

struct FitResult {
    double slope = 0.0;
    double stderr_ = 0.0;
    double r2 = 0.0;
};

struct ScalingResult {
    std::vector<std::pair<double, double>> table;  // (N, value)
    FitResult fit;
    bool degenerate = false;  // no positive values to fit
    std::vector<SweepRow> rows;
    // kernel sweep carries the unweighted contrast column
    std::vector<std::pair<double, double>> contrast;
    FitResult contrast_fit;
};

// ordinary least squares on (log N, log value); throws on < 3 positive points
FitResult slope_fit(const std::vector<std::pair<double, double>>& table);

// norm error of the condensate+fluctuation description against the exact
// N-body evolution (d = 1)
ScalingResult norm_error_vs_N(const SweepConfig& cfg);

// trace distance of the one-body reduced density to the limiting projector
ScalingResult reduced_density_error(const SweepConfig& cfg);

struct ComparisonRow {
    int N = 0;
    int M = 0;
    double err_full_vs_truncated = 0.0;  // |Phi_N - Phi_{N,M}|^2
    double err_truncated_vs_quadratic = 0.0;  // |Phi_{N,M} - Phi|^2
    double tail_mass = 0.0;
};

struct ComparisonResult {
    std::vector<ComparisonRow> rows;
};

ComparisonResult dynamics_comparison(const SweepConfig& cfg);

// scaling of the pairing-kernel norms at a frozen condensate snapshot
ScalingResult kernel_scaling_sweep(const SweepConfig& cfg);

// helpers shared with the CLI layer
Potential make_potential_from_config(const SweepConfig& cfg, const PeriodicGrid& grid);
ComplexField make_initial_datum(const SweepConfig& cfg, const PeriodicGrid& grid);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
void write_scaling_csv(const ScalingResult& r, const std::string& path,
                       const std::string& value_name);

}  // namespace bosedyn

#endif
