#ifndef BOSEDYN_HARTREE_HPP
#define BOSEDYN_HARTREE_HPP

#include <memory>
#include <vector>

#include "bosedyn/errors.hpp"
#include "bosedyn/field.hpp"
#include "bosedyn/potential.hpp"

namespace bosedyn {

struct HartreeState {
    ComplexField u;
    double t = 0.0;
    std::shared_ptr<const ScaledPotential> wN;
    double phase_integral = 0.0;  // int_0^t mu_N(s) ds
};

struct ConservedQuantities {
    double mass = 0.0;
    double energy = 0.0;  // |grad u|^2 + (1/2) <|u|^2, w_N * |u|^2>
    double h1 = 0.0;
    double h2 = 0.0;
    double linf = 0.0;
};

struct TrajectorySample {
    double t, mass, energy, h1, h2, linf;
};

// Diagnostics at the sampling cadence plus full-field snapshots used to
// rebuild fluctuation kernels along the trajectory.
struct HartreeTrajectory {
    std::vector<TrajectorySample> diagnostics;
    std::vector<double> snapshot_times;
    std::vector<ComplexField> snapshots;
    std::vector<double> phase_integrals;  // at snapshot times

    // linear interpolation of u between snapshots
    ComplexField interpolate(double t) const;
    void export_csv(const std::string& path) const;
    void export_snapshots(const std::string& path) const;  // flat binary record
};

struct EvolveOptions {
    double sample_cadence = 0.01;
    double snapshot_cadence = 0.01;
    double blowup_guard_factor = 1e6;
    bool keep_snapshots = true;
    // drop the mu_N term; the solution then differs by a global phase only
    bool include_phase = true;
};

// mu_N = (1/2) <|u|^2, w_N * |u|^2>
double mu_phase(const ComplexField& u, const ScaledPotential& wN);

// Strang splitting for i du/dt = (-lap + w_N*|u|^2 - mu_N) u.
HartreeState hartree_evolve(const HartreeState& state, double t_final, double dt,
                            HartreeTrajectory* traj = nullptr, const EvolveOptions& opt = {});

// Same splitting with local nonlinearity a |phi|^2 (no phase term).
ComplexField nls_evolve(const ComplexField& phi0, double a, double t_final, double dt,
                        HartreeTrajectory* traj = nullptr, const EvolveOptions& opt = {});

ConservedQuantities conserved_quantities(const HartreeState& state);

struct DistanceRow {
    int N;
    double l2_distance;  // min over a global phase
};

// L2 distance between the Hartree solution at w_N and the limiting cubic
// NLS solution with a = int w, from a common initial datum.
std::vector<DistanceRow> hartree_nls_distance(const ComplexField& u0, const Potential& w,
                                              const std::vector<int>& N_list, double beta,
                                              double t_final, double dt);

// squared-gradient of a field (H1^2 - L2^2 computed spectrally)
double grad_norm_sq(const ComplexField& f);

}  // namespace bosedyn

#endif
