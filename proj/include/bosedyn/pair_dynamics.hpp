#ifndef BOSEDYN_PAIR_DYNAMICS_HPP
#define BOSEDYN_PAIR_DYNAMICS_HPP

#include <functional>
#include <string>

#include "bosedyn/quadratic_kernels.hpp"

namespace bosedyn {

// gamma(p,q) = <adag_q a_p> (Hermitian PSD), alpha(p,q) = <a_q a_p>
// (symmetric); both supported away from the condensate direction.
struct DensityPair {
    Eigen::MatrixXcd gamma;
    Eigen::MatrixXcd alpha;

    static DensityPair vacuum(int modes);
};

struct PairEvolveDiagnostics {
    double max_hermiticity_defect = 0.0;  // before re-enforcement, per step
    double max_symmetry_defect = 0.0;
    std::vector<double> times;
    std::vector<double> trace_gamma;
    std::vector<double> kinetic;
    std::vector<double> purity_defect;  // |alpha conj(alpha) - gamma - gamma^2|
};

// i d/dt gamma = h gamma - gamma h + K2 conj(alpha) - alpha conj(K2)
// i d/dt alpha = h alpha + alpha h^T + K2 + K2 gamma^T + gamma K2
// RK4 with post-step re-Hermitization/re-symmetrization.
DensityPair evolve_dm(const DensityPair& pair, const KernelsAt& kernels, double t0,
                      double t_final, double dt, const ModeBasis& basis,
                      PairEvolveDiagnostics* diag = nullptr);

// Tr[(1 + |k|^2) gamma] in the plane-wave basis
double kinetic_expectation(const DensityPair& pair, const ModeBasis& basis);

double purity_defect(const DensityPair& pair);

void export_pair_csv(const DensityPair& pair, const std::string& gamma_path,
                     const std::string& alpha_path);
void export_diagnostics_csv(const PairEvolveDiagnostics& diag, const std::string& path);

}  // namespace bosedyn

#endif
