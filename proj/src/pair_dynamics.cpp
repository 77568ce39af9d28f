#include "bosedyn/pair_dynamics.hpp"

#include <cmath>
#include <fstream>

namespace bosedyn {

namespace {

struct PairDeriv {
    Eigen::MatrixXcd dgamma;
    Eigen::MatrixXcd dalpha;
};

PairDeriv rhs(const DensityPair& p, const GeneratorKernels& k) {
    const Eigen::MatrixXcd& h = k.h.matrix;
    const Eigen::MatrixXcd& K = k.K2.matrix;
    const cplx mi(0.0, -1.0);
    PairDeriv d;
    d.dgamma = mi * (h * p.gamma - p.gamma * h + K * p.alpha.conjugate() -
                     p.alpha * K.conjugate());
    d.dalpha = mi * (h * p.alpha + p.alpha * h.transpose() + K + K * p.gamma.transpose() +
                     p.gamma * K);
    return d;
}

}  // namespace

DensityPair DensityPair::vacuum(int modes) {
    DensityPair p;
    p.gamma = Eigen::MatrixXcd::Zero(modes, modes);
    p.alpha = Eigen::MatrixXcd::Zero(modes, modes);
    return p;
}

DensityPair evolve_dm(const DensityPair& pair, const KernelsAt& kernels, double t0,
                      double t_final, double dt, const ModeBasis& basis,
                      PairEvolveDiagnostics* diag) {
    if (!(dt > 0.0) || !(t_final > t0))
        throw std::invalid_argument("evolve_dm: bad time interval or step");
    const int nsteps = std::max(1, static_cast<int>(std::lround((t_final - t0) / dt)));
    const double h = (t_final - t0) / nsteps;

    DensityPair p = pair;
    auto record = [&](double t) {
        if (diag == nullptr) return;
        diag->times.push_back(t);
        diag->trace_gamma.push_back(std::real(p.gamma.trace()));
        diag->kinetic.push_back(kinetic_expectation(p, basis));
        diag->purity_defect.push_back(purity_defect(p));
    };
    record(t0);

    GeneratorKernels k_lo = kernels(t0);
    for (int s = 0; s < nsteps; ++s) {
        const double t = t0 + s * h;
        const GeneratorKernels k_mid = kernels(t + h / 2.0);
        const GeneratorKernels k_hi = kernels(t + h);

        const PairDeriv d1 = rhs(p, k_lo);
        DensityPair p2{p.gamma + 0.5 * h * d1.dgamma, p.alpha + 0.5 * h * d1.dalpha};
        const PairDeriv d2 = rhs(p2, k_mid);
        DensityPair p3{p.gamma + 0.5 * h * d2.dgamma, p.alpha + 0.5 * h * d2.dalpha};
        const PairDeriv d3 = rhs(p3, k_mid);
        DensityPair p4{p.gamma + h * d3.dgamma, p.alpha + h * d3.dalpha};
        const PairDeriv d4 = rhs(p4, k_hi);

        p.gamma += (h / 6.0) * (d1.dgamma + 2.0 * d2.dgamma + 2.0 * d3.dgamma + d4.dgamma);
        p.alpha += (h / 6.0) * (d1.dalpha + 2.0 * d2.dalpha + 2.0 * d3.dalpha + d4.dalpha);

        if (diag != nullptr) {
            diag->max_hermiticity_defect =
                std::max(diag->max_hermiticity_defect,
                         (p.gamma - p.gamma.adjoint().eval()).norm());
            diag->max_symmetry_defect = std::max(
                diag->max_symmetry_defect, (p.alpha - p.alpha.transpose().eval()).norm());
        }
        p.gamma = 0.5 * (p.gamma + p.gamma.adjoint().eval());
        p.alpha = 0.5 * (p.alpha + p.alpha.transpose().eval());

        k_lo = k_hi;
        record(t + h);
    }
    return p;
}

double kinetic_expectation(const DensityPair& pair, const ModeBasis& basis) {
    double s = 0.0;
    for (int p = 0; p < basis.size(); ++p)
        s += (1.0 + basis.mode_ksq(p)) * std::real(pair.gamma(p, p));
    return s;
}

double purity_defect(const DensityPair& pair) {
    const Eigen::MatrixXcd r =
        pair.alpha * pair.alpha.conjugate() - pair.gamma - pair.gamma * pair.gamma;
    return r.norm();
}

void export_pair_csv(const DensityPair& pair, const std::string& gamma_path,
                     const std::string& alpha_path) {
    auto dump = [](const Eigen::MatrixXcd& m, const std::string& path) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path);
        out.precision(17);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (j) out << ",";
                out << m(i, j).real() << "," << m(i, j).imag();
            }
            out << "\n";
        }
    };
    dump(pair.gamma, gamma_path);
    dump(pair.alpha, alpha_path);
}

void export_diagnostics_csv(const PairEvolveDiagnostics& diag, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,trace_gamma,kinetic,purity_defect\n";
    out.precision(17);
    for (std::size_t i = 0; i < diag.times.size(); ++i)
        out << diag.times[i] << "," << diag.trace_gamma[i] << "," << diag.kinetic[i] << ","
            << diag.purity_defect[i] << "\n";
}

}  // namespace bosedyn
