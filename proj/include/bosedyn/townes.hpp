#ifndef BOSEDYN_TOWNES_HPP
#define BOSEDYN_TOWNES_HPP

#include <stdexcept>
#include <vector>

#include "bosedyn/field.hpp"

namespace bosedyn {

struct TownesSolution {
    ComplexField Q;       // positive radial profile, centered in the box
    double a_star = 0.0;  // squared L2 norm of Q
    double residual = 0.0;
    int flow_iterations = 0;
    int newton_iterations = 0;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

struct TownesOptions {
    double flow_step = 0.08;
    double flow_target_residual = 5e-3;
    int max_flow_iterations = 20000;
    double newton_target_residual = 1e-12;
    int max_newton_iterations = 20;
};

// Ground-state profile of  -lap Q + Q - Q^3 = 0  on a d=2 grid: damped
// normalized flow (Strang-split heat steps with an optimal amplitude rescale
// each step) into a Newton polish on the residual.
TownesSolution townes_ground_state(const PeriodicGrid& grid, const TownesOptions& opt = {});

// residual field -lap f + f - f^3
ComplexField townes_residual(const ComplexField& f);

}  // namespace bosedyn

#endif
