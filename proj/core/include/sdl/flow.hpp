#pragma once

#include <vector>

#include "sdl/maps.hpp"

namespace sdl {

/// Armijo-backtracked gradient descent on Phi = F + alpha * E over maps into
/// the sphere (alpha = 0 gives the pure symplectic flow).
struct FlowParams {
    double alpha = 0.0;
    double dt0 = 0.1;            // initial step size
    double grad_tol = 1e-7;      // stop when |grad Phi| falls below this
    int max_steps = 5000;
    double armijo_c = 1e-4;
    double shrink = 0.5;
    double grow = 1.2;
    double dt_min = 1e-12;       // below this the flow has stagnated
    double stall_tol = 0.2;      // gradient level at which a collapsed line
                                 // search counts as a stall, not an error
    int hopf_check_interval = 0;  // 0 disables in-flow topology monitoring
    double hopf_drift_tol = 0.5;  // in units of pi^2, checked when monitoring
    bool constrain_degree = false;  // torus only: project descent against the
                                    // degree-integral gradient so the flow
                                    // stays on its level set
    int degree_fix_interval = 50;   // restore the degree integral this often
};

struct FlowStep {
    int step;
    double E, F, total;
    double grad_norm;
    double dt;
    double hopf;  // NaN when not evaluated at this step
};

struct FlowResult {
    SphereMap map;
    std::vector<FlowStep> trajectory;
    bool converged = false;
    bool stalled = false;  // line search exhausted with a small gradient
    int steps = 0;
};

/// Throws stagnation_error if the line search collapses and
/// homotopy_escape_error if the monitored Hopf invariant drifts.
FlowResult gradient_flow(SphereMap m, const FlowParams& params);

} // namespace sdl
