#include "sdl/flow.hpp"

#include <cmath>
#include <limits>

#include "sdl/errors.hpp"
#include "sdl/potential.hpp"

namespace sdl {

namespace {

double objective(const SphereMap& m, double alpha, double* E_out, double* F_out) {
    const double F = symplectic_energy(m);
    const double E = (alpha != 0.0 || E_out) ? dirichlet_energy(m) : 0.0;
    if (E_out) *E_out = E;
    if (F_out) *F_out = F;
    return F + alpha * E;
}

SphereMap stepped(const SphereMap& m, const std::vector<double>& g, double dt) {
    SphereMap out = m;
    for (std::size_t i = 0; i < out.n.size(); ++i) out.n[i] -= dt * g[i];
    normalize_map(out);
    return out;
}

} // namespace

FlowResult gradient_flow(SphereMap m, const FlowParams& p) {
    FlowResult res;
    double dt = p.dt0;
    double E, F;
    double phi = objective(m, p.alpha, &E, &F);
    double hopf0 = std::numeric_limits<double>::quiet_NaN();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    const bool monitor = p.hopf_check_interval > 0 && m.grid->dim == 3;
    if (monitor) hopf0 = hopf_invariant(m).value;

    const bool constrain = p.constrain_degree;
    if (constrain && m.grid->kind != GridKind::FlatTorus)
        throw usage_error("degree-constrained flow requires a torus domain");
    const double deg0 = constrain ? integrate(pullback_omega(m)) : 0.0;

    for (int step = 0; step < p.max_steps; ++step) {
        if (constrain && step > 0 && step % p.degree_fix_interval == 0) {
            // Newton step back onto the degree-integral level set; drift is
            // tiny between corrections so one step suffices.
            const std::vector<double> gi = grad_degree_integral(m);
            const double gii = field_inner(*m.grid, gi, gi);
            if (gii > 0.0) {
                const double mu = (integrate(pullback_omega(m)) - deg0) / gii;
                for (std::size_t i = 0; i < m.n.size(); ++i) m.n[i] -= mu * gi[i];
                normalize_map(m);
                phi = objective(m, p.alpha, &E, &F);
            }
        }

        std::vector<double> g = grad_symplectic(m);
        if (p.alpha != 0.0) {
            const std::vector<double> ge = grad_dirichlet(m);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += p.alpha * ge[i];
        }
        if (constrain) {
            const std::vector<double> gi = grad_degree_integral(m);
            const double gii = field_inner(*m.grid, gi, gi);
            if (gii > 0.0) {
                const double lam = field_inner(*m.grid, g, gi) / gii;
                for (std::size_t i = 0; i < g.size(); ++i) g[i] -= lam * gi[i];
            }
        }
        const double gnorm2 = field_inner(*m.grid, g, g);
        const double gnorm = std::sqrt(gnorm2);

        double hopf = nan;
        if (monitor && step % p.hopf_check_interval == 0) {
            hopf = hopf_invariant(m).value;
            constexpr double pi2 = 9.869604401089358;
            if (std::abs(hopf - hopf0) > p.hopf_drift_tol * pi2)
                throw homotopy_escape_error("flow left its homotopy class");
        }
        res.trajectory.push_back({step, E, F, phi, gnorm, dt, hopf});
        res.steps = step;
        if (gnorm <= p.grad_tol) {
            res.converged = true;
            break;
        }

        // Armijo backtracking on Phi
        while (true) {
            SphereMap trial = stepped(m, g, dt);
            double Et, Ft;
            const double phit = objective(trial, p.alpha, &Et, &Ft);
            if (phit <= phi - p.armijo_c * dt * gnorm2) {
                m = std::move(trial);
                phi = phit;
                E = Et;
                F = Ft;
                dt *= p.grow;
                break;
            }
            dt *= p.shrink;
            if (dt < p.dt_min) {
                // The analytic descent direction approximates the gradient of
                // the discrete energy, so near a minimizer the line search can
                // run out of representable decrease.  Accept that as a stall
                // when the gradient is already small; otherwise it is a
                // genuine failure.
                if (gnorm <= p.stall_tol) {
                    res.stalled = true;
                    res.map = std::move(m);
                    return res;
                }
                throw stagnation_error("line search step collapsed below dt_min");
            }
        }
    }
    res.map = std::move(m);
    return res;
}

} // namespace sdl
