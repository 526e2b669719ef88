#include "sdl/potential.hpp"

#include <cmath>
#include <numbers>

#include "sdl/errors.hpp"

namespace sdl {

PotentialSolve solve_coexact_potential(const Form& rho, double reltol, int maxiter) {
    if (rho.grid->dim != 3 || rho.degree != 2)
        throw usage_error("potential solve expects a 2-form on a 3-manifold");
    GridPtr g = rho.grid;

    Form b = codifferential(rho);
    auto wrap = [&](const Vec& v) {
        Form f = make_form(g, 1);
        f.data = v;
        return f;
    };
    ApplyFn apply = [&](const Vec& x, Vec& out) {
        Form fx = wrap(x);
        Form r = codifferential(d(fx)) + d(codifferential(fx));
        out = std::move(r.data);
    };
    DotFn dot = [&](const Vec& x, const Vec& y) { return inner(wrap(x), wrap(y)); };

    PotentialSolve ps{make_form(g, 1), 0.0, {}};
    Vec x(b.data.size(), 0.0);
    ps.cg = conjugate_gradient(apply, b.data, x, dot, reltol, maxiter);
    // the codifferential is adjoint to d only up to quadrature accuracy, so
    // CG can plateau slightly above a very tight tolerance; accept any
    // stall comfortably inside discretization accuracy
    if (!ps.cg.converged && ps.cg.residual > 1e-6)
        throw numerical_error("potential CG did not converge");
    ps.A.data = std::move(x);
    const double rnorm = norm(rho);
    ps.residual = (rnorm > 0.0) ? norm(d(ps.A) - rho) / rnorm : 0.0;
    return ps;
}

HopfInvariant hopf_invariant(const SphereMap& m, double reltol, int maxiter) {
    Form rho = pullback_omega(m);
    PotentialSolve ps = solve_coexact_potential(rho, reltol, maxiter);
    HopfInvariant h;
    h.value = integrate(wedge(d(ps.A), ps.A));
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    h.rounded = std::lround(h.value / pi2);
    h.rounding_gap = std::abs(h.value / pi2 - static_cast<double>(h.rounded));
    h.potential_residual = ps.residual;
    h.cg = ps.cg;
    return h;
}

} // namespace sdl
