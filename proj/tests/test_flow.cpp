#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sdl/errors.hpp"
#include "sdl/flow.hpp"
#include "sdl/potential.hpp"

using namespace sdl;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;
}

TEST_CASE("pure symplectic flow relaxes a perturbed fibration") {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    SphereMap m0 = perturbed_map(hopf_map(g), 0.05, 21);
    const double F0 = symplectic_energy(m0);

    FlowParams p;
    p.alpha = 0.0;
    p.grad_tol = 1e-5;
    p.max_steps = 2000;
    FlowResult r = gradient_flow(m0, p);
    CHECK((r.converged || r.stalled));

    const double F1 = symplectic_energy(r.map);
    CHECK(F1 < F0);
    CHECK(F1 == doctest::Approx(pi2).epsilon(5e-2));  // 12^3 discretization floor
    // monotone trajectory
    for (std::size_t i = 1; i < r.trajectory.size(); ++i)
        CHECK(r.trajectory[i].total <= r.trajectory[i - 1].total + 1e-12);
}

TEST_CASE("flow preserves the Hopf invariant") {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    SphereMap m0 = perturbed_map(hopf_map(g), 0.05, 22);
    const double H0 = hopf_invariant(m0).value;

    FlowParams p;
    p.grad_tol = 1e-5;
    p.max_steps = 600;
    p.hopf_check_interval = 100;
    FlowResult r = gradient_flow(m0, p);
    const double H1 = hopf_invariant(r.map).value;
    CHECK(std::abs(H1 - H0) < 1e-2 * pi2);
}

TEST_CASE("composite objective includes the Dirichlet term") {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    SphereMap m0 = perturbed_map(hopf_map(g), 0.05, 23);
    FlowParams p;
    p.alpha = 0.5;
    p.max_steps = 50;
    FlowResult r = gradient_flow(m0, p);
    const auto& last = r.trajectory.back();
    CHECK(last.total == doctest::Approx(last.F + 0.5 * last.E).epsilon(1e-12));
    CHECK(last.total < r.trajectory.front().total);
}

TEST_CASE("degree-constrained torus flow reaches the constant-density energy") {
    auto g = build_t2_grid(24, 24, 2.0 * pi, 2.0 * pi);
    SphereMap m0 = torus_degree_map(g, 1);
    const double deg0 = integrate(pullback_omega(m0));
    CHECK(deg0 == doctest::Approx(pi).epsilon(1e-3));  // 2*pi*deg / 2

    FlowParams p;
    p.constrain_degree = true;
    p.grad_tol = 1e-8;
    p.max_steps = 30000;
    FlowResult r = gradient_flow(m0, p);
    CHECK((r.converged || r.stalled));

    const double target = pi2 / (2.0 * g->volume);
    CHECK(symplectic_energy(r.map) == doctest::Approx(target).epsilon(1e-2));
    Form rho = pullback_omega(r.map);
    CHECK(integrate(rho) == doctest::Approx(deg0).epsilon(1e-6));
    const double mean = integrate(rho) / g->volume;
    double var = 0.0;
    for (std::size_t i = 0; i < g->npts; ++i) {
        const double d = rho.data[i] - mean;
        var += d * d;
    }
    const double relstd = std::sqrt(var / g->npts) / std::abs(mean);
    CHECK(relstd <= 1e-3);
}
