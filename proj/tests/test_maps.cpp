#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sdl/errors.hpp"
#include "sdl/maps.hpp"

using namespace sdl;

namespace {
constexpr double pi = std::numbers::pi;

double directional_fd(const SphereMap& m, const std::vector<double>& Y, double eps,
                      double (*energy)(const SphereMap&)) {
    SphereMap plus = m, minus = m;
    for (std::size_t i = 0; i < m.n.size(); ++i) {
        plus.n[i] += eps * Y[i];
        minus.n[i] -= eps * Y[i];
    }
    normalize_map(plus);
    normalize_map(minus);
    return (energy(plus) - energy(minus)) / (2.0 * eps);
}
} // namespace

TEST_CASE("fibration pullback has unit pointwise norm") {
    auto g = build_s3_grid(24, 24, 24, 1.0);
    Form rho = pullback_omega(hopf_map(g));
    double worst = 0.0;
    for (std::size_t p = 0; p < g->npts; ++p) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += rho.at(c, p) * rho.at(c, p);
        worst = std::max(worst, std::abs(std::sqrt(s) - 1.0));
    }
    CHECK(worst < 5e-6);
}

TEST_CASE("fibration energies match the closed forms") {
    for (double t : {1.0, 0.5, 0.25}) {
        auto g = build_s3_grid(24, 24, 24, t);
        SphereMap m = hopf_map(g);
        CHECK(symplectic_energy(m) == doctest::Approx(t * pi * pi).epsilon(1e-4));
        CHECK(dirichlet_energy(m) == doctest::Approx(2.0 * t * pi * pi).epsilon(1e-4));
    }
}

TEST_CASE("fibration pullback satisfies the Berger eigenform identity") {
    for (double t : {1.0, 0.5}) {
        auto g = build_s3_grid(20, 20, 20, t);
        Form rho = pullback_omega(hopf_map(g));
        Form lhs = codifferential(rho);
        Form rhs = 2.0 * t * hodge(rho);
        CHECK(norm(lhs - rhs) < 1e-4 * norm(rhs));
    }
}

TEST_CASE("fibration is a critical point of the symplectic energy") {
    for (double t : {1.0, 0.5}) {
        auto g = build_s3_grid(24, 24, 24, t);
        SphereMap m = hopf_map(g);
        CHECK(criticality_residual(m) <= 1e-6 * symplectic_energy(m));
    }
}

TEST_CASE("symplectic gradient matches finite differences") {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    SphereMap m = perturbed_map(hopf_map(g), 0.1, 42);
    auto Y = random_tangent_field(m, 7);
    const double fd = directional_fd(m, Y, 1e-5, &symplectic_energy);
    const double an = field_inner(*g, grad_symplectic(m), Y);
    CHECK(an == doctest::Approx(fd).epsilon(2e-2));
}

TEST_CASE("dirichlet gradient matches finite differences") {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    SphereMap m = perturbed_map(hopf_map(g), 0.1, 43);
    auto Y = random_tangent_field(m, 8);
    const double fd = directional_fd(m, Y, 1e-5, &dirichlet_energy);
    const double an = field_inner(*g, grad_dirichlet(m), Y);
    CHECK(an == doctest::Approx(fd).epsilon(1e-3));
}

TEST_CASE("torus gradients match finite differences") {
    auto g = build_t2_grid(24, 24, 2.0 * pi, 2.0 * pi);
    SphereMap m = perturbed_map(torus_degree_map(g, 1), 0.05, 44);
    auto Y = random_tangent_field(m, 9);
    CHECK(field_inner(*g, grad_symplectic(m), Y) ==
          doctest::Approx(directional_fd(m, Y, 1e-5, &symplectic_energy)).epsilon(2e-2));
    CHECK(field_inner(*g, grad_dirichlet(m), Y) ==
          doctest::Approx(directional_fd(m, Y, 1e-5, &dirichlet_energy)).epsilon(1e-3));
}

TEST_CASE("degree map pullback integrates to degree times target area") {
    auto g = build_t2_grid(32, 32, 2.0 * pi, 2.0 * pi);
    for (int deg : {1, 2}) {
        Form rho = pullback_omega(torus_degree_map(g, deg));
        CHECK(integrate(rho) == doctest::Approx(deg * pi).epsilon(1e-3));
    }
}

TEST_CASE("perturbed maps stay on the unit sphere") {
    auto g = build_s3_grid(8, 8, 8, 1.0);
    SphereMap m = perturbed_map(hopf_map(g), 0.3, 5);
    for (std::size_t p = 0; p < g->npts; ++p) {
        double s = m.at(0, p) * m.at(0, p) + m.at(1, p) * m.at(1, p) + m.at(2, p) * m.at(2, p);
        CHECK(std::abs(s - 1.0) < 1e-14);
    }
    auto Y = random_tangent_field(m, 6);
    double worst = 0.0;
    for (std::size_t p = 0; p < g->npts; ++p)
        worst = std::max(worst, std::abs(Y[p] * m.at(0, p) + Y[g->npts + p] * m.at(1, p) +
                                         Y[2 * g->npts + p] * m.at(2, p)));
    CHECK(worst < 1e-13);
}

TEST_CASE("maps reject the wrong grid kind") {
    auto s3 = build_s3_grid(8, 8, 8, 1.0);
    auto t2 = build_t2_grid(8, 8, 1.0, 1.0);
    CHECK_THROWS_AS((void)hopf_map(t2), domain_error);
    CHECK_THROWS_AS((void)torus_degree_map(s3, 1), domain_error);
}
