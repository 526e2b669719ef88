#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sdl/errors.hpp"
#include "sdl/fields.hpp"
#include "sdl/forms.hpp"
#include "sdl/grid.hpp"

using namespace sdl;

namespace {
constexpr double pi = std::numbers::pi;

// the standard contact/fiber 2-form: restriction of -(dx0^dx1 + dx2^dx3)
Form fiber_two_form(GridPtr g) {
    return restrict_two_form(g, [](const Eigen::Vector4d&) {
        Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
        c(0, 1) = -1.0;
        c(2, 3) = -1.0;
        return c;
    });
}
} // namespace

TEST_CASE("sphere grid volume is 2 pi^2 t to machine precision") {
    for (double t : {1.0, 0.5, 0.25}) {
        auto g = build_s3_grid(16, 16, 16, t);
        CHECK(std::abs(g->volume - 2.0 * pi * pi * t) < 1e-12 * g->volume);
    }
}

TEST_CASE("torus grid volume is exact") {
    auto g = build_t2_grid(16, 24, 2.0 * pi, 3.0);
    CHECK(g->volume == doctest::Approx(2.0 * pi * 3.0).epsilon(1e-14));
}

TEST_CASE("grid construction validates its inputs") {
    CHECK_THROWS_AS(build_s3_grid(4, 16, 16, 1.0), config_error);
    CHECK_THROWS_AS(build_s3_grid(16, 15, 16, 1.0), config_error);
    CHECK_THROWS_AS(build_s3_grid(16, 16, 16, 0.0), config_error);
    CHECK_THROWS_AS(build_s3_grid(16, 16, 16, -1.0), config_error);
    CHECK_THROWS_AS(build_t2_grid(4, 16, 1.0, 1.0), config_error);
    CHECK_THROWS_AS(build_t2_grid(16, 16, 0.0, 1.0), config_error);
}

TEST_CASE("d of d vanishes to machine precision") {
    auto g = build_s3_grid(12, 12, 12, 0.7);
    for (int deg : {0, 1}) {
        Form a = random_form(g, deg, 11 + deg);
        Form dda = d(d(a));
        CHECK(norm(dda) < 1e-11 * (norm(d(a)) + 1.0));
    }
    auto g2 = build_t2_grid(16, 16, 2.0 * pi, 2.0 * pi);
    Form f = random_form(g2, 0, 3);
    CHECK(norm(d(d(f))) < 1e-12 * (norm(d(f)) + 1.0));
}

TEST_CASE("hodge star is an involution up to sign") {
    auto g = build_s3_grid(8, 8, 8, 1.3);
    for (int deg = 0; deg <= 3; ++deg) {
        Form a = random_form(g, deg, 100 + deg);
        Form b = hodge(hodge(a));  // +a in odd dimensions
        CHECK(norm(b - a) == 0.0);
    }
    auto g2 = build_t2_grid(8, 8, 1.0, 1.0);
    Form a = random_form(g2, 1, 5);
    Form b = hodge(hodge(a));
    axpy(1.0, a, b);  // ** = -1 on 2d 1-forms
    CHECK(norm(b) == 0.0);
}

TEST_CASE("delta of delta vanishes to machine precision") {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    for (int deg : {2, 3}) {
        Form a = random_form(g, deg, 21 + deg);
        CHECK(norm(codifferential(codifferential(a))) < 1e-11 * (norm(codifferential(a)) + 1.0));
    }
}

TEST_CASE("degree misuse is rejected") {
    auto g = build_s3_grid(8, 8, 8, 1.0);
    Form top = random_form(g, 3, 1);
    Form zero = random_form(g, 0, 2);
    CHECK_THROWS_AS(d(top), degree_error);
    CHECK_THROWS_AS(codifferential(zero), degree_error);
    CHECK_THROWS_AS((void)wedge(top, random_form(g, 1, 3)), degree_error);
    CHECK_THROWS_AS((void)integrate(random_form(g, 2, 4)), degree_error);
}

TEST_CASE("mixing grids is rejected") {
    auto g1 = build_s3_grid(8, 8, 8, 1.0);
    auto g2 = build_s3_grid(8, 8, 8, 1.0);
    CHECK_THROWS_AS((void)inner(random_form(g1, 1, 1), random_form(g2, 1, 1)), usage_error);
}

TEST_CASE("finite-difference d matches an analytic exterior derivative") {
    // alpha = x0 dx1 restricted; d alpha = dx0 ^ dx1 restricted
    auto err = [](int n) {
        auto g = build_s3_grid(n, n, n, 1.0);
        Form a = restrict_one_form(g, [](const Eigen::Vector4d& x) {
            return Eigen::Vector4d(0.0, x(0), 0.0, 0.0);
        });
        Form exact = restrict_two_form(g, [](const Eigen::Vector4d&) {
            Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
            c(0, 1) = 1.0;
            return c;
        });
        return norm(d(a) - exact) / norm(exact);
    };
    const double e16 = err(16), e24 = err(24);
    CHECK(e16 < 5e-3);
    // sixth-order stencils: refining 16 -> 24 should shrink the error ~(2/3)^6
    CHECK(e24 < 0.2 * e16);
}

TEST_CASE("adjointness residual is at most 1e-6 relative at 24^3") {
    auto g = build_s3_grid(24, 24, 24, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        Form a = random_form(g, k, 1234 + k);
        Form b = random_form(g, k + 1, 4321 + k);
        Form da = d(a);
        Form db = codifferential(b);
        const double scl = norm(da) * norm(b) + norm(a) * norm(db);
        worst = std::max(worst, std::abs(inner(da, b) - inner(a, db)) / scl);
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("self-check rejects a broken sign convention") {
    // sanity: the self-check passes on a healthy grid (construction ran it)
    auto g = build_s3_grid(8, 8, 8, 1.0);
    CHECK_NOTHROW(adjointness_self_check(g));
}

TEST_CASE("fiber 2-form is coclosed up to the Berger eigenvalue identity") {
    // delta rho = 2t * star rho for rho = pullback of the area form under
    // the fibration (checked here through the ambient construction)
    for (double t : {1.0, 0.5}) {
        auto g = build_s3_grid(16, 16, 16, t);
        Form rho = fiber_two_form(g);
        Form lhs = codifferential(rho);
        Form rhs = 2.0 * t * hodge(rho);
        CHECK(norm(lhs - rhs) < 1e-2 * norm(rhs));
        // pointwise unit norm at t=1 scale: |rho| = t (frame includes t)
    }
}

TEST_CASE("wedge pairs with integration consistently") {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    Form a = random_form(g, 1, 7);
    Form b = random_form(g, 2, 8);
    // integral of a^b equals <a, star b> up to the star sign on 2-forms
    const double lhs = integrate(wedge(a, b));
    const double rhs = inner(a, hodge(b));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("torus d and delta are adjoint") {
    auto g = build_t2_grid(24, 24, 2.0 * pi, 4.0);
    for (int k = 0; k < 2; ++k) {
        Form a = random_form(g, k, 50 + k);
        Form b = random_form(g, k + 1, 60 + k);
        Form da = d(a);
        Form db = codifferential(b);
        const double scl = norm(da) * norm(b) + norm(a) * norm(db);
        CHECK(std::abs(inner(da, b) - inner(a, db)) <= 1e-6 * scl);
    }
}
