#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sdl/errors.hpp"
#include "sdl/fields.hpp"
#include "sdl/flow.hpp"
#include "sdl/spectral.hpp"

using namespace sdl;

namespace {

constexpr double pi = std::numbers::pi;

double energy_at(const SphereMap& m0, const std::vector<double>& Y, double eps, bool symp) {
    SphereMap m = m0;
    for (std::size_t i = 0; i < m.n.size(); ++i) m.n[i] += eps * Y[i];
    normalize_map(m);
    return symp ? symplectic_energy(m) : dirichlet_energy(m);
}

// 5-point second derivative along the normalized path
double fd_second(const SphereMap& m0, const std::vector<double>& Y, double eps, bool symp) {
    const double f0 = symp ? symplectic_energy(m0) : dirichlet_energy(m0);
    const double f1 = energy_at(m0, Y, eps, symp), fm1 = energy_at(m0, Y, -eps, symp);
    const double f2 = energy_at(m0, Y, 2 * eps, symp), fm2 = energy_at(m0, Y, -2 * eps, symp);
    return (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * eps * eps);
}

} // namespace

TEST_CASE("coexact projection removes the exact part") {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    Form a = random_form(g, 1, 42);
    Form p = project_coexact_one_form(a);
    CHECK(norm(codifferential(p)) < 1e-6 * norm(a));
    // idempotent
    Form pp = project_coexact_one_form(p);
    double diff = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i)
        diff = std::max(diff, std::abs(pp.data[i] - p.data[i]));
    CHECK(diff < 1e-6 * norm(p));
    // a gradient projects to (nearly) zero
    Form f = random_form(g, 0, 43);
    Form df = d(f);
    Form pdf = project_coexact_one_form(df);
    CHECK(norm(pdf) < 1e-5 * norm(df));
    CHECK_THROWS_AS(project_coexact_one_form(random_form(g, 0, 1)), usage_error);
}

TEST_CASE("coexact 1-form spectrum starts at four on the round sphere") {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    auto sp = coexact_one_form_spectrum(g, 3);
    REQUIRE(sp.values.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(sp.values[i] == doctest::Approx(4.0).epsilon(2e-2));
        CHECK(sp.residuals[i] < 1e-2);
    }
    // degenerate cluster
    CHECK(std::abs(sp.values[2] - sp.values[0]) < 2e-2 * sp.values[0]);
    // refinement improves the eigenvalue
    auto g2 = build_s3_grid(20, 20, 20, 1.0);
    auto sp2 = coexact_one_form_spectrum(g2, 1);
    CHECK(std::abs(sp2.values[0] - 4.0) < std::abs(sp.values[0] - 4.0));
}

TEST_CASE("Berger squashing obeys the curvature eigenvalue bound") {
    auto g = build_s3_grid(16, 16, 16, 0.5);
    auto sp = coexact_one_form_spectrum(g, 1);
    CHECK(sp.values[0] >= 1.0 - 1e-3);  // 4 t^2 with t = 1/2
    CHECK(sp.values[0] == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("second variation matches finite differences at the fibration") {
    auto g = build_s3_grid(20, 20, 20, 1.0);
    SphereMap h = hopf_map(g);
    SecondVariation sv(h);
    for (std::uint64_t s = 0; s < 4; ++s) {
        auto Y = random_tangent_field(h, 300 + s);
        const double qe = field_inner(*g, Y, sv.dirichlet_apply(Y));
        const double qf = field_inner(*g, Y, sv.symplectic_apply(Y));
        CHECK(qe == doctest::Approx(0.5 * fd_second(h, Y, 1e-3, false)).epsilon(3e-3));
        CHECK(qf == doctest::Approx(0.5 * fd_second(h, Y, 1e-3, true)).epsilon(3e-3));
    }
    // symmetry of both operators
    auto X = random_tangent_field(h, 1), Y = random_tangent_field(h, 2);
    const double fxy = field_inner(*g, X, sv.symplectic_apply(Y));
    const double fyx = field_inner(*g, Y, sv.symplectic_apply(X));
    CHECK(fxy == doctest::Approx(fyx).epsilon(1e-4));
    const double exy = field_inner(*g, X, sv.dirichlet_apply(Y));
    const double eyx = field_inner(*g, Y, sv.dirichlet_apply(X));
    CHECK(exy == doctest::Approx(eyx).epsilon(1e-4));
}

TEST_CASE("Jacobi operator demands a critical map") {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    SphereMap h = hopf_map(g);
    std::vector<double> zero(3 * g->npts, 0.0);
    auto out = jacobi_apply(h, zero);
    CHECK(field_norm(*g, out) == 0.0);
    SphereMap bad = perturbed_map(h, 0.3, 5);
    CHECK_THROWS_AS(jacobi_apply(bad, zero), precondition_error);
}

TEST_CASE("coclosed Hessian form is a manifest square") {
    // a smooth map into a great circle has vanishing (hence coclosed)
    // pullback
    auto g = build_t2_grid(24, 24, 2.0 * pi, 2.0 * pi);
    SphereMap m;
    m.grid = g;
    m.n.resize(3 * g->npts);
    const std::size_t np = g->npts;
    for (int i = 0; i < g->n[0]; ++i)
        for (int j = 0; j < g->n[1]; ++j) {
            const double x = (i + 0.5) * g->h[0], y = (j + 0.5) * g->h[1];
            const double gamma = 0.7 * std::sin(x) + 0.3 * std::cos(y);
            const std::size_t q = g->index2(i, j);
            m.n[q] = std::cos(gamma);
            m.n[np + q] = std::sin(gamma);
            m.n[2 * np + q] = 0.0;
        }

    for (std::uint64_t s = 0; s < 3; ++s) {
        auto X = random_tangent_field(m, 50 + s);
        const double h = hessian_coclosed_form(m, X);
        CHECK(h >= 0.0);
        CHECK(h == doctest::Approx(0.5 * fd_second(m, X, 1e-4, true)).epsilon(1e-3));
    }
    // a rigid target rotation leaves the pullback fixed: closed contraction
    std::vector<double> rot(3 * np);
    for (std::size_t q = 0; q < np; ++q) {
        rot[q] = -m.n[np + q];
        rot[np + q] = m.n[q];
        rot[2 * np + q] = 0.0;
    }
    auto Xr = random_tangent_field(m, 1);
    const double scale = hessian_coclosed_form(m, Xr);
    CHECK(hessian_coclosed_form(m, rot) < 1e-10 * std::max(scale, 1.0));
    // precondition: the Hopf pullback is not coclosed
    auto gs = build_s3_grid(12, 12, 12, 1.0);
    SphereMap h3 = hopf_map(gs);
    auto X3 = random_tangent_field(h3, 2);
    CHECK_THROWS_AS(hessian_coclosed_form(h3, X3), precondition_error);
}

TEST_CASE("stability threshold sits at unit coupling") {
    auto g = build_s3_grid(20, 20, 20, 1.0);
    SphereMap h = hopf_map(g);
    auto scan = stability_threshold_scan(h, 0.5, 1.5);
    CHECK(scan.alpha_star == doctest::Approx(1.0).epsilon(5e-2));
    CHECK(scan.eig_low < 0.0);

    // monotone curve within the zero band
    HessianPencil pencil = hessian_pencil(h);
    double prev = -1e30;
    for (double a = 0.5; a <= 1.51; a += 0.1) {
        const double e = smallest_hessian_eig(pencil, a);
        CHECK(e >= prev - scan.zero_band);
        prev = e;
    }
    // end states of the theorem
    CHECK(smallest_hessian_eig(pencil, 2.0) >= -scan.zero_band);
    CHECK(smallest_hessian_eig(pencil, 0.5) < -scan.zero_band);

    CHECK_THROWS_AS(stability_threshold_scan(h, 1.5, 0.5), usage_error);
    CHECK_THROWS_AS(stability_threshold_scan(h, 1.2, 1.5), numerical_error);
}
