#include "sdl/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sdl/fields.hpp"
#include "sdl/flow.hpp"
#include "sdl/forms.hpp"
#include "sdl/lie.hpp"
#include "sdl/maps.hpp"
#include "sdl/phwc.hpp"
#include "sdl/potential.hpp"
#include "sdl/spectral.hpp"

namespace sdl {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (detail.tellp() > 0) detail << ", ";
        detail << what << (ok ? "" : " [FAILED]");
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// 1. volume, d^2 = 0, adjointness at 24^3
void c1(Verdict& v) {
    auto g = build_s3_grid(24, 24, 24, 1.0);
    v.require(std::abs(g->volume - 2.0 * pi2) <= 5e-3 * 2.0 * pi2, "vol = " + fmt(g->volume));
    double dd = 0.0, adj = 0.0;
    for (int k = 0; k < 3; ++k) {
        Form a = random_form(g, k, 101 + k);
        Form da = d(a);
        if (k < 2) dd = std::max(dd, norm(d(da)) / norm(da));
        Form b = random_form(g, k + 1, 202 + k);
        Form db = codifferential(b);
        const double scl = norm(da) * norm(b) + norm(a) * norm(db);
        adj = std::max(adj, std::abs(inner(da, b) - inner(a, db)) / scl);
    }
    v.require(dd <= 1e-6, "max |d d a|/|d a| = " + fmt(dd));
    v.require(adj <= 1e-6, "adjointness = " + fmt(adj));
}

// 2. Hopf pullback identities
void c2(Verdict& v) {
    {
        auto g = build_s3_grid(40, 40, 40, 1.0);
        auto m = hopf_map(g);
        Form rho = pullback_omega(m);
        Form p2 = pointwise_norm_squared(rho);
        double worst = 0.0;
        for (double q : p2.data) worst = std::max(worst, std::abs(std::sqrt(q) - 1.0));
        v.require(worst <= 1e-6, "max ||rho| - 1| = " + fmt(worst));
        const double rel = norm(d(hodge(rho)) - 2.0 * rho) / norm(rho);
        v.require(rel <= 1e-2, "|d*rho - 2 rho| rel = " + fmt(rel));
        const double crit = criticality_residual(m) / symplectic_energy(m);
        v.require(crit <= 1e-6, "criticality/F = " + fmt(crit));
    }
    {
        auto g = build_s3_grid(24, 24, 24, 0.5);
        auto m = hopf_map(g);
        Form rho = pullback_omega(m);
        const double rel = norm(d(hodge(rho)) - 2.0 * 0.5 * rho) / norm(rho);
        v.require(rel <= 1e-2, "Berger t=0.5 |d*rho - 2t rho| rel = " + fmt(rel));
    }
}

// 3. energy constants across the Berger family
void c3(Verdict& v) {
    for (double t : {1.0, 0.25, 0.5, 0.75}) {
        auto g = build_s3_grid(24, 24, 24, t);
        auto m = hopf_map(g);
        const double F = symplectic_energy(m);
        v.require(std::abs(F - t * pi2) <= 1e-2 * t * pi2, "F(t=" + fmt(t) + ") = " + fmt(F));
        if (t == 1.0) {
            const double E = dirichlet_energy(m);
            v.require(std::abs(E - 2.0 * pi2) <= 1e-2 * 2.0 * pi2, "E = " + fmt(E));
        }
    }
}

// 4. coexact 1-form spectrum
void c4(Verdict& v) {
    auto s24 = coexact_one_form_spectrum(build_s3_grid(24, 24, 24, 1.0), 1);
    v.require(std::abs(s24.values[0] - 4.0) <= 2e-2 * 4.0, "lambda1(24) = " + fmt(s24.values[0]));
    auto s32 = coexact_one_form_spectrum(build_s3_grid(32, 32, 32, 1.0), 1);
    v.require(std::abs(s32.values[0] - 4.0) <= std::abs(s24.values[0] - 4.0) + 1e-12,
              "lambda1(32) = " + fmt(s32.values[0]));
    auto sb = coexact_one_form_spectrum(build_s3_grid(16, 16, 16, 0.5), 1);
    v.require(sb.values[0] >= 1.0 - 1e-3, "Berger lambda1 = " + fmt(sb.values[0]));
}

// 5. Hopf invariant and the energy bound over random maps
void c5(Verdict& v) {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    auto base = hopf_map(g);
    const double F = symplectic_energy(base);
    const double H = hopf_invariant(base).value;
    v.require(std::abs(H - pi2) <= 1e-2 * pi2, "H(pi) = " + fmt(H));
    v.require(std::abs(F - H) <= 1e-2 * F, "|F - H|/F = " + fmt(std::abs(F - H) / F));
    double worst = 1e300;
    for (int i = 0; i < 100; ++i) {
        const double amp = 0.05 + 0.25 * i / 99.0;
        SphereMap m = perturbed_map(base, amp, 1000 + static_cast<std::uint64_t>(i));
        const double Fm = symplectic_energy(m);
        const double Hm = hopf_invariant(m, 1e-6).value;
        worst = std::min(worst, (Fm - Hm) / Fm);
    }
    v.require(worst >= -1e-2, "min (F - H)/F over 100 maps = " + fmt(worst));
}

// 6. pure-F flow recovers the minimizer without topology drift
void c6(Verdict& v) {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    auto base = hopf_map(g);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        SphereMap m0 = perturbed_map(base, 0.05, seed);
        const double H0 = hopf_invariant(m0).value;
        FlowParams p;
        p.alpha = 0.0;
        p.grad_tol = 1e-5;
        p.max_steps = 5000;
        p.hopf_check_interval = 200;
        FlowResult r = gradient_flow(m0, p);
        const double F1 = symplectic_energy(r.map);
        const double H1 = hopf_invariant(r.map).value;
        v.require((r.converged || r.stalled) && std::abs(F1 - pi2) <= 1e-2 * pi2,
                  "seed " + std::to_string(seed) + ": F = " + fmt(F1));
        v.require(std::abs(H1 - H0) <= 1e-2 * pi2,
                  "seed " + std::to_string(seed) + ": |dH| = " + fmt(std::abs(H1 - H0)));
    }
}

// 7. stability threshold and Hessian consistency
void c7(Verdict& v) {
    {
        auto m = hopf_map(build_s3_grid(20, 20, 20, 1.0));
        auto scan = stability_threshold_scan(m, 0.5, 2.0);
        v.require(std::abs(scan.alpha_star - 1.0) <= 0.05, "alpha* = " + fmt(scan.alpha_star));
        v.require(scan.eig_low < -scan.zero_band, "eig(0.5) = " + fmt(scan.eig_low));
        v.require(scan.eig_high >= -scan.zero_band, "eig(2.0) = " + fmt(scan.eig_high));
    }
    {
        auto g = build_s3_grid(28, 28, 28, 1.0);
        auto m = hopf_map(g);
        SecondVariation sv(m);
        const double F0 = symplectic_energy(m);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            auto Y = random_tangent_field(m, 500 + static_cast<std::uint64_t>(i));
            const double quad = field_inner(*g, Y, sv.symplectic_apply(Y));
            const double eps = 1e-3;
            auto eval = [&](double e) {
                SphereMap me = m;
                for (std::size_t k = 0; k < me.n.size(); ++k) me.n[k] += e * Y[k];
                normalize_map(me);
                return symplectic_energy(me);
            };
            // 5-point second difference of F along the normalized path;
            // <Y, L Y> is half of it
            const double fd = (-eval(2 * eps) + 16 * eval(eps) - 30 * F0 + 16 * eval(-eps) -
                               eval(-2 * eps)) /
                              (12 * eps * eps);
            worst = std::max(worst, std::abs(quad - 0.5 * fd) / std::max(std::abs(0.5 * fd), 1e-30));
        }
        v.require(worst <= 1e-3, "max FD mismatch = " + fmt(worst));
    }
}

// 8. degree-constrained torus flow
void c8(Verdict& v) {
    auto g = build_t2_grid(24, 24, 2.0 * pi, 2.0 * pi);
    SphereMap m0 = torus_degree_map(g, 1);
    const double deg0 = integrate(pullback_omega(m0));
    FlowParams p;
    p.constrain_degree = true;
    p.grad_tol = 1e-8;
    p.max_steps = 30000;
    FlowResult r = gradient_flow(m0, p);
    const double F1 = symplectic_energy(r.map);
    const double target = deg0 * deg0 / (2.0 * g->volume);
    v.require((r.converged || r.stalled) && std::abs(F1 - target) <= 1e-2 * target,
              "F = " + fmt(F1) + " vs " + fmt(target));
    Form rho = pullback_omega(r.map);
    const double mean = integrate(rho) / g->volume;
    Form dev = rho;
    for (double& x : dev.data) x -= mean;
    const double relstd = norm(dev) / (std::abs(mean) * std::sqrt(g->volume));
    v.require(relstd <= 1e-3, "density rel std = " + fmt(relstd));
}

// 9. homogeneous fibrations
void c9(Verdict& v) {
    auto R3 = build_root_system(3);
    auto P3 = build_fibration(R3, {}, {0});
    auto R4 = build_root_system(4);
    auto P4 = build_fibration(R4, {1}, {1, 2});
    v.require(divergence_f(P3).norm() <= 1e-10, "su(3) |div f| = " + fmt(divergence_f(P3).norm()));
    v.require(coderivative_pullback(P3).norm() <= 1e-10,
              "su(3) |delta| = " + fmt(coderivative_pullback(P3).norm()));
    v.require(divergence_f(P4).norm() <= 1e-10, "su(4) |div f| = " + fmt(divergence_f(P4).norm()));
    v.require(coderivative_pullback(P4).norm() <= 1e-10,
              "su(4) |delta| = " + fmt(coderivative_pullback(P4).norm()));
    double ortho = 0.0;
    for (const auto* R : {&R3, &R4})
        for (std::size_t a = 0; a < R->positive.size(); ++a)
            for (std::size_t b = 0; b < R->positive.size(); ++b)
                ortho = std::max(ortho,
                                 orthogonality_check(*R, static_cast<int>(a), static_cast<int>(b)));
    v.require(ortho <= 1e-12, "max <nabla_X Y, Z> = " + fmt(ortho));
    Eigen::MatrixXd pert = Eigen::MatrixXd::Zero(P3.dim_m0, P3.dim_m0);
    pert(0, 3) = 0.3;
    pert(3, 0) = -0.3;
    const double neg = divergence_f(P3, P3.f + pert).norm();
    v.require(neg > 1e-3, "negative control |div f| = " + fmt(neg));
}

// 10. PHWC coderivative formula on the Hopf map
void c10(Verdict& v) {
    auto m = hopf_map(build_s3_grid(16, 16, 16, 1.0));
    auto r = phwc_coderivative_residual(m);
    v.require(r.rel_residual <= 1e-2, "relative residual = " + fmt(r.rel_residual));
}

} // namespace

bool run_acceptance(std::FILE* out) {
    struct Item {
        const char* name;
        std::function<void(Verdict&)> fn;
    };
    const Item items[] = {
        {"volume and operator sanity", c1},
        {"Hopf pullback identities", c2},
        {"energy constants", c3},
        {"coexact 1-form spectrum", c4},
        {"Hopf invariant and energy bound", c5},
        {"minimality via pure-F flow", c6},
        {"stability threshold and Hessian consistency", c7},
        {"degree-constrained torus flow", c8},
        {"homogeneous fibration coclosedness", c9},
        {"PHWC coderivative formula", c10},
    };

    bool all = true;
    int idx = 0;
    for (const auto& item : items) {
        ++idx;
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            item.fn(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(out, "%s [%d] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", idx, item.name,
                     v.detail.str().c_str(), dt);
        std::fflush(out);
        all = all && v.pass;
    }
    std::fprintf(out, "%s\n", all ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL");
    return all;
}

} // namespace sdl
