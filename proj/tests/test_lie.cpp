#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sdl/errors.hpp"
#include "sdl/forms.hpp"
#include "sdl/grid.hpp"
#include "sdl/lie.hpp"
#include "sdl/maps.hpp"
#include "sdl/phwc.hpp"

using namespace sdl;

namespace {

Eigen::MatrixXcd random_su(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = std::complex<double>(dist(rng), dist(rng));
    Eigen::MatrixXcd X = 0.5 * (A - A.adjoint());
    X -= (X.trace() / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n);
    return X;
}

Eigen::MatrixXd random_skew(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXd A(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = dist(rng);
    return 0.5 * (A - A.transpose());
}

} // namespace

TEST_CASE("A_{n-1} root systems from elementary matrices") {
    CHECK_THROWS_AS(build_root_system(1), config_error);
    CHECK_THROWS_AS(build_root_system(9), config_error);

    auto R2 = build_root_system(2);
    CHECK(R2.roots.size() == 2);
    CHECK(R2.positive.size() == 1);
    CHECK(R2.simple.size() == 1);

    auto R3 = build_root_system(3);
    CHECK(R3.roots.size() == 6);
    CHECK(R3.positive.size() == 3);
    CHECK(R3.simple.size() == 2);

    // [h, E_alpha] = alpha(h) E_alpha for diagonal h
    std::mt19937_64 rng(11);
    std::normal_distribution<double> dist;
    for (int n : {3, 5, 8}) {
        auto R = build_root_system(n);
        Eigen::VectorXcd hd(n);
        double tr = 0.0;
        for (int i = 0; i < n; ++i) {
            hd(i) = std::complex<double>(0.0, dist(rng));
            tr += hd(i).imag();
        }
        for (int i = 0; i < n; ++i) hd(i) -= std::complex<double>(0.0, tr / n);
        Eigen::MatrixXcd h = hd.asDiagonal();
        for (std::size_t k = 0; k < R.roots.size(); ++k) {
            Eigen::MatrixXcd br = h * R.root_space[k] - R.root_space[k] * h;
            CHECK((br - R.eval(static_cast<int>(k), hd) * R.root_space[k]).norm() <= 1e-12);
        }
        // [E_alpha, E_{-alpha}] is diagonal (lies in the Cartan subalgebra)
        for (int pr : R.positive) {
            const auto [i, j] = R.ij[pr];
            int neg = -1;
            for (std::size_t k = 0; k < R.ij.size(); ++k)
                if (R.ij[k] == std::make_pair(j, i)) neg = static_cast<int>(k);
            Eigen::MatrixXcd br = R.root_space[pr] * R.root_space[neg] - R.root_space[neg] * R.root_space[pr];
            Eigen::MatrixXcd off = br - Eigen::MatrixXcd(br.diagonal().asDiagonal());
            CHECK(off.norm() <= 1e-14);
        }
    }
}

TEST_CASE("minus-Killing form is ad-invariant") {
    std::mt19937_64 rng(23);
    for (int n : {2, 4, 6}) {
        for (int trial = 0; trial < 5; ++trial) {
            auto X = random_su(n, rng), Y = random_su(n, rng), Z = random_su(n, rng);
            const double lhs = minus_killing(n, X * Y - Y * X, Z);
            const double rhs = -minus_killing(n, Y, X * Z - Z * X);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("flag fibrations carry an orthonormal f-structure") {
    auto R3 = build_root_system(3);

    CHECK_THROWS_AS(build_fibration(R3, {0}, {1}), usage_error);
    CHECK_THROWS_AS(build_fibration(R3, {}, {5}), usage_error);
    auto R4 = build_root_system(4);
    CHECK_THROWS_AS(build_fibration(R4, {}, {1}), unsupported_target_error);

    // full flag F(1,1,1) -> CP^2
    auto Phi = build_fibration(R3, {}, {0});
    CHECK(Phi.dim_m0 == 6);
    CHECK(Phi.vertical_idx.size() == 2);
    CHECK(Phi.horizontal_idx.size() == 4);

    // two-step flag -> Gr_1(C^4)
    auto Phi4 = build_fibration(R4, {1}, {1, 2});
    CHECK(Phi4.dim_m0 == 10);

    // degenerate point target for n = 2
    auto R2 = build_root_system(2);
    auto Phi2 = build_fibration(R2, {}, {0});
    CHECK(Phi2.dim_m0 == 2);
    CHECK(Phi2.horizontal_idx.empty());
    CHECK(divergence_f(Phi2).norm() <= 1e-14);

    for (const auto* P : {&Phi, &Phi4}) {
        const int d = P->dim_m0;
        // orthonormal basis wrt minus-Killing
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double gij = minus_killing(P->n, P->m0_basis[i], P->m0_basis[j]);
                CHECK(std::abs(gij - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
        const Eigen::MatrixXd& f = P->f;
        CHECK((f * f * f + f).norm() <= 1e-12);
        CHECK((f + f.transpose()).norm() <= 1e-12);
        // almost complex on the horizontal space, zero on the fibre
        const Eigen::MatrixXd f2 = f * f;
        for (int k : P->horizontal_idx) CHECK((f2.col(k) + Eigen::VectorXd::Unit(d, k)).norm() <= 1e-12);
        for (int k : P->vertical_idx) CHECK(f.col(k).norm() <= 1e-14);
    }
}

TEST_CASE("the (1,0) space is invariant under the isotropy complexification") {
    auto R = build_root_system(4);
    const std::vector<int> pi0{1};
    // spans: m0^{1,0} = E_alpha for positive alpha outside [Pi0]
    std::vector<Eigen::MatrixXcd> span10, k0c;
    for (int pr : R.positive) {
        const auto [i, j] = R.ij[pr];
        const bool inside = (i == 1 && j == 2);  // [Pi0] = {e_2 - e_3}
        int neg = -1;
        for (std::size_t k = 0; k < R.ij.size(); ++k)
            if (R.ij[k] == std::make_pair(j, i)) neg = static_cast<int>(k);
        if (inside) {
            k0c.push_back(R.root_space[pr]);
            k0c.push_back(R.root_space[neg]);
        } else {
            span10.push_back(R.root_space[pr]);
        }
    }
    for (int i = 0; i + 1 < 4; ++i) {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
        h(i, i) = 1.0;
        h(i + 1, i + 1) = -1.0;
        k0c.push_back(h);
    }

    // least-squares projection onto span10 in the flattened matrix space
    const int nsq = 16;
    Eigen::MatrixXcd S(nsq, static_cast<int>(span10.size()));
    for (std::size_t k = 0; k < span10.size(); ++k)
        S.col(static_cast<int>(k)) = Eigen::Map<const Eigen::VectorXcd>(span10[k].data(), nsq);
    for (const auto& k : k0c)
        for (const auto& e : span10) {
            Eigen::MatrixXcd br = k * e - e * k;
            Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(br.data(), nsq);
            Eigen::VectorXcd c = S.colPivHouseholderQr().solve(v);
            CHECK((S * c - v).norm() <= 1e-12 * (1.0 + v.norm()));
        }
}

TEST_CASE("homogeneous fibrations have divergence-free f") {
    auto R3 = build_root_system(3);
    auto Phi = build_fibration(R3, {}, {0});
    CHECK(divergence_f(Phi).norm() <= 1e-10);
    CHECK(coderivative_pullback(Phi).norm() <= 1e-10);

    auto R4 = build_root_system(4);
    auto Phi4 = build_fibration(R4, {1}, {1, 2});
    CHECK(divergence_f(Phi4).norm() <= 1e-10);
    CHECK(coderivative_pullback(Phi4).norm() <= 1e-10);

    // cosymplectic source: the Kaehler form of G/K0 itself is coclosed
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Phi.dim_m0, Phi.dim_m0);
    for (int k = 0; k + 1 < Phi.dim_m0; k += 2) {
        J(k + 1, k) = 1.0;
        J(k, k + 1) = -1.0;
    }
    CHECK(coderivative_pullback(Phi, J).norm() <= 1e-10);

    // negative control: a skew but non-parallel tensor has nonzero divergence,
    // and the direct codifferential still equals -flat(div f)
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd fp = Phi.f + 0.3 * random_skew(Phi.dim_m0, rng);
    const Eigen::VectorXd div = divergence_f(Phi, fp);
    CHECK(div.norm() > 1e-3);
    CHECK((coderivative_pullback(Phi, fp) + div).norm() <= 1e-10);
}

TEST_CASE("root-space covariant derivatives are orthogonal across root pairs") {
    auto R3 = build_root_system(3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(orthogonality_check(R3, a, b) <= 1e-12);
    auto R4 = build_root_system(4);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(orthogonality_check(R4, a, b) <= 1e-12);
}

TEST_CASE("the PHWC coderivative identity holds on the Hopf map") {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    auto m = hopf_map(g);

    // the Hopf map is harmonic; the tension field checks the frame connection
    CHECK(field_norm(*g, tension_field(m)) <= 1e-3);

    auto r = phwc_coderivative_residual(m);
    CHECK(r.lhs_norm == doctest::Approx(2.0 * std::numbers::pi * std::sqrt(2.0)).epsilon(1e-3));
    CHECK(r.rel_residual <= 1e-4);

    // horizontally homothetic case: delta phi^* omega = -flat(div f)
    const auto F = map_f_structure(m);
    const auto div = map_divergence_f(m, F);
    const Form lhs = codifferential(pullback_omega(m));
    Form fl = make_form(g, 1);
    for (int b = 0; b < 3; ++b)
        for (std::size_t p = 0; p < g->npts; ++p) fl.at(b, p) = -div[b * g->npts + p];
    CHECK(norm(lhs - fl) / norm(lhs) <= 1e-3);
}

TEST_CASE("the PHWC identity survives a non-homothetic rescaling") {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    auto m = mobius_rescaled_map(hopf_map(g), 1.3);
    auto r = phwc_coderivative_residual(m);
    CHECK(r.lhs_norm > 1.0);
    CHECK(r.rel_residual <= 1e-3);
}

TEST_CASE("the PHWC residual vanishes identically on a constant map") {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    auto m = make_constant_map(g, {0.0, 0.0, 1.0});
    auto r = phwc_coderivative_residual(m);
    CHECK(r.lhs_norm <= 1e-14);
    CHECK(r.rhs_norm <= 1e-14);
    CHECK(field_norm(*g, tension_field(m)) <= 1e-14);
}
