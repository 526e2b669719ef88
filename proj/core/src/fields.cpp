#include "sdl/fields.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sdl/errors.hpp"

namespace sdl {

Eigen::Vector4d s3_ambient(const Grid& g, int i, int j, int k) {
    const double eta = g.eta[i], xi1 = (j + 0.5) * g.h[1], xi2 = (k + 0.5) * g.h[2];
    const double c = std::cos(eta), s = std::sin(eta);
    return {c * std::cos(xi1), c * std::sin(xi1), s * std::cos(xi2), s * std::sin(xi2)};
}

Eigen::Matrix<double, 4, 3> s3_jacobian(const Grid& g, int i, int j, int k) {
    const double eta = g.eta[i], xi1 = (j + 0.5) * g.h[1], xi2 = (k + 0.5) * g.h[2];
    const double c = std::cos(eta), s = std::sin(eta);
    const double c1 = std::cos(xi1), s1 = std::sin(xi1);
    const double c2 = std::cos(xi2), s2 = std::sin(xi2);
    Eigen::Matrix<double, 4, 3> J;
    J << -s * c1, -c * s1, 0.0,
         -s * s1,  c * c1, 0.0,
          c * c2,  0.0,   -s * s2,
          c * s2,  0.0,    s * c2;
    return J;
}

Form restrict_scalar(GridPtr gp, const AmbientScalar& f) {
    const Grid& g = *gp;
    if (g.kind != GridKind::S3Berger) throw domain_error("ambient restriction needs a sphere grid");
    Form r = make_form(gp, 0);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k)
                r.data[g.index(i, j, k)] = f(s3_ambient(g, i, j, k));
    return r;
}

Form restrict_one_form(GridPtr gp, const AmbientOneForm& p) {
    const Grid& g = *gp;
    if (g.kind != GridKind::S3Berger) throw domain_error("ambient restriction needs a sphere grid");
    Form r = make_form(gp, 1);
    const std::size_t np = g.npts;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const auto x = s3_ambient(g, i, j, k);
                const auto J = s3_jacobian(g, i, j, k);
                Eigen::Vector3d fr = g.B1[i] * (J.transpose() * p(x));
                const std::size_t idx = g.index(i, j, k);
                for (int c = 0; c < 3; ++c) r.data[c * np + idx] = fr(c);
            }
    return r;
}

Form restrict_two_form(GridPtr gp, const AmbientTwoForm& p) {
    const Grid& g = *gp;
    if (g.kind != GridKind::S3Berger) throw domain_error("ambient restriction needs a sphere grid");
    Form r = make_form(gp, 2);
    const std::size_t np = g.npts;
    const int pairA[3] = {1, 2, 0}, pairB[3] = {2, 0, 1};
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const auto x = s3_ambient(g, i, j, k);
                const auto J = s3_jacobian(g, i, j, k);
                const Eigen::Matrix4d c = p(x);
                Eigen::Vector3d coord = Eigen::Vector3d::Zero();
                for (int cc = 0; cc < 3; ++cc) {
                    const int a = pairA[cc], b = pairB[cc];
                    double v = 0.0;
                    for (int mu = 0; mu < 4; ++mu)
                        for (int nu = mu + 1; nu < 4; ++nu)
                            v += c(mu, nu) * (J(mu, a) * J(nu, b) - J(mu, b) * J(nu, a));
                    coord(cc) = v;
                }
                Eigen::Vector3d fr = g.B2[i] * coord;
                const std::size_t idx = g.index(i, j, k);
                for (int cc = 0; cc < 3; ++cc) r.data[cc * np + idx] = fr(cc);
            }
    return r;
}

namespace {

// quadratic polynomial on the ambient R^4
struct Poly4 {
    double c0 = 0.0;
    Eigen::Vector4d c1 = Eigen::Vector4d::Zero();
    Eigen::Matrix4d c2 = Eigen::Matrix4d::Zero();
    double operator()(const Eigen::Vector4d& x) const {
        return c0 + c1.dot(x) + x.dot(c2 * x);
    }
};

Poly4 random_poly(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Poly4 p;
    p.c0 = u(rng);
    for (int i = 0; i < 4; ++i) p.c1(i) = u(rng);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) p.c2(i, j) = u(rng);
    return p;
}

Form random_form_s3(GridPtr gp, int degree, std::mt19937_64& rng) {
    if (degree == 0 || degree == 3) {
        Poly4 p = random_poly(rng);
        Form r = restrict_scalar(gp, [&](const Eigen::Vector4d& x) { return p(x); });
        r.degree = degree;
        r.ncomp = 1;
        return r;
    }
    if (degree == 1) {
        Poly4 p[4];
        for (auto& q : p) q = random_poly(rng);
        return restrict_one_form(gp, [&](const Eigen::Vector4d& x) {
            return Eigen::Vector4d(p[0](x), p[1](x), p[2](x), p[3](x));
        });
    }
    Poly4 p[4][4];
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) p[mu][nu] = random_poly(rng);
    return restrict_two_form(gp, [&](const Eigen::Vector4d& x) {
        Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) c(mu, nu) = p[mu][nu](x);
        return c;
    });
}

void fill_trig_scalar(const Grid& g, double* out, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    constexpr double twopi = 2.0 * std::numbers::pi;
    double amp[3][3], phase[3][3];
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            amp[m][n] = u(rng);
            phase[m][n] = std::numbers::pi * u(rng);
        }
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            const double x = (i + 0.5) * g.h[0], y = (j + 0.5) * g.h[1];
            double v = 0.0;
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n)
                    v += amp[m][n] * std::cos(twopi * (m * x / g.L[0] + n * y / g.L[1]) + phase[m][n]);
            out[g.index2(i, j)] = v;
        }
}

} // namespace

Form random_form(GridPtr gp, int degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (gp->kind == GridKind::S3Berger) return random_form_s3(std::move(gp), degree, rng);
    Form r = make_form(std::move(gp), degree);
    for (int c = 0; c < r.ncomp; ++c) fill_trig_scalar(*r.grid, r.comp(c), rng);
    return r;
}

void adjointness_self_check(const GridPtr& g) {
    const int dim = g->dim;
    for (int k = 0; k < dim; ++k) {
        Form a = random_form(g, k, 0x5d17c0de + k);
        Form b = random_form(g, k + 1, 0xa11ce + k);
        const double lhs = inner(d(a), b);
        const double rhs = inner(a, codifferential(b));
        const double scl = norm(d(a)) * norm(b) + norm(a) * norm(codifferential(b)) + 1e-30;
        if (!(std::abs(lhs - rhs) <= 0.02 * scl))
            throw numerical_error("d/delta adjointness self-check failed on grid " + g->id);
    }
}

} // namespace sdl
