#include "sdl/maps.hpp"

#include <cmath>
#include <numbers>

#include "sdl/errors.hpp"
#include "sdl/fields.hpp"

namespace sdl {

SphereMap make_constant_map(GridPtr g, const Eigen::Vector3d& dir) {
    SphereMap m;
    m.grid = std::move(g);
    m.n.resize(3 * m.grid->npts);
    const Eigen::Vector3d u = dir.normalized();
    for (int c = 0; c < 3; ++c)
        std::fill(m.comp(c), m.comp(c) + m.grid->npts, u(c));
    return m;
}

void normalize_map(SphereMap& m) {
    const std::size_t np = m.grid->npts;
#pragma omp parallel for
    for (long long p = 0; p < static_cast<long long>(np); ++p) {
        const double r = std::sqrt(m.n[p] * m.n[p] + m.n[np + p] * m.n[np + p] +
                                   m.n[2 * np + p] * m.n[2 * np + p]);
        if (!(r > 1e-8))
            throw numerical_error("map normalization hit a near-zero vector");
        m.n[p] /= r;
        m.n[np + p] /= r;
        m.n[2 * np + p] /= r;
    }
}

SphereMap hopf_map(GridPtr gp) {
    if (gp->kind != GridKind::S3Berger)
        throw domain_error("the fibration map lives on the sphere grid");
    SphereMap m;
    m.grid = gp;
    const Grid& g = *gp;
    m.n.resize(3 * g.npts);
    for (int i = 0; i < g.n[0]; ++i) {
        const double s2 = std::sin(2.0 * g.eta[i]), c2 = std::cos(2.0 * g.eta[i]);
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const double dxi = (j + 0.5) * g.h[1] - (k + 0.5) * g.h[2];
                const std::size_t p = g.index(i, j, k);
                m.n[p] = s2 * std::cos(dxi);
                m.n[g.npts + p] = s2 * std::sin(dxi);
                m.n[2 * g.npts + p] = c2;
            }
    }
    return m;
}

SphereMap perturbed_map(const SphereMap& base, double amplitude, std::uint64_t seed) {
    const std::size_t np = base.grid->npts;
    for (int attempt = 0; attempt < 8; ++attempt) {
        SphereMap m = base;
        for (int c = 0; c < 3; ++c) {
            Form f = random_form(base.grid, 0, seed + 1000003 * attempt + 97 * c);
            double* dst = m.comp(c);
            for (std::size_t p = 0; p < np; ++p) dst[p] += amplitude * f.data[p];
        }
        // reject draws that pass too close to the origin
        double rmin = 1e30;
        for (std::size_t p = 0; p < np; ++p) {
            const double r2 = m.n[p] * m.n[p] + m.n[np + p] * m.n[np + p] +
                              m.n[2 * np + p] * m.n[2 * np + p];
            rmin = std::min(rmin, r2);
        }
        if (rmin > 0.04) {
            normalize_map(m);
            return m;
        }
    }
    throw numerical_error("could not draw a non-degenerate perturbed map");
}

std::vector<double> random_tangent_field(const SphereMap& m, std::uint64_t seed) {
    const std::size_t np = m.grid->npts;
    std::vector<double> v(3 * np);
    for (int c = 0; c < 3; ++c) {
        Form f = random_form(m.grid, 0, seed + 31 * c);
        std::copy(f.data.begin(), f.data.end(), v.begin() + c * np);
    }
    for (std::size_t p = 0; p < np; ++p) {
        const double dot = v[p] * m.n[p] + v[np + p] * m.n[np + p] + v[2 * np + p] * m.n[2 * np + p];
        v[p] -= dot * m.n[p];
        v[np + p] -= dot * m.n[np + p];
        v[2 * np + p] -= dot * m.n[2 * np + p];
    }
    return v;
}

SphereMap torus_degree_map(GridPtr gp, int degree) {
    if (gp->kind != GridKind::FlatTorus)
        throw domain_error("degree maps are built on the torus grid");
    const Grid& g = *gp;
    SphereMap m;
    m.grid = gp;
    m.n.resize(3 * g.npts);
    constexpr double twopi = 2.0 * std::numbers::pi;
    for (int i = 0; i < g.n[0]; ++i) {
        // smooth profile with all derivatives matching at the poles
        const double u = (i + 0.5) * g.h[0] / g.L[0];
        const double theta = std::numbers::pi * (u - std::sin(twopi * u) / twopi);
        const double st = std::sin(theta), ct = std::cos(theta);
        for (int j = 0; j < g.n[1]; ++j) {
            const double phi = twopi * degree * (j + 0.5) * g.h[1] / g.L[1];
            const std::size_t p = g.index2(i, j);
            m.n[p] = st * std::cos(phi);
            m.n[g.npts + p] = st * std::sin(phi);
            m.n[2 * g.npts + p] = ct;
        }
    }
    return m;
}

std::vector<double> map_frame_derivatives(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const int dim = g.dim;
    std::vector<double> coord(static_cast<std::size_t>(dim) * 3 * np);
    for (int ax = 0; ax < dim; ++ax)
        for (int c = 0; c < 3; ++c)
            deriv_axis(g, m.comp(c), coord.data() + (static_cast<std::size_t>(ax) * 3 + c) * np, ax, +1);
    if (g.kind == GridKind::FlatTorus) return coord;  // identity frame

    // D_a = sum_mu B1(a, mu) d_mu
    std::vector<double> out(coord.size());
    const std::size_t slice = static_cast<std::size_t>(g.n[1]) * g.n[2];
#pragma omp parallel for
    for (int i = 0; i < g.n[0]; ++i) {
        const Eigen::Matrix3d& B = g.B1[i];
        for (std::size_t p = i * slice; p < (i + 1) * slice; ++p)
            for (int c = 0; c < 3; ++c) {
                for (int a = 0; a < 3; ++a) {
                    double v = 0.0;
                    for (int mu = 0; mu < 3; ++mu)
                        v += B(a, mu) * coord[(static_cast<std::size_t>(mu) * 3 + c) * np + p];
                    out[(static_cast<std::size_t>(a) * 3 + c) * np + p] = v;
                }
            }
    }
    return out;
}

namespace {

inline Eigen::Vector3d dval(const std::vector<double>& D, std::size_t np, int a, std::size_t p) {
    return {D[(a * 3 + 0) * np + p], D[(a * 3 + 1) * np + p], D[(a * 3 + 2) * np + p]};
}

} // namespace

Form pullback_omega(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const auto D = map_frame_derivatives(m);
    Form r = make_form(m.grid, 2);
    if (g.dim == 2) {
#pragma omp parallel for
        for (long long p = 0; p < static_cast<long long>(np); ++p) {
            Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
            r.data[p] = 0.25 * n.dot(dval(D, np, 0, p).cross(dval(D, np, 1, p)));
        }
        return r;
    }
    const int pairA[3] = {1, 2, 0}, pairB[3] = {2, 0, 1};
#pragma omp parallel for
    for (long long p = 0; p < static_cast<long long>(np); ++p) {
        Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
        for (int c = 0; c < 3; ++c)
            r.data[c * np + p] =
                0.25 * n.dot(dval(D, np, pairA[c], p).cross(dval(D, np, pairB[c], p)));
    }
    return r;
}

double dirichlet_energy(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const auto D = map_frame_derivatives(m);
    const std::size_t slice = (g.dim == 3) ? static_cast<std::size_t>(g.n[1]) * g.n[2]
                                           : static_cast<std::size_t>(g.n[1]);
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        double s = 0.0;
        for (int a = 0; a < g.dim; ++a)
            for (int c = 0; c < 3; ++c) {
                const double* col = D.data() + (static_cast<std::size_t>(a) * 3 + c) * np + i * slice;
                for (std::size_t p = 0; p < slice; ++p) s += col[p] * col[p];
            }
        total += s * g.weight(i);
    }
    return 0.125 * total;
}

double symplectic_energy(const SphereMap& m) {
    Form rho = pullback_omega(m);
    return 0.5 * inner(rho, rho);
}

namespace {

// Exact gradient of the discrete functional sum_p w s_p rho_p on the torus
// (s = rho gives F, s = 1 gives the degree integral).  The stencil transpose
// on a uniform periodic grid is exactly the negated stencil, so
//   g = 1/4 P_n [ s (D1 n x D2 n) - D1(s (D2 n x n)) - D2(s (n x D1 n)) ].
std::vector<double> torus_density_gradient(const SphereMap& m, const double* s) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const auto D = map_frame_derivatives(m);
    std::vector<double> V(3 * np), W(3 * np), out(3 * np);
    for (std::size_t p = 0; p < np; ++p) {
        Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
        Eigen::Vector3d d1 = dval(D, np, 0, p), d2 = dval(D, np, 1, p);
        const double r = s ? s[p] : 1.0;
        Eigen::Vector3d v = r * d2.cross(n), w = r * n.cross(d1);
        Eigen::Vector3d t1 = r * d1.cross(d2);
        for (int c = 0; c < 3; ++c) {
            V[c * np + p] = v(c);
            W[c * np + p] = w(c);
            out[c * np + p] = t1(c);
        }
    }
    std::vector<double> tmp(np);
    for (int c = 0; c < 3; ++c) {
        deriv_axis(g, V.data() + c * np, tmp.data(), 0, +1);
        for (std::size_t p = 0; p < np; ++p) out[c * np + p] -= tmp[p];
        deriv_axis(g, W.data() + c * np, tmp.data(), 1, +1);
        for (std::size_t p = 0; p < np; ++p) out[c * np + p] -= tmp[p];
    }
    for (std::size_t p = 0; p < np; ++p) {
        Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
        Eigen::Vector3d v(out[p], out[np + p], out[2 * np + p]);
        v = 0.25 * (v - v.dot(n) * n);
        out[p] = v(0);
        out[np + p] = v(1);
        out[2 * np + p] = v(2);
    }
    return out;
}

} // namespace

std::vector<double> grad_degree_integral(const SphereMap& m) {
    if (m.grid->kind != GridKind::FlatTorus)
        throw domain_error("degree-integral gradient is a torus operation");
    return torus_density_gradient(m, nullptr);
}

std::vector<double> grad_symplectic(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;

    if (g.kind == GridKind::FlatTorus) {
        Form rho = pullback_omega(m);
        return torus_density_gradient(m, rho.comp(0));
    }

    Form Z = codifferential(pullback_omega(m));
    const auto D = map_frame_derivatives(m);
    std::vector<double> out(3 * np);
#pragma omp parallel for
    for (long long p = 0; p < static_cast<long long>(np); ++p) {
        Eigen::Vector3d u = Eigen::Vector3d::Zero();
        for (int a = 0; a < g.dim; ++a) u += Z.at(a, p) * dval(D, np, a, p);
        Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
        Eigen::Vector3d gr = -0.25 * n.cross(u);
        out[p] = gr(0);
        out[np + p] = gr(1);
        out[2 * np + p] = gr(2);
    }
    return out;
}

std::vector<double> grad_dirichlet(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    std::vector<double> out(3 * np);
    Form f = make_form(m.grid, 0);
    for (int c = 0; c < 3; ++c) {
        std::copy(m.comp(c), m.comp(c) + np, f.data.begin());
        Form lap = codifferential(d(f));
        std::copy(lap.data.begin(), lap.data.end(), out.begin() + c * np);
    }
#pragma omp parallel for
    for (long long p = 0; p < static_cast<long long>(np); ++p) {
        Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
        Eigen::Vector3d v(out[p], out[np + p], out[2 * np + p]);
        v = 0.25 * (v - v.dot(n) * n);
        out[p] = v(0);
        out[np + p] = v(1);
        out[2 * np + p] = v(2);
    }
    return out;
}

double criticality_residual(const SphereMap& m) {
    return field_norm(*m.grid, grad_symplectic(m));
}

double field_inner(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t np = g.npts;
    if (a.size() != 3 * np || b.size() != 3 * np)
        throw usage_error("field size does not match the grid");
    const std::size_t slice = (g.dim == 3) ? static_cast<std::size_t>(g.n[1]) * g.n[2]
                                           : static_cast<std::size_t>(g.n[1]);
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double* pa = a.data() + c * np + i * slice;
            const double* pb = b.data() + c * np + i * slice;
            for (std::size_t p = 0; p < slice; ++p) s += pa[p] * pb[p];
        }
        total += s * g.weight(i);
    }
    return total;
}

double field_norm(const Grid& g, const std::vector<double>& v) {
    return std::sqrt(field_inner(g, v, v));
}

} // namespace sdl
