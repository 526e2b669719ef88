#include "sdl/phwc.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

// Fold parities of frame 1-form components on the sphere grid: the frame
// covectors e1 = d eta and e3 = cos sin (dxi1 - dxi2) are odd across the
// eta = 0 and eta = pi/2 identifications, e2 is even.
const int frame_parity[3] = {-1, +1, -1};

// Connection coefficients <nabla_{e_a} e_b, e_c> of the Berger metric in the
// grid frame.  Constant part from the fibre bracket (scale t), eta part
// mu = 2 cot(2 eta) from the rotation of e3 along eta.
struct FrameConnection {
    double t = 0.0;
    bool flat = false;
    double mu = 0.0;  // per slice

    double gamma(int a, int b, int c) const {
        if (flat) return 0.0;
        if (a == 0 && b == 1 && c == 2) return -t;
        if (a == 0 && b == 2 && c == 1) return t;
        if (a == 1 && b == 0 && c == 2) return -t;
        if (a == 1 && b == 2 && c == 0) return t;
        if (a == 2 && b == 0 && c == 1) return -t;
        if (a == 2 && b == 1 && c == 0) return t;
        if (a == 2 && b == 0 && c == 2) return mu;
        if (a == 2 && b == 2 && c == 0) return -mu;
        return 0.0;
    }
};

FrameConnection slice_connection(const Grid& g, int i) {
    FrameConnection fc;
    if (g.kind == GridKind::FlatTorus) {
        fc.flat = true;
        return fc;
    }
    fc.t = g.t;
    fc.mu = 2.0 / std::tan(2.0 * g.eta[i]);
    return fc;
}

inline Eigen::Vector3d vec3(const std::vector<double>& v, std::size_t np, int a, std::size_t p) {
    return {v[(a * 3 + 0) * np + p], v[(a * 3 + 1) * np + p], v[(a * 3 + 2) * np + p]};
}

} // namespace

std::vector<double> frame_scalar_derivatives(const Grid& g, const double* s, int parity) {
    const std::size_t np = g.npts;
    const int dim = g.dim;
    std::vector<double> coord(static_cast<std::size_t>(dim) * np);
    for (int ax = 0; ax < dim; ++ax) deriv_axis(g, s, coord.data() + ax * np, ax, parity);
    if (g.kind == GridKind::FlatTorus) return coord;

    std::vector<double> out(coord.size());
    const std::size_t slice = static_cast<std::size_t>(g.n[1]) * g.n[2];
#pragma omp parallel for
    for (int i = 0; i < g.n[0]; ++i) {
        const Eigen::Matrix3d& B = g.B1[i];
        for (std::size_t p = i * slice; p < (i + 1) * slice; ++p)
            for (int a = 0; a < 3; ++a) {
                double v = 0.0;
                for (int mu = 0; mu < 3; ++mu) v += B(a, mu) * coord[mu * np + p];
                out[a * np + p] = v;
            }
    }
    return out;
}

std::vector<double> map_f_structure(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const int dim = g.dim;
    const auto D = map_frame_derivatives(m);
    std::vector<double> F(static_cast<std::size_t>(dim) * dim * np);
#pragma omp parallel for
    for (long long pp = 0; pp < static_cast<long long>(np); ++pp) {
        const std::size_t p = static_cast<std::size_t>(pp);
        const Eigen::Vector3d n{m.at(0, p), m.at(1, p), m.at(2, p)};
        Eigen::MatrixXd M(3, dim), JM(3, dim);
        for (int a = 0; a < dim; ++a) {
            const Eigen::Vector3d da = vec3(D, np, a, p);
            M.col(a) = da;
            JM.col(a) = n.cross(da);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-6);
        const Eigen::MatrixXd Fp = svd.solve(JM);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) F[(static_cast<std::size_t>(a) * dim + b) * np + p] = Fp(b, a);
    }
    return F;
}

std::vector<double> map_divergence_f(const SphereMap& m, const std::vector<double>& F) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const int dim = g.dim;
    if (F.size() != static_cast<std::size_t>(dim) * dim * np)
        throw usage_error("map_divergence_f: f-structure size mismatch");

    // D_a F_{ba}; the frame scalar F_{ba} inherits the product parity.
    std::vector<std::vector<double>> dF(static_cast<std::size_t>(dim) * dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            const int par = g.kind == GridKind::FlatTorus ? 1 : frame_parity[a] * frame_parity[b];
            dF[a * dim + b] = frame_scalar_derivatives(g, F.data() + (static_cast<std::size_t>(a) * dim + b) * np, par);
        }

    std::vector<double> div(static_cast<std::size_t>(dim) * np, 0.0);
    const std::size_t slice = g.dim == 3 ? static_cast<std::size_t>(g.n[1]) * g.n[2] : np;
#pragma omp parallel for
    for (int i = 0; i < g.n[0]; ++i) {
        const FrameConnection fc = slice_connection(g, i);
        const std::size_t lo = g.dim == 3 ? i * slice : static_cast<std::size_t>(i) * g.n[1];
        const std::size_t hi = g.dim == 3 ? (i + 1) * slice : lo + g.n[1];
        for (std::size_t p = lo; p < hi; ++p)
            for (int k = 0; k < dim; ++k) {
                double v = 0.0;
                for (int a = 0; a < dim; ++a) {
                    v += dF[a * dim + k][a * np + p];
                    for (int b = 0; b < dim; ++b) {
                        v += fc.gamma(a, b, k) * F[(static_cast<std::size_t>(a) * dim + b) * np + p];
                        v -= fc.gamma(a, a, b) * F[(static_cast<std::size_t>(b) * dim + k) * np + p];
                    }
                }
                div[k * np + p] = v;
            }
    }
    return div;
}

std::vector<double> second_fundamental_form(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const int dim = g.dim;
    const auto D = map_frame_derivatives(m);

    // H[(a*dim + b)*3 + c] = D_a (D_b n)_c
    std::vector<std::vector<double>> H(static_cast<std::size_t>(dim) * dim * 3);
    for (int b = 0; b < dim; ++b) {
        const int par = g.kind == GridKind::FlatTorus ? 1 : frame_parity[b];
        for (int c = 0; c < 3; ++c) {
            auto dd = frame_scalar_derivatives(g, D.data() + (static_cast<std::size_t>(b) * 3 + c) * np, par);
            for (int a = 0; a < dim; ++a) {
                auto& slot = H[(static_cast<std::size_t>(a) * dim + b) * 3 + c];
                slot.assign(dd.begin() + a * np, dd.begin() + (a + 1) * np);
            }
        }
    }

    std::vector<double> out(static_cast<std::size_t>(dim) * dim * 3 * np);
    const std::size_t slice = g.dim == 3 ? static_cast<std::size_t>(g.n[1]) * g.n[2] : np;
#pragma omp parallel for
    for (int i = 0; i < g.n[0]; ++i) {
        const FrameConnection fc = slice_connection(g, i);
        const std::size_t lo = g.dim == 3 ? i * slice : static_cast<std::size_t>(i) * g.n[1];
        const std::size_t hi = g.dim == 3 ? (i + 1) * slice : lo + g.n[1];
        for (std::size_t p = lo; p < hi; ++p) {
            const Eigen::Vector3d n{m.at(0, p), m.at(1, p), m.at(2, p)};
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) {
                    Eigen::Vector3d h{H[(a * dim + b) * 3 + 0][p], H[(a * dim + b) * 3 + 1][p],
                                      H[(a * dim + b) * 3 + 2][p]};
                    for (int e = 0; e < dim; ++e) h -= fc.gamma(a, b, e) * vec3(D, np, e, p);
                    const Eigen::Vector3d nd = 0.5 * (h - n.dot(h) * n);
                    for (int c = 0; c < 3; ++c)
                        out[((static_cast<std::size_t>(a) * dim + b) * 3 + c) * np + p] = nd(c);
                }
        }
    }
    return out;
}

std::vector<double> tension_field(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const int dim = g.dim;
    const auto nd = second_fundamental_form(m);
    std::vector<double> tau(3 * np, 0.0);
#pragma omp parallel for
    for (long long pp = 0; pp < static_cast<long long>(np); ++pp) {
        const std::size_t p = static_cast<std::size_t>(pp);
        for (int a = 0; a < dim; ++a)
            for (int c = 0; c < 3; ++c)
                tau[c * np + p] += nd[((static_cast<std::size_t>(a) * dim + a) * 3 + c) * np + p];
    }
    return tau;
}

PhwcResidual phwc_coderivative_residual(const SphereMap& m) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    const int dim = g.dim;

    const auto D = map_frame_derivatives(m);
    const auto F = map_f_structure(m);
    const auto div = map_divergence_f(m, F);
    const auto nd = second_fundamental_form(m);
    const Form rho = pullback_omega(m);
    const Form lhs = codifferential(rho);

    // rho(e_a, e_b) from the stored components (cyclic basis in 3d).
    auto rho_ab = [&](int a, int b, std::size_t p) -> double {
        if (dim == 2) return a == b ? 0.0 : (a == 0 ? rho.at(0, p) : -rho.at(0, p));
        if (a == b) return 0.0;
        // eps_{abc} rho_c
        const int c = 3 - a - b;
        const double sign = ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
        return sign * rho.at(c, p);
    };

    Form rhs = make_form(m.grid, 1);
#pragma omp parallel for
    for (long long pp = 0; pp < static_cast<long long>(np); ++pp) {
        const std::size_t p = static_cast<std::size_t>(pp);
        // f div f
        double fv[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                fv[a] += F[(static_cast<std::size_t>(b) * dim + a) * np + p] * div[b * np + p];
        // phi_* f e_a = 1/2 sum_c F_{ca} D_c n
        Eigen::Vector3d push[3];
        for (int a = 0; a < dim; ++a) {
            push[a].setZero();
            for (int c = 0; c < dim; ++c)
                push[a] += 0.5 * F[(static_cast<std::size_t>(a) * dim + c) * np + p] * vec3(D, np, c, p);
        }
        for (int b = 0; b < dim; ++b) {
            double v = 0.0;
            for (int a = 0; a < dim; ++a) {
                v += fv[a] * rho_ab(a, b, p);
                const Eigen::Vector3d ndab{nd[((static_cast<std::size_t>(a) * dim + b) * 3 + 0) * np + p],
                                           nd[((static_cast<std::size_t>(a) * dim + b) * 3 + 1) * np + p],
                                           nd[((static_cast<std::size_t>(a) * dim + b) * 3 + 2) * np + p]};
                v -= push[a].dot(ndab);
            }
            rhs.at(b, p) = v;
        }
    }

    PhwcResidual r;
    r.lhs_norm = norm(lhs);
    r.rhs_norm = norm(rhs);
    r.abs_residual = norm(lhs - rhs);
    r.rel_residual = r.abs_residual / std::max(r.lhs_norm, 1e-300);
    return r;
}

SphereMap mobius_rescaled_map(const SphereMap& m, double a) {
    SphereMap out;
    out.grid = m.grid;
    const std::size_t np = m.grid->npts;
    out.n.resize(3 * np);
    const double a2 = a * a;
    for (std::size_t p = 0; p < np; ++p) {
        const double n1 = m.at(0, p), n2 = m.at(1, p), n3 = m.at(2, p);
        const double den = a2 * (1.0 + n3) + (1.0 - n3);
        out.n[p] = 2.0 * a * n1 / den;
        out.n[np + p] = 2.0 * a * n2 / den;
        out.n[2 * np + p] = (a2 * (1.0 + n3) - (1.0 - n3)) / den;
    }
    normalize_map(out);
    return out;
}

} // namespace sdl
