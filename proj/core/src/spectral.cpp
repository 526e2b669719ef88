#include "sdl/spectral.hpp"

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "sdl/errors.hpp"
#include "sdl/fields.hpp"

namespace sdl {

namespace {

// weighted L2 inner product for raw component-major form/field data
double weighted_dot(const Grid& g, int ncomp, const Vec& a, const Vec& b) {
    const std::size_t np = g.npts;
    const std::size_t slice = (g.dim == 3) ? static_cast<std::size_t>(g.n[1]) * g.n[2]
                                           : static_cast<std::size_t>(g.n[1]);
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        double s = 0.0;
        for (int c = 0; c < ncomp; ++c) {
            const double* pa = a.data() + c * np + i * slice;
            const double* pb = b.data() + c * np + i * slice;
            for (std::size_t p = 0; p < slice; ++p) s += pa[p] * pb[p];
        }
        total += s * g.weight(i);
    }
    return total;
}

void remove_weighted_mean(const Grid& g, Vec& v) {
    const std::size_t slice = (g.dim == 3) ? static_cast<std::size_t>(g.n[1]) * g.n[2]
                                           : static_cast<std::size_t>(g.n[1]);
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        double s = 0.0;
        const double* p = v.data() + i * slice;
        for (std::size_t q = 0; q < slice; ++q) s += p[q];
        total += s * g.weight(i);
    }
    const double mean = total / g.volume;
    for (double& x : v) x -= mean;
}

void tangent_project(const SphereMap& m, Vec& v) {
    const std::size_t np = m.grid->npts;
    for (std::size_t p = 0; p < np; ++p) {
        const double dot =
            v[p] * m.n[p] + v[np + p] * m.n[np + p] + v[2 * np + p] * m.n[2 * np + p];
        v[p] -= dot * m.n[p];
        v[np + p] -= dot * m.n[np + p];
        v[2 * np + p] -= dot * m.n[2 * np + p];
    }
}

} // namespace

Form project_coexact_one_form(const Form& a, double reltol, int maxiter, bool strict) {
    if (a.degree != 1) throw usage_error("coexact projection acts on 1-forms");
    GridPtr gp = a.grid;
    const Grid& g = *gp;

    Form rhs = codifferential(a);
    remove_weighted_mean(g, rhs.data);

    ApplyFn A = [gp, &g](const Vec& in, Vec& out) {
        Form f = make_form(gp, 0);
        f.data = in;
        Form r = codifferential(d(f));
        out = std::move(r.data);
        remove_weighted_mean(g, out);
    };
    DotFn dot = [&g](const Vec& x, const Vec& y) { return weighted_dot(g, 1, x, y); };

    // a defect at or below the quadrature noise floor cannot be solved for,
    // and does not need to be: the input is coexact to working accuracy
    const double anorm = norm(a);
    const double rnorm = std::sqrt(dot(rhs.data, rhs.data));
    if (rnorm <= 1e-6 * std::max(anorm, 1e-30)) return a;
    const bool noise_rhs = rnorm <= 1e-4 * std::max(anorm, 1e-30);

    // restarted CG, keeping the best iterate: restarts shed the conjugacy
    // loss the inexact adjointness of the difference calculus induces on
    // rough residuals, and noise-dominated right-hand sides may diverge
    Vec u(g.npts, 0.0), best = u;
    double best_resid = 1.0;
    IterStats st;
    const int chunk = 150;
    for (int done = 0; done < maxiter; done += chunk) {
        st = conjugate_gradient(A, rhs.data, u, dot, reltol, std::min(chunk, maxiter - done));
        if (st.residual < best_resid) {
            best_resid = st.residual;
            best = u;
        }
        if (st.converged || st.breakdown || st.residual > 10.0 * best_resid) break;
    }
    if (strict && !noise_rhs && best_resid * rnorm > 1e-5 * std::max(anorm, 1e-30))
        throw numerical_error("coexact projection Poisson solve did not converge");
    u = std::move(best);

    Form uf = make_form(gp, 0);
    uf.data = std::move(u);
    Form du = d(uf);
    Form out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= du.data[i];
    return out;
}

SpectrumResult coexact_one_form_spectrum(GridPtr gp, int k, double tol, std::uint64_t seed) {
    (void)tol;
    (void)seed;
    if (gp->kind != GridKind::S3Berger)
        throw usage_error("the coexact spectrum is computed on the sphere grid");
    const Grid& g = *gp;
    const int ncomp = form_components(g, 1);

    // Rayleigh-Ritz over coexact projections of restricted ambient
    // polynomial 1-forms (degree <= 2 coefficients).  The bottom clusters of
    // the coexact Laplacian are restrictions of such forms, and smooth trial
    // fields keep the finite-difference calculus inside its accuracy range.
    std::vector<Form> basis;
    auto add = [&](const AmbientOneForm& w) {
        Form b = project_coexact_one_form(restrict_one_form(gp, w), 1e-8, 3000);
        basis.push_back(std::move(b));
    };
    for (int mu = 0; mu < 4; ++mu)
        add([mu](const Eigen::Vector4d&) { return Eigen::Vector4d::Unit(mu).eval(); });
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            add([mu, nu](const Eigen::Vector4d& x) {
                return (x(mu) * Eigen::Vector4d::Unit(nu)).eval();
            });
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu; nu < 4; ++nu)
            for (int rho = 0; rho < 4; ++rho)
                add([mu, nu, rho](const Eigen::Vector4d& x) {
                    return (x(mu) * x(nu) * Eigen::Vector4d::Unit(rho)).eval();
                });

    const int nb = static_cast<int>(basis.size());
    std::vector<Form> db, cb;
    db.reserve(nb);
    cb.reserve(nb);
    for (const Form& b : basis) {
        db.push_back(d(b));
        cb.push_back(codifferential(b));
    }
    Eigen::MatrixXd A(nb, nb), M(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = i; j < nb; ++j) {
            A(i, j) = A(j, i) = inner(db[i], db[j]) + inner(cb[i], cb[j]);
            M(i, j) = M(j, i) = inner(basis[i], basis[j]);
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mes(M);
    const double mmax = mes.eigenvalues().maxCoeff();
    int keep = 0;
    for (int i = 0; i < nb; ++i)
        if (mes.eigenvalues()(i) > 1e-8 * mmax) ++keep;
    if (keep < k) throw numerical_error("coexact trial space degenerated");
    Eigen::MatrixXd T(nb, keep);
    int kk = 0;
    for (int i = 0; i < nb; ++i)
        if (mes.eigenvalues()(i) > 1e-8 * mmax)
            T.col(kk++) = mes.eigenvectors().col(i) / std::sqrt(mes.eigenvalues()(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.transpose() * A * T);

    SpectrumResult res;
    const Eigen::MatrixXd modes = T * es.eigenvectors().leftCols(k);
    for (int i = 0; i < k; ++i) res.values.push_back(es.eigenvalues()(i));
    res.stats.converged = true;
    res.stats.iterations = 1;

    // residuals of the Ritz pairs under the actual Laplacian
    const std::size_t n = static_cast<std::size_t>(ncomp) * g.npts;
    for (int i = 0; i < k; ++i) {
        Form v = make_form(gp, 1);
        for (int j = 0; j < nb; ++j)
            for (std::size_t q = 0; q < n; ++q) v.data[q] += modes(j, i) * basis[j].data[q];
        Form dv = codifferential(d(v));
        Form ev = d(codifferential(v));
        for (std::size_t q = 0; q < n; ++q)
            dv.data[q] += ev.data[q] - res.values[i] * v.data[q];
        res.residuals.push_back(norm(dv) / norm(v));
    }
    return res;
}

SecondVariation::SecondVariation(const SphereMap& m)
    : map(m), dn(map_frame_derivatives(m)), z(codifferential(pullback_omega(m))) {
    const Grid& g = *m.grid;
    const std::size_t np = g.npts;
    dn2sum.assign(np, 0.0);
    for (int a = 0; a < g.dim; ++a)
        for (int c = 0; c < 3; ++c) {
            const double* col = dn.data() + (static_cast<std::size_t>(a) * 3 + c) * np;
            for (std::size_t p = 0; p < np; ++p) dn2sum[p] += col[p] * col[p];
        }
}

std::vector<double> SecondVariation::dirichlet_apply(const std::vector<double>& Y) const {
    GridPtr gp = map.grid;
    const std::size_t np = gp->npts;
    std::vector<double> out(3 * np);
    for (int c = 0; c < 3; ++c) {
        Form yc = make_form(gp, 0);
        std::copy(Y.begin() + c * np, Y.begin() + (c + 1) * np, yc.data.begin());
        Form l = codifferential(d(yc));
        double* dst = out.data() + c * np;
        const double* yp = Y.data() + c * np;
        for (std::size_t p = 0; p < np; ++p) dst[p] = 0.125 * (l.data[p] - dn2sum[p] * yp[p]);
    }
    tangent_project(map, out);
    return out;
}

std::vector<double> SecondVariation::symplectic_apply(const std::vector<double>& Y) const {
    GridPtr gp = map.grid;
    const Grid& g = *gp;
    const std::size_t np = g.npts;
    const int nd = g.dim;

    // v = n x Y pointwise
    std::vector<double> v(3 * np);
    for (std::size_t p = 0; p < np; ++p) {
        Eigen::Vector3d n(map.n[p], map.n[np + p], map.n[2 * np + p]);
        Eigen::Vector3d y(Y[p], Y[np + p], Y[2 * np + p]);
        Eigen::Vector3d w = n.cross(y);
        for (int c = 0; c < 3; ++c) v[c * np + p] = w(c);
    }

    // u_a = v . D_a n  (the pullback of the contracted area form)
    Form u = make_form(gp, 1);
    for (int a = 0; a < nd; ++a) {
        double* dst = u.comp(a);
        for (std::size_t p = 0; p < np; ++p) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c)
                s += v[c * np + p] * dn[(static_cast<std::size_t>(a) * 3 + c) * np + p];
            dst[p] = s;
        }
    }
    Form q = codifferential(d(u));

    // frame derivatives of Y
    SphereMap yfield;
    yfield.grid = gp;
    yfield.n = Y;
    const std::vector<double> dY = map_frame_derivatives(yfield);

    // s_c = delta(beta_c), with beta_c the 1-form z_a v_c
    std::vector<double> s(3 * np);
    for (int c = 0; c < 3; ++c) {
        Form beta = make_form(gp, 1);
        for (int a = 0; a < nd; ++a) {
            double* dst = beta.comp(a);
            const double* za = z.comp(a);
            for (std::size_t p = 0; p < np; ++p) dst[p] = za[p] * v[c * np + p];
        }
        Form sc = codifferential(beta);
        std::copy(sc.data.begin(), sc.data.end(), s.begin() + c * np);
    }

    std::vector<double> out(3 * np);
    for (std::size_t p = 0; p < np; ++p) {
        Eigen::Vector3d n(map.n[p], map.n[np + p], map.n[2 * np + p]);
        Eigen::Vector3d sum1 = Eigen::Vector3d::Zero(), sum2 = Eigen::Vector3d::Zero();
        for (int a = 0; a < nd; ++a) {
            Eigen::Vector3d da(dn[(a * 3 + 0) * np + p], dn[(a * 3 + 1) * np + p],
                               dn[(a * 3 + 2) * np + p]);
            Eigen::Vector3d dya(dY[(a * 3 + 0) * np + p], dY[(a * 3 + 1) * np + p],
                                dY[(a * 3 + 2) * np + p]);
            sum1 += q.comp(a)[p] * da;
            sum2 += z.comp(a)[p] * dya;
        }
        Eigen::Vector3d sv(s[p], s[np + p], s[2 * np + p]);
        Eigen::Vector3d w = -n.cross(sum1) / 32.0 - n.cross(sum2) / 16.0 + sv / 16.0;
        for (int c = 0; c < 3; ++c) out[c * np + p] = w(c);
    }
    tangent_project(map, out);
    return out;
}

std::vector<double> SecondVariation::apply(const std::vector<double>& Y, double alpha) const {
    std::vector<double> out = dirichlet_apply(Y);
    if (alpha != 0.0) {
        const std::vector<double> f = symplectic_apply(Y);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * f[i];
    }
    return out;
}

std::vector<double> jacobi_apply(const SphereMap& m, const std::vector<double>& Y,
                                 double criticality_tol) {
    const double F = symplectic_energy(m);
    if (criticality_residual(m) > criticality_tol * std::max(F, 1e-30))
        throw precondition_error("Jacobi operator needs a critical map");
    return SecondVariation(m).symplectic_apply(Y);
}

double hessian_coclosed_form(const SphereMap& m, const std::vector<double>& X,
                             double coclosed_tol) {
    GridPtr gp = m.grid;
    const Grid& g = *gp;
    const std::size_t np = g.npts;
    Form rho = pullback_omega(m);
    Form z = codifferential(rho);
    const double rn = norm(rho);
    if (norm(z) > coclosed_tol * std::max(rn, 1e-30))
        throw precondition_error("coclosed Hessian form needs a coclosed pullback");

    const auto dn = map_frame_derivatives(m);
    Form u = make_form(gp, 1);
    for (int a = 0; a < g.dim; ++a) {
        double* dst = u.comp(a);
        for (std::size_t p = 0; p < np; ++p) {
            Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
            Eigen::Vector3d x(X[p], X[np + p], X[2 * np + p]);
            Eigen::Vector3d da(dn[(a * 3 + 0) * np + p], dn[(a * 3 + 1) * np + p],
                               dn[(a * 3 + 2) * np + p]);
            dst[p] = n.cross(x).dot(da);
        }
    }
    const double dun = norm(d(u));
    return dun * dun / 32.0;
}

HessianPencil hessian_pencil(const SphereMap& m, int trial_degree) {
    if (m.grid->kind != GridKind::S3Berger)
        throw usage_error("the Hessian pencil trial space lives on the sphere grid");
    GridPtr gp = m.grid;
    const Grid& g = *gp;
    const std::size_t np = g.npts;
    SecondVariation sv(m);

    // monomials on the ambient space up to total degree trial_degree
    std::vector<std::array<int, 4>> mons;
    for (int a = 0; a <= trial_degree; ++a)
        for (int b = 0; a + b <= trial_degree; ++b)
            for (int c = 0; a + b + c <= trial_degree; ++c)
                for (int e = 0; a + b + c + e <= trial_degree; ++e)
                    mons.push_back({a, b, c, e});
    const int nb = 3 * static_cast<int>(mons.size());

    std::vector<std::vector<double>> Y(nb), V(nb), DY(nb);
    std::vector<Form> DU;
    DU.reserve(nb);
    for (int c = 0; c < 3; ++c)
        for (std::size_t mi = 0; mi < mons.size(); ++mi) {
            const int b = c * static_cast<int>(mons.size()) + static_cast<int>(mi);
            const auto& e = mons[mi];
            Form f = restrict_scalar(gp, [&e](const Eigen::Vector4d& x) {
                return std::pow(x(0), e[0]) * std::pow(x(1), e[1]) * std::pow(x(2), e[2]) *
                       std::pow(x(3), e[3]);
            });
            Y[b].assign(3 * np, 0.0);
            std::copy(f.data.begin(), f.data.end(), Y[b].begin() + c * np);
            tangent_project(m, Y[b]);

            SphereMap yf;
            yf.grid = gp;
            yf.n = Y[b];
            DY[b] = map_frame_derivatives(yf);

            V[b].assign(3 * np, 0.0);
            for (std::size_t p = 0; p < np; ++p) {
                Eigen::Vector3d n(m.n[p], m.n[np + p], m.n[2 * np + p]);
                Eigen::Vector3d y(Y[b][p], Y[b][np + p], Y[b][2 * np + p]);
                Eigen::Vector3d v = n.cross(y);
                for (int cc = 0; cc < 3; ++cc) V[b][cc * np + p] = v(cc);
            }
            Form u = make_form(gp, 1);
            for (int a = 0; a < 3; ++a) {
                double* dst = u.comp(a);
                for (std::size_t p = 0; p < np; ++p) {
                    double s = 0.0;
                    for (int cc = 0; cc < 3; ++cc)
                        s += V[b][cc * np + p] * sv.dn[(a * 3 + cc) * np + p];
                    dst[p] = s;
                }
            }
            DU.push_back(d(u));
        }

    const std::size_t slice = static_cast<std::size_t>(g.n[1]) * g.n[2];
    auto wsum = [&](auto&& per_node) -> double {
        double tot = 0.0;
        for (int i = 0; i < g.n[0]; ++i) {
            double s = 0.0;
            for (std::size_t p = i * slice; p < (i + 1) * slice; ++p) s += per_node(p);
            tot += s * g.weight(i);
        }
        return tot;
    };

    Eigen::MatrixXd BE(nb, nb), BF(nb, nb), M(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = i; j < nb; ++j) {
            const double mm = wsum([&](std::size_t p) {
                return Y[i][p] * Y[j][p] + Y[i][np + p] * Y[j][np + p] +
                       Y[i][2 * np + p] * Y[j][2 * np + p];
            });
            const double be = wsum([&](std::size_t p) {
                                  double s = 0.0;
                                  for (int a = 0; a < 3; ++a)
                                      for (int cc = 0; cc < 3; ++cc)
                                          s += DY[i][(a * 3 + cc) * np + p] *
                                               DY[j][(a * 3 + cc) * np + p];
                                  const double yy = Y[i][p] * Y[j][p] +
                                                    Y[i][np + p] * Y[j][np + p] +
                                                    Y[i][2 * np + p] * Y[j][2 * np + p];
                                  return s - sv.dn2sum[p] * yy;
                              }) /
                              8.0;
            const double bf = inner(DU[i], DU[j]) / 32.0 +
                              wsum([&](std::size_t p) {
                                  double s = 0.0;
                                  for (int a = 0; a < 3; ++a) {
                                      const double za = sv.z.comp(a)[p];
                                      for (int cc = 0; cc < 3; ++cc)
                                          s += za * (V[i][cc * np + p] * DY[j][(a * 3 + cc) * np + p] +
                                                     V[j][cc * np + p] * DY[i][(a * 3 + cc) * np + p]);
                                  }
                                  return s;
                              }) /
                                  16.0;
            M(i, j) = M(j, i) = mm;
            BE(i, j) = BE(j, i) = be;
            BF(i, j) = BF(j, i) = bf;
        }

    // drop near-null mass directions, transform to a mass-orthonormal basis
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mes(M);
    const double mmax = mes.eigenvalues().maxCoeff();
    int keep = 0;
    for (int i = 0; i < nb; ++i)
        if (mes.eigenvalues()(i) > 1e-10 * mmax) ++keep;
    Eigen::MatrixXd T(nb, keep);
    int k = 0;
    for (int i = 0; i < nb; ++i)
        if (mes.eigenvalues()(i) > 1e-10 * mmax)
            T.col(k++) = mes.eigenvectors().col(i) / std::sqrt(mes.eigenvalues()(i));

    HessianPencil out;
    out.be = T.transpose() * BE * T;
    out.bf = T.transpose() * BF * T;
    return out;
}

double smallest_hessian_eig(const HessianPencil& pencil, double alpha) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pencil.be + alpha * pencil.bf);
    return es.eigenvalues()(0);
}

ThresholdScan stability_threshold_scan(const SphereMap& m, double alpha_lo, double alpha_hi,
                                       double tol, double band_frac, int trial_degree) {
    if (!(alpha_hi > alpha_lo)) throw usage_error("threshold scan needs a proper bracket");
    HessianPencil pencil = hessian_pencil(m, trial_degree);
    ThresholdScan res;
    res.eig_low = smallest_hessian_eig(pencil, alpha_lo);
    res.eig_high = smallest_hessian_eig(pencil, alpha_hi);
    res.zero_band = band_frac * std::max(std::abs(res.eig_low), std::abs(res.eig_high));
    const auto negative = [&res](double e) { return e < -res.zero_band; };
    if (negative(res.eig_low) == negative(res.eig_high))
        throw numerical_error("no stability sign change inside the coupling bracket");

    double lo = alpha_lo, hi = alpha_hi;
    const bool neg_lo = negative(res.eig_low);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const bool neg_mid = negative(smallest_hessian_eig(pencil, mid));
        ++res.bisections;
        (neg_mid == neg_lo ? lo : hi) = mid;
    }
    res.alpha_star = 0.5 * (lo + hi);
    return res;
}

} // namespace sdl
