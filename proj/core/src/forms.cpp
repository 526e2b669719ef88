#include "sdl/forms.hpp"

#include <algorithm>
#include <cmath>

#include "sdl/errors.hpp"

namespace sdl {

int form_components(const Grid& g, int degree) {
    if (degree < 0 || degree > g.dim)
        throw degree_error("form degree out of range for manifold dimension");
    if (g.dim == 3) {
        static const int c[4] = {1, 3, 3, 1};
        return c[degree];
    }
    static const int c[3] = {1, 2, 1};
    return c[degree];
}

Form make_form(GridPtr grid, int degree) {
    Form a;
    a.grid = std::move(grid);
    a.degree = degree;
    a.ncomp = form_components(*a.grid, degree);
    a.data.assign(static_cast<std::size_t>(a.ncomp) * a.grid->npts, 0.0);
    return a;
}

static void require_same(const Form& a, const Form& b) {
    if (a.grid.get() != b.grid.get())
        throw usage_error("forms live on different grids");
    if (a.degree != b.degree)
        throw degree_error("form degrees differ");
}

Form operator+(const Form& a, const Form& b) {
    require_same(a, b);
    Form r = a;
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
    return r;
}

Form operator-(const Form& a, const Form& b) {
    require_same(a, b);
    Form r = a;
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] -= b.data[i];
    return r;
}

Form operator*(double s, const Form& a) {
    Form r = a;
    for (double& v : r.data) v *= s;
    return r;
}

void axpy(double s, const Form& x, Form& y) {
    require_same(x, y);
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += s * x.data[i];
}

void scale(Form& a, double s) {
    for (double& v : a.data) v *= s;
}

// ---------------------------------------------------------------------------
// Finite differences.  Sixth-order centered stencil; the eta axis of the
// sphere grid is continued through eta = 0 and eta = pi/2 with the pullback
// identities f(-eta,xi1,xi2) = p f(eta,xi1,xi2+pi) and
// f(pi/2+s,xi1,xi2) = p f(pi/2-s,xi1+pi,xi2), p the component parity.

void deriv_axis(const Grid& g, const double* f, double* out, int axis, int parity) {
    const double inv = 1.0 / (60.0 * g.h[axis]);
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];

    if (g.dim == 2) {
        // both axes periodic
#pragma omp parallel for
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) {
                auto val = [&](int o) {
                    int ii = i, jj = j;
                    if (axis == 0) ii = (i + o + n0) % n0; else jj = (j + o + n1) % n1;
                    return f[g.index2(ii, jj)];
                };
                out[g.index2(i, j)] =
                    (45.0 * (val(1) - val(-1)) - 9.0 * (val(2) - val(-2)) + (val(3) - val(-3))) * inv;
            }
        }
        return;
    }

    if (axis == 0) {
        const std::size_t stride = static_cast<std::size_t>(n1) * n2;
#pragma omp parallel for
        for (int i = 0; i < n0; ++i) {
            const bool interior = (i >= 3 && i <= n0 - 4);
            for (int j = 0; j < n1; ++j) {
                for (int k = 0; k < n2; ++k) {
                    const std::size_t idx = g.index(i, j, k);
                    double v[7];
                    if (interior) {
                        for (int o = -3; o <= 3; ++o) v[o + 3] = f[idx + o * static_cast<long>(stride)];
                    } else {
                        for (int o = -3; o <= 3; ++o) {
                            const int ii = i + o;
                            if (ii >= 0 && ii < n0) {
                                v[o + 3] = f[g.index(ii, j, k)];
                            } else if (ii < 0) {
                                v[o + 3] = parity * f[g.index(-1 - ii, j, (k + n2 / 2) % n2)];
                            } else {
                                v[o + 3] = parity * f[g.index(2 * n0 - 1 - ii, (j + n1 / 2) % n1, k)];
                            }
                        }
                    }
                    out[idx] = (45.0 * (v[4] - v[2]) - 9.0 * (v[5] - v[1]) + (v[6] - v[0])) * inv;
                }
            }
        }
        return;
    }

#pragma omp parallel for
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            for (int k = 0; k < n2; ++k) {
                auto val = [&](int o) {
                    int jj = j, kk = k;
                    if (axis == 1) jj = (j + o + n1) % n1; else kk = (k + o + n2) % n2;
                    return f[g.index(i, jj, kk)];
                };
                out[g.index(i, j, k)] =
                    (45.0 * (val(1) - val(-1)) - 9.0 * (val(2) - val(-2)) + (val(3) - val(-3))) * inv;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Frame <-> coordinate component conversion (sphere grid only; the torus
// frame is the coordinate frame).

namespace {

// Coordinate-component parities under the eta continuation, by degree.
// 1-forms in (deta, dxi1, dxi2), 2-forms in the cyclic basis
// (dxi1^dxi2, dxi2^deta, deta^dxi1).
const int parity0[1] = {+1};
const int parity1[3] = {-1, +1, +1};
const int parity2[3] = {+1, -1, -1};
const int parity3[1] = {-1};

std::vector<double> to_coord(const Form& a) {
    const Grid& g = *a.grid;
    std::vector<double> w(a.data.size());
    const std::size_t slice = static_cast<std::size_t>(g.n[1]) * g.n[2];
    if (a.ncomp == 1) {
        if (a.degree == 3) {
#pragma omp parallel for
            for (int i = 0; i < g.n[0]; ++i)
                for (std::size_t p = i * slice; p < (i + 1) * slice; ++p)
                    w[p] = g.detC[i] * a.data[p];
        } else {
            std::copy(a.data.begin(), a.data.end(), w.begin());
        }
        return w;
    }
    const auto& M = (a.degree == 1) ? g.A1 : g.A2;
    const std::size_t np = g.npts;
#pragma omp parallel for
    for (int i = 0; i < g.n[0]; ++i) {
        const Eigen::Matrix3d& A = M[i];
        for (std::size_t p = i * slice; p < (i + 1) * slice; ++p) {
            Eigen::Vector3d fr(a.data[p], a.data[np + p], a.data[2 * np + p]);
            Eigen::Vector3d co = A * fr;
            w[p] = co(0);
            w[np + p] = co(1);
            w[2 * np + p] = co(2);
        }
    }
    return w;
}

void from_coord(const std::vector<double>& w, Form& a) {
    const Grid& g = *a.grid;
    const std::size_t slice = static_cast<std::size_t>(g.n[1]) * g.n[2];
    if (a.ncomp == 1) {
        if (a.degree == 3) {
#pragma omp parallel for
            for (int i = 0; i < g.n[0]; ++i)
                for (std::size_t p = i * slice; p < (i + 1) * slice; ++p)
                    a.data[p] = w[p] / g.detC[i];
        } else {
            std::copy(w.begin(), w.end(), a.data.begin());
        }
        return;
    }
    const auto& M = (a.degree == 1) ? g.B1 : g.B2;
    const std::size_t np = g.npts;
#pragma omp parallel for
    for (int i = 0; i < g.n[0]; ++i) {
        const Eigen::Matrix3d& B = M[i];
        for (std::size_t p = i * slice; p < (i + 1) * slice; ++p) {
            Eigen::Vector3d co(w[p], w[np + p], w[2 * np + p]);
            Eigen::Vector3d fr = B * co;
            a.data[p] = fr(0);
            a.data[np + p] = fr(1);
            a.data[2 * np + p] = fr(2);
        }
    }
}

} // namespace

Form d(const Form& a) {
    const Grid& g = *a.grid;
    if (a.degree >= g.dim)
        throw degree_error("exterior derivative of a top-degree form");
    const std::size_t np = g.npts;
    Form r = make_form(a.grid, a.degree + 1);

    if (g.dim == 2) {
        if (a.degree == 0) {
            deriv_axis(g, a.comp(0), r.comp(0), 0, +1);
            deriv_axis(g, a.comp(0), r.comp(1), 1, +1);
        } else {
            std::vector<double> dxay(np), dyax(np);
            deriv_axis(g, a.comp(1), dxay.data(), 0, +1);
            deriv_axis(g, a.comp(0), dyax.data(), 1, +1);
            for (std::size_t p = 0; p < np; ++p) r.data[p] = dxay[p] - dyax[p];
        }
        return r;
    }

    std::vector<double> w = to_coord(a);
    std::vector<double> out(r.data.size());
    if (a.degree == 0) {
        for (int ax = 0; ax < 3; ++ax)
            deriv_axis(g, w.data(), out.data() + ax * np, ax, parity0[0]);
    } else if (a.degree == 1) {
        // curl in the cyclic bases
        std::vector<double> tmp(np), tmp2(np);
        auto curl = [&](int c, int axA, int compA, int axB, int compB) {
            deriv_axis(g, w.data() + compA * np, tmp.data(), axA, parity1[compA]);
            deriv_axis(g, w.data() + compB * np, tmp2.data(), axB, parity1[compB]);
            double* dst = out.data() + c * np;
            for (std::size_t p = 0; p < np; ++p) dst[p] = tmp[p] - tmp2[p];
        };
        curl(0, 1, 2, 2, 1);  // d(xi1 xi2) = dxi1 a_xi2 - dxi2 a_xi1
        curl(1, 2, 0, 0, 2);  // d(xi2 eta) = dxi2 a_eta - deta a_xi2
        curl(2, 0, 1, 1, 0);  // d(eta xi1) = deta a_xi1 - dxi1 a_eta
    } else {
        // divergence of the cyclic components
        std::vector<double> tmp(np);
        std::fill(out.begin(), out.end(), 0.0);
        for (int ax = 0; ax < 3; ++ax) {
            deriv_axis(g, w.data() + ax * np, tmp.data(), ax, parity2[ax]);
            for (std::size_t p = 0; p < np; ++p) out[p] += tmp[p];
        }
    }
    from_coord(out, r);
    return r;
}

Form hodge(const Form& a) {
    const Grid& g = *a.grid;
    Form r = make_form(a.grid, g.dim - a.degree);
    if (g.dim == 3 || a.ncomp == r.ncomp) {
        // orthonormal frame with matching orientations: a pure relabelling,
        // except the 2d middle degree
        if (g.dim == 2 && a.degree == 1) {
            const std::size_t np = g.npts;
            for (std::size_t p = 0; p < np; ++p) {
                r.data[p] = -a.data[np + p];
                r.data[np + p] = a.data[p];
            }
        } else {
            r.data = a.data;
        }
        return r;
    }
    r.data = a.data;
    return r;
}

Form codifferential(const Form& a) {
    if (a.degree == 0)
        throw degree_error("codifferential of a 0-form");
    const int n = a.grid->dim, k = a.degree;
    const double sign = ((n * (k + 1) + 1) % 2 == 0) ? 1.0 : -1.0;
    Form r = hodge(d(hodge(a)));
    scale(r, sign);
    return r;
}

Form wedge(const Form& a, const Form& b) {
    if (a.grid.get() != b.grid.get())
        throw usage_error("forms live on different grids");
    const Grid& g = *a.grid;
    if (a.degree + b.degree > g.dim)
        throw degree_error("wedge degree exceeds manifold dimension");
    const std::size_t np = g.npts;
    Form r = make_form(a.grid, a.degree + b.degree);

    if (a.degree == 0 || b.degree == 0) {
        const Form& s = (a.degree == 0) ? a : b;
        const Form& f = (a.degree == 0) ? b : a;
        for (int c = 0; c < f.ncomp; ++c)
            for (std::size_t p = 0; p < np; ++p)
                r.at(c, p) = s.data[p] * f.at(c, p);
        return r;
    }
    if (g.dim == 2) {
        for (std::size_t p = 0; p < np; ++p)
            r.data[p] = a.data[p] * b.at(1, p) - a.at(1, p) * b.data[p];
        return r;
    }
    if (a.degree == 1 && b.degree == 1) {
        for (std::size_t p = 0; p < np; ++p) {
            Eigen::Vector3d u(a.at(0, p), a.at(1, p), a.at(2, p));
            Eigen::Vector3d v(b.at(0, p), b.at(1, p), b.at(2, p));
            Eigen::Vector3d w = u.cross(v);
            r.at(0, p) = w(0);
            r.at(1, p) = w(1);
            r.at(2, p) = w(2);
        }
        return r;
    }
    // (1,2) or (2,1): pointwise dot product
    for (std::size_t p = 0; p < np; ++p)
        r.data[p] = a.at(0, p) * b.at(0, p) + a.at(1, p) * b.at(1, p) + a.at(2, p) * b.at(2, p);
    return r;
}

double inner(const Form& a, const Form& b) {
    require_same(a, b);
    const Grid& g = *a.grid;
    const std::size_t slice = (g.dim == 3) ? static_cast<std::size_t>(g.n[1]) * g.n[2]
                                           : static_cast<std::size_t>(g.n[1]);
    // serial reduction: bit-identical across thread counts
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        double s = 0.0;
        for (int c = 0; c < a.ncomp; ++c) {
            const double* pa = a.comp(c) + i * slice;
            const double* pb = b.comp(c) + i * slice;
            for (std::size_t p = 0; p < slice; ++p) s += pa[p] * pb[p];
        }
        total += s * g.weight(i);
    }
    return total;
}

double integrate(const Form& a) {
    const Grid& g = *a.grid;
    if (a.degree != g.dim)
        throw degree_error("only top-degree forms can be integrated");
    const std::size_t slice = (g.dim == 3) ? static_cast<std::size_t>(g.n[1]) * g.n[2]
                                           : static_cast<std::size_t>(g.n[1]);
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        double s = 0.0;
        const double* pa = a.comp(0) + i * slice;
        for (std::size_t p = 0; p < slice; ++p) s += pa[p];
        total += s * g.weight(i);
    }
    return total;
}

double norm(const Form& a) { return std::sqrt(inner(a, a)); }

double max_pointwise_norm(const Form& a) {
    const std::size_t np = a.grid->npts;
    double m = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        double s = 0.0;
        for (int c = 0; c < a.ncomp; ++c) s += a.at(c, p) * a.at(c, p);
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

Form pointwise_norm_squared(const Form& a) {
    Form r = make_form(a.grid, 0);
    const std::size_t np = a.grid->npts;
    for (std::size_t p = 0; p < np; ++p) {
        double s = 0.0;
        for (int c = 0; c < a.ncomp; ++c) s += a.at(c, p) * a.at(c, p);
        r.data[p] = s;
    }
    return r;
}

} // namespace sdl
