#include "sdl/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sdl/errors.hpp"
#include "sdl/fields.hpp"

namespace sdl {

namespace {

constexpr double pi = std::numbers::pi;

// Boundary corrections for the midpoint rule on eta in [0, pi/2].
// All quadrature integrands here are pi-periodic and odd about both
// endpoints, i.e. spanned by sin(2k eta).  The plain midpoint sum is already
// exact for even k; the corrections (1+delta_i) on the four nodes nearest
// each endpoint, mirrored symmetrically, enforce exactness for k = 1,3,5,7.
std::vector<double> corrected_eta_deltas(int n, double h) {
    Eigen::Matrix4d M;
    Eigen::Vector4d r;
    for (int row = 0; row < 4; ++row) {
        const int k = 2 * row + 1;
        for (int i = 0; i < 4; ++i)
            M(row, i) = 2.0 * h * std::sin(2.0 * k * (i + 0.5) * h);
        // exact integral 1/k minus the midpoint sum h/sin(k h)
        r(row) = 1.0 / k - h / std::sin(k * h);
    }
    Eigen::Vector4d delta = M.fullPivLu().solve(r);
    if ((M * delta - r).norm() > 1e-12 * (r.norm() + h))
        throw numerical_error("eta quadrature correction solve failed");
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < 4; ++i) {
        out[i] = delta(i);
        out[n - 1 - i] = delta(i);
    }
    return out;
}

} // namespace

GridPtr build_s3_grid(int n_eta, int n_xi1, int n_xi2, double t) {
    if (n_eta < 8 || n_xi1 < 8 || n_xi2 < 8)
        throw config_error("sphere grid needs at least 8 nodes per axis");
    if (n_xi1 % 2 || n_xi2 % 2)
        throw config_error("angular resolutions must be even");
    if (!(t > 0.0) || !std::isfinite(t))
        throw config_error("squash parameter t must be positive");

    auto g = std::make_shared<Grid>();
    g->kind = GridKind::S3Berger;
    g->dim = 3;
    g->n = {n_eta, n_xi1, n_xi2};
    g->h = {(pi / 2.0) / n_eta, 2.0 * pi / n_xi1, 2.0 * pi / n_xi2};
    g->t = t;
    g->npts = static_cast<std::size_t>(n_eta) * n_xi1 * n_xi2;
    {
        std::ostringstream os;
        os << "s3_berger_" << n_eta << "x" << n_xi1 << "x" << n_xi2 << "_t" << t;
        g->id = os.str();
    }

    g->eta.resize(n_eta);
    g->A1.resize(n_eta);
    g->B1.resize(n_eta);
    g->A2.resize(n_eta);
    g->B2.resize(n_eta);
    g->detC.resize(n_eta);
    g->sliceWeight.resize(n_eta);

    const auto delta = corrected_eta_deltas(n_eta, g->h[0]);

    double vol = 0.0;
    for (int i = 0; i < n_eta; ++i) {
        const double eta = (i + 0.5) * g->h[0];
        g->eta[i] = eta;
        const double c = std::cos(eta), s = std::sin(eta);

        // Rows of C: frame covectors in coordinates (eta, xi1, xi2).
        Eigen::Matrix3d C;
        C << 1.0, 0.0, 0.0,
             0.0, t * c * c, t * s * s,
             0.0, c * s, -c * s;
        g->A1[i] = C.transpose();
        g->B1[i] = g->A1[i].inverse();
        g->detC[i] = -t * c * s;

        // Columns: frame 2-form basis elements in the cyclic coordinate
        // basis; e_a ^ e_b has components row_a x row_b.
        Eigen::Matrix3d A2;
        A2.col(0) = C.row(1).cross(C.row(2));
        A2.col(1) = C.row(2).cross(C.row(0));
        A2.col(2) = C.row(0).cross(C.row(1));
        g->A2[i] = A2;
        g->B2[i] = A2.inverse();

        // |detC| * corrected eta weight * angular cell area
        g->sliceWeight[i] = t * c * s * g->h[0] * (1.0 + delta[i]) * g->h[1] * g->h[2];
        vol += g->sliceWeight[i] * n_xi1 * n_xi2;
    }
    g->volume = vol;

    GridPtr gp = g;
    adjointness_self_check(gp);
    return gp;
}

GridPtr build_t2_grid(int n1, int n2, double L1, double L2) {
    if (n1 < 8 || n2 < 8)
        throw config_error("torus grid needs at least 8 nodes per axis");
    if (!(L1 > 0.0) || !(L2 > 0.0))
        throw config_error("torus periods must be positive");

    auto g = std::make_shared<Grid>();
    g->kind = GridKind::FlatTorus;
    g->dim = 2;
    g->n = {n1, n2, 1};
    g->h = {L1 / n1, L2 / n2, 0.0};
    g->L = {L1, L2};
    g->npts = static_cast<std::size_t>(n1) * n2;
    g->cellWeight = g->h[0] * g->h[1];
    g->volume = L1 * L2;
    {
        std::ostringstream os;
        os << "t2_" << n1 << "x" << n2 << "_L" << L1 << "x" << L2;
        g->id = os.str();
    }
    return g;
}

} // namespace sdl
