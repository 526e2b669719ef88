#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sdl {

enum class GridKind { S3Berger, FlatTorus };

/// Collocation grid.  Fields are stored as orthonormal-frame components at
/// the nodes; the per-slice matrices below convert between frame components
/// and coordinate components so that exterior derivatives can be evaluated
/// with one-dimensional finite-difference stencils.
///
/// S3 (Berger sphere, parameter t): coordinates (eta, xi1, xi2) with
///   x = (cos(eta) e^{i xi1}, sin(eta) e^{i xi2}),
/// frame e1 = d eta, e2 = t*(cos^2 dxi1 + sin^2 dxi2),
/// e3 = cos*sin*(dxi1 - dxi2).  eta nodes are staggered, eta_i = (i+1/2)*h0,
/// so no node sits on the coordinate-degenerate circles eta = 0, pi/2.
///
/// Flat torus: coordinates (x, y) on [0,L1) x [0,L2), identity frame,
/// staggered periodic nodes.
struct Grid {
    GridKind kind;
    int dim;                  // 3 (S3) or 2 (torus)
    std::array<int, 3> n;     // nodes per axis (n[2]=1 in 2d)
    std::array<double, 3> h;  // grid spacings
    double t = 1.0;           // Berger squash parameter (S3 only)
    std::array<double, 2> L{0.0, 0.0};  // torus periods
    std::string id;

    std::vector<double> eta;  // eta node values (S3)

    // Per-eta-slice conversion matrices (S3).
    // 1-forms: coord = A1 * frame, frame = B1 * coord.
    // 2-forms in cyclic bases (dxi1^dxi2, dxi2^deta, deta^dxi1) and
    // (e2^e3, e3^e1, e1^e2): coord = A2 * frame, frame = B2 * coord.
    std::vector<Eigen::Matrix3d> A1, B1, A2, B2;
    std::vector<double> detC;  // 3-forms: coord = detC * frame

    // Quadrature: per-slice weight for L2 inner products and integrals of
    // top forms (frame component).  Includes the boundary-corrected eta
    // weights; exact for the sin(2k eta) integrand class.
    std::vector<double> sliceWeight;  // S3: indexed by eta slice
    double cellWeight = 0.0;          // torus: uniform

    double volume = 0.0;
    std::size_t npts = 0;

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
    }
    std::size_t index2(int i, int j) const {
        return static_cast<std::size_t>(i) * n[1] + j;
    }
    // Quadrature weight of the node with first-axis index i.
    double weight(int i) const {
        return kind == GridKind::S3Berger ? sliceWeight[i] : cellWeight;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Berger sphere grid.  Requires n_eta >= 8 and even n_xi1, n_xi2 >= 8
/// (the eta ghost continuation shifts the angular indices by half a period),
/// t > 0.  Runs a differential/codifferential adjointness self-check and
/// throws numerical_error if the sign conventions are inconsistent.
GridPtr build_s3_grid(int n_eta, int n_xi1, int n_xi2, double t);

/// Flat torus grid, periods L1, L2 > 0, resolutions >= 8.
GridPtr build_t2_grid(int n1, int n2, double L1, double L2);

} // namespace sdl
