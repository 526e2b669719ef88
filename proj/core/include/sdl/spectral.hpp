#pragma once

#include <cstdint>
#include <vector>

#include "sdl/forms.hpp"
#include "sdl/maps.hpp"
#include "sdl/solvers.hpp"

namespace sdl {

/// Hodge projection of a 1-form onto its coexact part: a - d u, where u
/// solves the 0-form Poisson problem (delta d) u = delta a by CG on
/// mean-free functions.
/// strict = false returns the best-effort projection instead of throwing
/// when the Poisson solve stalls on a noise-dominated defect.
Form project_coexact_one_form(const Form& a, double reltol = 1e-8, int maxiter = 2000,
                              bool strict = true);

struct SpectrumResult {
    std::vector<double> values;
    std::vector<double> residuals;  // per pair, |A v - lambda v| / |v|
    IterStats stats;
};

/// k smallest eigenvalues of the 1-form Hodge Laplacian restricted to the
/// coexact subspace, by block inverse iteration with re-projection.
SpectrumResult coexact_one_form_spectrum(GridPtr g, int k, double tol = 1e-4,
                                         std::uint64_t seed = 7);

/// Second-variation (Jacobi) operators of the energies at a fixed map.
/// For a tangent field Y, <Y, op(Y)> equals half the second derivative of
/// the energy along the normalized path (n + eps Y)/|n + eps Y|.
struct SecondVariation {
    SphereMap map;
    std::vector<double> dn;      // frame derivatives of the map components
    std::vector<double> dn2sum;  // sum_a |D_a n|^2 per node
    Form z;                      // codifferential of the pulled-back area form

    explicit SecondVariation(const SphereMap& m);

    std::vector<double> dirichlet_apply(const std::vector<double>& Y) const;
    std::vector<double> symplectic_apply(const std::vector<double>& Y) const;
    /// dirichlet_apply + alpha * symplectic_apply
    std::vector<double> apply(const std::vector<double>& Y, double alpha) const;
};

/// Jacobi operator of the symplectic energy at a critical map; throws
/// precondition_error if the map is not critical to the given tolerance.
std::vector<double> jacobi_apply(const SphereMap& m, const std::vector<double>& Y,
                                 double criticality_tol = 1e-3);

/// Quadratic form of the symplectic-energy Hessian at a map with coclosed
/// pullback, where it reduces to a manifest square in d of the contracted
/// pullback.  Throws precondition_error when the pullback is not coclosed.
double hessian_coclosed_form(const SphereMap& m, const std::vector<double>& X,
                             double coclosed_tol = 1e-6);

/// Rayleigh-Ritz restriction of the two second-variation forms to the span
/// of tangent-projected ambient polynomial fields of total degree at most
/// trial_degree.  The matrices are reduced to a mass-orthonormal basis, so
/// eigenvalues of be + alpha * bf approximate the smallest Hessian
/// eigenvalues of E + alpha F over smooth fields.  Assembled directly from
/// the bilinear forms (no integration by parts), hence exactly symmetric.
struct HessianPencil {
    Eigen::MatrixXd be, bf;
};

HessianPencil hessian_pencil(const SphereMap& m, int trial_degree = 2);

double smallest_hessian_eig(const HessianPencil& pencil, double alpha);

struct ThresholdScan {
    double alpha_star = 0.0;
    double eig_low = 0.0;   // smallest eigenvalue at the bracket ends
    double eig_high = 0.0;
    double zero_band = 0.0;  // |eigenvalue| below this counts as zero
    int bisections = 0;
};

/// Bisect [alpha_lo, alpha_hi] for the coupling where the smallest Hessian
/// eigenvalue of E + alpha F stops being negative.  Eigenvalues within
/// band_frac of the bracket-end magnitude are treated as zero modes.
/// Throws numerical_error when the bracket does not straddle the change.
ThresholdScan stability_threshold_scan(const SphereMap& m, double alpha_lo, double alpha_hi,
                                       double tol = 0.02, double band_frac = 0.01,
                                       int trial_degree = 2);

} // namespace sdl
