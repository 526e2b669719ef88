#pragma once

#include <vector>

#include "sdl/maps.hpp"

namespace sdl {

/// Pointwise f-structure of a (near-)submersion m, in frame components:
/// f e_a = sum_b F_ba e_b with F_ba stored at (a*dim + b)*npts + p.
/// Computed as the pseudoinverse solve f = (Dn)^+ (n x Dn), so ker f is the
/// kernel of the differential and f matches the target complex structure on
/// its orthogonal complement.
std::vector<double> map_f_structure(const SphereMap& m);

/// Frame derivatives D_a s of a scalar field; on the sphere grid `parity`
/// is the sign the scalar picks up under the eta-fold continuation
/// (frame 1-form components have parities -1, +1, -1).  Layout a*npts + p.
std::vector<double> frame_scalar_derivatives(const Grid& g, const double* s, int parity);

/// div f = sum_a (nabla_{e_a} f)(e_a) in frame components, layout b*npts + p.
std::vector<double> map_divergence_f(const SphereMap& m, const std::vector<double>& F);

/// Second fundamental form nabla d phi(e_a, e_b) of phi = n/2, an R^3-valued
/// symmetric 2-tensor, layout ((a*dim + b)*3 + c)*npts + p.
std::vector<double> second_fundamental_form(const SphereMap& m);

/// Tension field sum_a nabla d phi(e_a, e_a), layout c*npts + p; vanishes for
/// harmonic maps.
std::vector<double> tension_field(const SphereMap& m);

/// Residual of the PHWC coderivative identity
///   delta phi^* omega = f div f  interior  phi^* omega
///                       - sum_a h(phi_* f e_a, nabla d phi(e_a, .)),
/// with the left side evaluated by the discrete codifferential and the right
/// side assembled pointwise from the f-structure.
struct PhwcResidual {
    double lhs_norm = 0.0;       // L2 norm of delta phi^* omega
    double rhs_norm = 0.0;
    double abs_residual = 0.0;   // L2 norm of the difference
    double rel_residual = 0.0;   // abs / max(lhs_norm, tiny)
};
PhwcResidual phwc_coderivative_residual(const SphereMap& m);

/// Post-composition with the Mobius dilation w -> a*w of the target sphere
/// (stereographic coordinate from the north pole).  Holomorphic, so the
/// composed map is PHWC with the same f-structure but non-constant dilation.
SphereMap mobius_rescaled_map(const SphereMap& m, double a);

} // namespace sdl
