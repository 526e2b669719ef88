#pragma once

#include "sdl/maps.hpp"
#include "sdl/solvers.hpp"

namespace sdl {

struct PotentialSolve {
    Form A;           // coexact 1-form with dA ~ rho
    double residual;  // |dA - rho| / |rho|
    IterStats cg;
};

/// Coexact potential of a (numerically) closed 2-form on the 3-sphere grid:
/// solves the 1-form Hodge Laplacian (delta d + d delta) A = delta rho by CG
/// from zero, which keeps every iterate in the coexact subspace.
PotentialSolve solve_coexact_potential(const Form& rho, double reltol = 1e-8,
                                       int maxiter = 4000);

struct HopfInvariant {
    double value = 0.0;      // integral of dA ^ A
    long rounded = 0;        // nearest multiple of pi^2
    double rounding_gap = 0.0;  // |value/pi^2 - rounded|
    double potential_residual = 0.0;
    IterStats cg;
};

/// Hopf invariant of a map S^3 -> S^2(1/2), computed as int dA ^ A with
/// dA = phi^* omega; equals pi^2 times the integer homotopy invariant.
HopfInvariant hopf_invariant(const SphereMap& m, double reltol = 1e-8, int maxiter = 4000);

} // namespace sdl
