#pragma once

#include <vector>

#include "sdl/grid.hpp"

namespace sdl {

/// Differential form sampled at the grid nodes, stored as orthonormal-frame
/// components (component-major).  Component counts: 3d forms have 1/3/3/1
/// components for degrees 0..3 (2-forms in the cyclic basis e2^e3, e3^e1,
/// e1^e2); 2d forms have 1/2/1 components.
struct Form {
    GridPtr grid;
    int degree = 0;
    int ncomp = 0;
    std::vector<double> data;

    double& at(int c, std::size_t idx) { return data[c * grid->npts + idx]; }
    double at(int c, std::size_t idx) const { return data[c * grid->npts + idx]; }
    double* comp(int c) { return data.data() + static_cast<std::size_t>(c) * grid->npts; }
    const double* comp(int c) const { return data.data() + static_cast<std::size_t>(c) * grid->npts; }
};

int form_components(const Grid& g, int degree);
Form make_form(GridPtr grid, int degree);

// Linear algebra on the component arrays.
Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator*(double s, const Form& a);
void axpy(double s, const Form& x, Form& y);  // y += s*x
void scale(Form& a, double s);

/// Exterior derivative.  Sixth-order centered stencils on each axis; the
/// eta axis is continued through the coordinate-degenerate circles by the
/// parity/half-period-shift identities of fields pulled back from S3.
Form d(const Form& a);

/// Hodge star (frame components, so a pointwise relabelling).
Form hodge(const Form& a);

/// Codifferential, delta = +/- star d star with the standard sign
/// (-1)^{dim(k+1)+1} on k-forms.
Form codifferential(const Form& a);

Form wedge(const Form& a, const Form& b);

/// L2 inner product, integral of a top-degree form, L2 norm, sup of the
/// pointwise norm.  Inner products and integrals use the corrected eta
/// quadrature and are reduced serially for run-to-run determinism.
double inner(const Form& a, const Form& b);
double integrate(const Form& a);
double norm(const Form& a);
double max_pointwise_norm(const Form& a);

/// Pointwise squared norm as a 0-form.
Form pointwise_norm_squared(const Form& a);

/// d/dx_axis of a single scalar array in coordinate components.
/// `parity` is the sign the values pick up under the eta-fold identities
/// (+1 or -1); ignored on periodic axes.  Used directly by code that
/// differentiates frame-component or map-component fields.
void deriv_axis(const Grid& g, const double* f, double* out, int axis, int parity);

} // namespace sdl
