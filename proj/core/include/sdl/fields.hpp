#pragma once

#include <cstdint>
#include <functional>

#include "sdl/forms.hpp"

namespace sdl {

/// Ambient embedding of the S3 node (i,j,k):
///   x = (cos(eta) cos(xi1), cos(eta) sin(xi1), sin(eta) cos(xi2), sin(eta) sin(xi2)).
Eigen::Vector4d s3_ambient(const Grid& g, int i, int j, int k);

/// Jacobian dx/d(eta, xi1, xi2) at the node.
Eigen::Matrix<double, 4, 3> s3_jacobian(const Grid& g, int i, int j, int k);

/// Restrictions of ambient forms on R^4 to the sphere grid, returned in
/// frame components.  The 2-form coefficient matrix is read as
/// sum_{mu<nu} c(mu,nu) dx_mu ^ dx_nu (lower triangle ignored).
using AmbientScalar = std::function<double(const Eigen::Vector4d&)>;
using AmbientOneForm = std::function<Eigen::Vector4d(const Eigen::Vector4d&)>;
using AmbientTwoForm = std::function<Eigen::Matrix4d(const Eigen::Vector4d&)>;

Form restrict_scalar(GridPtr g, const AmbientScalar& f);
Form restrict_one_form(GridPtr g, const AmbientOneForm& p);
Form restrict_two_form(GridPtr g, const AmbientTwoForm& p);

/// Smooth pseudo-random test fields.  On S3 these are restrictions of
/// ambient polynomial forms, so they satisfy the parity identities the eta
/// continuation relies on; on the torus they are low-order trig polynomials.
Form random_form(GridPtr g, int degree, std::uint64_t seed);

/// Verifies <d a, b> = <a, delta b> on smooth test fields; throws
/// numerical_error on failure.  Run once at grid construction to catch
/// sign/orientation mistakes early.
void adjointness_self_check(const GridPtr& g);

} // namespace sdl
