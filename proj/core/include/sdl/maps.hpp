#pragma once

#include <cstdint>
#include <vector>

#include "sdl/forms.hpp"

namespace sdl {

/// Map from the grid manifold into the 2-sphere of radius 1/2 (the target
/// that makes the fibration a Riemannian submersion).  Stored as the unit
/// direction vector n, component-major; the actual map is n/2.
struct SphereMap {
    GridPtr grid;
    std::vector<double> n;  // 3 * npts

    double& at(int c, std::size_t p) { return n[c * grid->npts + p]; }
    double at(int c, std::size_t p) const { return n[c * grid->npts + p]; }
    double* comp(int c) { return n.data() + static_cast<std::size_t>(c) * grid->npts; }
    const double* comp(int c) const { return n.data() + static_cast<std::size_t>(c) * grid->npts; }
};

SphereMap make_constant_map(GridPtr g, const Eigen::Vector3d& dir);
void normalize_map(SphereMap& m);  // throws numerical_error on a (near-)zero vector

/// The Hopf fibration, n = (sin 2eta cos(xi1-xi2), sin 2eta sin(xi1-xi2), cos 2eta).
SphereMap hopf_map(GridPtr g);

/// Smooth random map: normalize(base + amplitude * ambient quadratics).
/// Retries with reseeded perturbations if the sum passes too close to zero.
SphereMap perturbed_map(const SphereMap& base, double amplitude, std::uint64_t seed);

/// Random smooth tangent field along m (values orthogonal to n pointwise),
/// stored like the map components.
std::vector<double> random_tangent_field(const SphereMap& m, std::uint64_t seed);

/// Degree-d map T^2 -> S^2: Theta(x) profile sweeping pole to pole,
/// Phi = 2 pi d y / L2.
SphereMap torus_degree_map(GridPtr g, int degree);

/// Frame directional derivatives of the map components,
/// layout (a * 3 + c) * npts + p for frame direction a.
std::vector<double> map_frame_derivatives(const SphereMap& m);

/// phi^* omega as a 2-form in frame components; entries
/// n . (D_a n x D_b n) / 4.
Form pullback_omega(const SphereMap& m);

/// Dirichlet energy E = 1/2 int |dphi|^2 = 1/8 int sum_a |D_a n|^2.
double dirichlet_energy(const SphereMap& m);

/// Symplectic Dirichlet energy F = 1/2 int |phi^* omega|^2.
double symplectic_energy(const SphereMap& m);

/// L2 gradients with respect to variations n_dot = Y, Y tangent to the
/// sphere: grad F = -1/4 n x (sum_a (delta phi*omega)_a D_a n),
/// grad E = 1/4 P_n(Laplacian n).
std::vector<double> grad_symplectic(const SphereMap& m);
std::vector<double> grad_degree_integral(const SphereMap& m);
std::vector<double> grad_dirichlet(const SphereMap& m);

/// L2 norm of grad F; zero at critical points of F.
double criticality_residual(const SphereMap& m);

/// L2 norm of an R^3-valued node field in the grid measure.
double field_norm(const Grid& g, const std::vector<double>& v);
double field_inner(const Grid& g, const std::vector<double>& a, const std::vector<double>& b);

} // namespace sdl
