#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace sdl {

using Vec = std::vector<double>;
using ApplyFn = std::function<void(const Vec&, Vec&)>;
using DotFn = std::function<double(const Vec&, const Vec&)>;
using ProjectFn = std::function<void(Vec&)>;

struct IterStats {
    int iterations = 0;
    double residual = 0.0;  // relative to |b|
    bool converged = false;
    bool breakdown = false;  // hit a non-positive curvature direction
};

/// Plain conjugate gradients for a self-adjoint positive (semi-)definite
/// operator in the given inner product.  x holds the initial guess on entry.
IterStats conjugate_gradient(const ApplyFn& A, const Vec& b, Vec& x, const DotFn& dot,
                             double reltol, int maxiter);

struct EigResult {
    std::vector<double> values;
    std::vector<Vec> vectors;
    IterStats stats;
};

/// k smallest eigenpairs of a self-adjoint positive definite operator by
/// block inverse iteration (CG inner solves) with Rayleigh-Ritz extraction.
/// `project` (optional) is applied to every block vector to keep the
/// iteration inside an invariant subspace.  `start` (optional) supplies
/// initial block vectors; missing ones are drawn at random.
EigResult smallest_eigs_inverse_iteration(const ApplyFn& A, std::size_t n, int k, int block,
                                          const DotFn& dot, const ProjectFn& project,
                                          double cg_tol, int cg_maxiter, int outer_iters,
                                          double tol, std::uint64_t seed,
                                          const std::vector<Vec>* start = nullptr);

/// Smallest eigenvalue (possibly negative) of a self-adjoint operator via
/// Lanczos with full reorthogonalization.
double smallest_eig_lanczos(const ApplyFn& A, std::size_t n, const DotFn& dot,
                            const ProjectFn& project, int iters, std::uint64_t seed);

} // namespace sdl
