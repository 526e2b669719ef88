#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sdl {

/// A_{n-1} root system realized by elementary matrices inside sl(n,C),
/// compact real form su(n).  Roots are stored as integer vectors e_i - e_j
/// in the standard coordinates; root k is the ordered pair ij[k] = (i, j).
struct RootSystem {
    int n = 0;
    std::vector<Eigen::VectorXi> roots;        // n(n-1) vectors of length n
    std::vector<std::pair<int, int>> ij;       // root k <-> e_i - e_j
    std::vector<int> positive;                 // indices with i < j
    std::vector<int> simple;                   // alpha_k = e_k - e_{k+1}
    std::vector<Eigen::MatrixXcd> root_space;  // E_alpha (elementary matrix)

    /// alpha(h) for diagonal anti-Hermitian h (entries of h on the diagonal).
    std::complex<double> eval(int root, const Eigen::VectorXcd& hdiag) const;
};

/// 2 <= n <= 8; throws config_error otherwise.
RootSystem build_root_system(int n);

/// Minus the Killing form of su(n): <X,Y> = -2n Re tr(XY).
double minus_killing(int n, const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y);

/// Homogeneous fibration G/K0 -> G/K0' for nested simple-root subsets
/// Pi0 inside Pi0'.  m0 carries an orthonormal basis {X_a, Y_a} per positive
/// root outside [Pi0]; the f-structure vanishes on the fibre directions
/// (roots inside [Pi0']) and rotates X_a -> Y_a -> -X_a on the rest.
struct FlagFibration {
    int n = 0;
    std::vector<int> pi0, pi0p;                // simple-root index subsets
    std::vector<Eigen::MatrixXcd> m0_basis;    // orthonormal wrt minus-Killing
    std::vector<int> basis_root;               // positive-root index per element
    std::vector<int> vertical_idx, horizontal_idx;
    Eigen::MatrixXd f;                         // f-structure in that basis
    double lambda = 1.0;                       // dilation (Riemannian submersion)
    int dim_m0 = 0;
};

/// usage_error on non-nested or out-of-range subsets; unsupported_target_error
/// if G/K0' is not Hermitian symmetric (for A_{n-1}: the complement of Pi0'
/// must be a single simple root, or empty for the degenerate point target).
FlagFibration build_fibration(const RootSystem& R, const std::vector<int>& pi0,
                              const std::vector<int>& pi0p);

/// Nomizu operators of G/K0 in the m0 basis: L[i] maps coefficient vectors,
/// L[i] * y = coefficients of nabla_{e_i} Y at the identity coset for the
/// invariant extension of Y = sum y_j e_j.
std::vector<Eigen::MatrixXd> nomizu_operators(const FlagFibration& Phi);

/// div f = sum_a (nabla_{e_a} f)(e_a) at the identity coset, for the
/// fibration's own f or for an arbitrary invariant tensor given in the basis.
Eigen::VectorXd divergence_f(const FlagFibration& Phi);
Eigen::VectorXd divergence_f(const FlagFibration& Phi, const Eigen::MatrixXd& f);

/// delta phi^* omega at the identity coset, computed directly as the
/// codifferential of the invariant 2-form omega_f(X,Y) = <fX,Y>; components
/// in the m0 basis.  Equals -lambda^2 flat(div f) for skew f.
Eigen::VectorXd coderivative_pullback(const FlagFibration& Phi);
Eigen::VectorXd coderivative_pullback(const FlagFibration& Phi, const Eigen::MatrixXd& f);

/// max |<nabla_X Y, Z>| over X, Y in (g_alpha + g_{-alpha}) cap g and
/// Z in (g_beta + g_{-beta}) cap g, on the full flag G/T.  alpha, beta are
/// positive-root indices into R.positive.
double orthogonality_check(const RootSystem& R, int alpha, int beta);

} // namespace sdl
