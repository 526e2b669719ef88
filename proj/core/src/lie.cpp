#include "sdl/lie.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

Mat elementary(int n, int i, int j) {
    Mat E = Mat::Zero(n, n);
    E(i, j) = 1.0;
    return E;
}

Mat bracket(const Mat& A, const Mat& B) { return A * B - B * A; }

/// Is the positive root e_i - e_j inside the span of the simple roots
/// indexed by `sub`?  For A_{n-1} the simple support of e_i - e_j (i < j)
/// is {i, ..., j-1}.
bool in_span(int i, int j, const std::vector<int>& sub) {
    for (int k = i; k < j; ++k)
        if (std::find(sub.begin(), sub.end(), k) == sub.end()) return false;
    return true;
}

void check_subset(const std::vector<int>& sub, int n, const char* name) {
    for (int k : sub)
        if (k < 0 || k >= n - 1) throw usage_error(std::string(name) + ": simple-root index out of range");
}

} // namespace

std::complex<double> RootSystem::eval(int root, const Eigen::VectorXcd& hdiag) const {
    const auto [i, j] = ij[root];
    return hdiag(i) - hdiag(j);
}

RootSystem build_root_system(int n) {
    if (n < 2 || n > 8) throw config_error("build_root_system: n must be in [2, 8]");
    RootSystem R;
    R.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Eigen::VectorXi r = Eigen::VectorXi::Zero(n);
            r(i) = 1;
            r(j) = -1;
            if (i < j) R.positive.push_back(static_cast<int>(R.roots.size()));
            R.roots.push_back(r);
            R.ij.emplace_back(i, j);
            R.root_space.push_back(elementary(n, i, j));
        }
    for (int k = 0; k + 1 < n; ++k) {
        for (std::size_t r = 0; r < R.ij.size(); ++r)
            if (R.ij[r] == std::make_pair(k, k + 1)) R.simple.push_back(static_cast<int>(r));
    }
    return R;
}

double minus_killing(int n, const Mat& X, const Mat& Y) {
    return -2.0 * n * (X * Y).trace().real();
}

FlagFibration build_fibration(const RootSystem& R, const std::vector<int>& pi0,
                              const std::vector<int>& pi0p) {
    const int n = R.n;
    check_subset(pi0, n, "Pi0");
    check_subset(pi0p, n, "Pi0'");
    for (int k : pi0)
        if (std::find(pi0p.begin(), pi0p.end(), k) == pi0p.end())
            throw usage_error("build_fibration: Pi0 must be contained in Pi0'");

    // Hermitian-symmetric target: the complement of Pi0' in the simple roots
    // must be a single root whose coefficient in the highest root is 1.  For
    // A_{n-1} the highest root is e_1 - e_n with all coefficients 1, so only
    // the cardinality matters; an empty complement is the point target.
    std::vector<int> complement;
    for (int k = 0; k + 1 < n; ++k)
        if (std::find(pi0p.begin(), pi0p.end(), k) == pi0p.end()) complement.push_back(k);
    if (complement.size() > 1)
        throw unsupported_target_error("build_fibration: G/K0' is not Hermitian symmetric");

    FlagFibration Phi;
    Phi.n = n;
    Phi.pi0 = pi0;
    Phi.pi0p = pi0p;

    const double nrm = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
    for (int pr : R.positive) {
        const auto [i, j] = R.ij[pr];
        if (in_span(i, j, pi0)) continue;  // k0 direction
        Mat Eij = R.root_space[pr];
        Mat Eji = Eij.adjoint();
        Mat X = nrm * (Eij - Eji);
        Mat Y = nrm * cd(0.0, 1.0) * (Eij + Eji);
        const int bx = static_cast<int>(Phi.m0_basis.size());
        Phi.m0_basis.push_back(X);
        Phi.m0_basis.push_back(Y);
        Phi.basis_root.push_back(pr);
        Phi.basis_root.push_back(pr);
        if (in_span(i, j, pi0p)) {
            Phi.vertical_idx.push_back(bx);
            Phi.vertical_idx.push_back(bx + 1);
        } else {
            Phi.horizontal_idx.push_back(bx);
            Phi.horizontal_idx.push_back(bx + 1);
        }
    }
    Phi.dim_m0 = static_cast<int>(Phi.m0_basis.size());

    // f = J on the horizontal roots (X -> Y -> -X per pair), 0 on the fibre.
    Phi.f = Eigen::MatrixXd::Zero(Phi.dim_m0, Phi.dim_m0);
    for (std::size_t k = 0; k + 1 < Phi.horizontal_idx.size(); k += 2) {
        const int x = Phi.horizontal_idx[k], y = Phi.horizontal_idx[k + 1];
        Phi.f(y, x) = 1.0;
        Phi.f(x, y) = -1.0;
    }
    return Phi;
}

std::vector<Eigen::MatrixXd> nomizu_operators(const FlagFibration& Phi) {
    const int d = Phi.dim_m0;
    // c[i](k, j) = <[e_i, e_j], e_k>; the m0 projection is implicit in the
    // expansion against the orthonormal basis.
    std::vector<Eigen::MatrixXd> c(d, Eigen::MatrixXd::Zero(d, d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat br = bracket(Phi.m0_basis[i], Phi.m0_basis[j]);
            for (int k = 0; k < d; ++k) c[i](k, j) = minus_killing(Phi.n, br, Phi.m0_basis[k]);
        }
    // Levi-Civita of a reductive homogeneous metric:
    // <nabla_{e_i} e_j, e_k> = 1/2 c_ijk + 1/2 (c_kij + c_kji); the U-term
    // vanishes for the bi-invariant metric but is kept for generality.
    std::vector<Eigen::MatrixXd> L(d, Eigen::MatrixXd::Zero(d, d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                L[i](k, j) = 0.5 * c[i](k, j) + 0.5 * (c[k](j, i) + c[k](i, j));
    return L;
}

Eigen::VectorXd divergence_f(const FlagFibration& Phi, const Eigen::MatrixXd& f) {
    const int d = Phi.dim_m0;
    if (f.rows() != d || f.cols() != d) throw usage_error("divergence_f: tensor dimension mismatch");
    const auto L = nomizu_operators(Phi);
    Eigen::VectorXd div = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) div += (L[i] * f - f * L[i]).col(i);
    return div;
}

Eigen::VectorXd divergence_f(const FlagFibration& Phi) { return divergence_f(Phi, Phi.f); }

Eigen::VectorXd coderivative_pullback(const FlagFibration& Phi, const Eigen::MatrixXd& f) {
    const int d = Phi.dim_m0;
    if (f.rows() != d || f.cols() != d) throw usage_error("coderivative_pullback: tensor dimension mismatch");
    const auto L = nomizu_operators(Phi);
    // Omega(j, k) = omega(e_j, e_k) = <f e_j, e_k> = f(k, j).  For the
    // invariant form, (nabla_X omega)(Y, Z) = -omega(L(X)Y, Z) - omega(Y, L(X)Z)
    // and delta omega(Z) = -sum_i (nabla_{e_i} omega)(e_i, Z).
    const Eigen::MatrixXd W = f.transpose();
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) {
        delta += W.transpose() * L[i].col(i);               // omega(L_i e_i, .)
        delta += L[i].transpose() * W.row(i).transpose();   // omega(e_i, L_i .)
    }
    return Phi.lambda * Phi.lambda * delta;
}

Eigen::VectorXd coderivative_pullback(const FlagFibration& Phi) {
    return coderivative_pullback(Phi, Phi.f);
}

double orthogonality_check(const RootSystem& R, int alpha, int beta) {
    if (alpha < 0 || alpha >= static_cast<int>(R.positive.size()) || beta < 0 ||
        beta >= static_cast<int>(R.positive.size()))
        throw usage_error("orthogonality_check: positive-root index out of range");
    // The connection on the full flag G/T only depends on Pi0 = {}; any valid
    // Pi0' gives the same m0 basis and Nomizu operators.
    std::vector<int> pi0p;
    for (int k = 0; k + 2 < R.n; ++k) pi0p.push_back(k);
    FlagFibration full = build_fibration(R, {}, pi0p);
    const auto L = nomizu_operators(full);
    const int pa = R.positive[alpha], pb = R.positive[beta];
    std::vector<int> xa, zb;
    for (int k = 0; k < full.dim_m0; ++k) {
        if (full.basis_root[k] == pa) xa.push_back(k);
        if (full.basis_root[k] == pb) zb.push_back(k);
    }
    double worst = 0.0;
    for (int x : xa)
        for (int y : xa)
            for (int z : zb) worst = std::max(worst, std::abs(L[x](z, y)));
    return worst;
}

} // namespace sdl
