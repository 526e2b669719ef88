#include "sdl/solvers.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

void axpy_vec(double s, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

void scale_vec(Vec& x, double s) {
    for (double& v : x) v *= s;
}

// modified Gram-Schmidt in the given inner product; returns the rank kept
int orthonormalize(std::vector<Vec>& block, const DotFn& dot) {
    int kept = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
        Vec& v = block[i];
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < kept; ++j) axpy_vec(-dot(block[j], v), block[j], v);
        const double nrm = std::sqrt(dot(v, v));
        if (nrm > 1e-12) {
            scale_vec(v, 1.0 / nrm);
            if (static_cast<int>(i) != kept) block[kept] = v;
            ++kept;
        }
    }
    block.resize(kept);
    return kept;
}

Vec random_vec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec v(n);
    for (double& x : v) x = nd(rng);
    return v;
}

} // namespace

IterStats conjugate_gradient(const ApplyFn& A, const Vec& b, Vec& x, const DotFn& dot,
                             double reltol, int maxiter) {
    const std::size_t n = b.size();
    Vec r(n), p(n), Ap(n);
    A(x, Ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    p = r;
    const double bnorm = std::sqrt(dot(b, b));
    IterStats st;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        st.converged = true;
        return st;
    }
    double rr = dot(r, r);
    for (int it = 0; it < maxiter; ++it) {
        st.residual = std::sqrt(rr) / bnorm;
        if (st.residual <= reltol) {
            st.converged = true;
            return st;
        }
        A(p, Ap);
        const double pAp = dot(p, Ap);
        if (!(pAp > 0.0)) {
            // the operator is only positive to quadrature accuracy; rough
            // residuals can expose indefinite directions
            st.breakdown = true;
            return st;
        }
        const double alpha = rr / pAp;
        axpy_vec(alpha, p, x);
        axpy_vec(-alpha, Ap, r);
        const double rr2 = dot(r, r);
        const double beta = rr2 / rr;
        rr = rr2;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        st.iterations = it + 1;
    }
    st.residual = std::sqrt(rr) / bnorm;
    st.converged = st.residual <= reltol;
    return st;
}

EigResult smallest_eigs_inverse_iteration(const ApplyFn& A, std::size_t n, int k, int block,
                                          const DotFn& dot, const ProjectFn& project,
                                          double cg_tol, int cg_maxiter, int outer_iters,
                                          double tol, std::uint64_t seed,
                                          const std::vector<Vec>* start) {
    if (block < k) block = k;
    std::mt19937_64 rng(seed);
    std::vector<Vec> X(block);
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (start && i < start->size() && (*start)[i].size() == n)
            X[i] = (*start)[i];
        else
            X[i] = random_vec(n, rng);
        if (project) project(X[i]);
    }
    orthonormalize(X, dot);

    EigResult res;
    std::vector<double> prev;
    for (int outer = 0; outer < outer_iters; ++outer) {
        // inverse power step
        std::vector<Vec> Y(X.size());
        for (std::size_t i = 0; i < X.size(); ++i) {
            Y[i].assign(n, 0.0);
            conjugate_gradient(A, X[i], Y[i], dot, cg_tol, cg_maxiter);
            if (dot(Y[i], Y[i]) < 1e-24) Y[i] = X[i];  // solver breakdown: power step
            if (project) project(Y[i]);
        }
        if (orthonormalize(Y, dot) < k)
            throw numerical_error("inverse iteration block collapsed");

        // Rayleigh-Ritz
        const int m = static_cast<int>(Y.size());
        std::vector<Vec> AY(m, Vec(n));
        for (int i = 0; i < m; ++i) A(Y[i], AY[i]);
        Eigen::MatrixXd S(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) S(i, j) = dot(Y[i], AY[j]);
        S = 0.5 * (S + S.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);

        std::vector<Vec> Z(m, Vec(n, 0.0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) axpy_vec(es.eigenvectors()(j, i), Y[j], Z[i]);
        X = std::move(Z);

        std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + k);
        res.stats.iterations = outer + 1;
        if (!prev.empty()) {
            double change = 0.0;
            for (int i = 0; i < k; ++i)
                change = std::max(change, std::abs(vals[i] - prev[i]) / std::max(std::abs(vals[i]), 1e-30));
            if (change < tol) {
                res.values = vals;
                res.vectors.assign(X.begin(), X.begin() + k);
                res.stats.converged = true;
                res.stats.residual = change;
                return res;
            }
        }
        prev = vals;
    }
    res.values = prev;
    res.vectors.assign(X.begin(), X.begin() + k);
    return res;
}

double smallest_eig_lanczos(const ApplyFn& A, std::size_t n, const DotFn& dot,
                            const ProjectFn& project, int iters, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Vec v = random_vec(n, rng);
    if (project) project(v);
    scale_vec(v, 1.0 / std::sqrt(dot(v, v)));

    std::vector<Vec> V;
    V.push_back(v);
    std::vector<double> alpha, beta;
    Vec w(n);
    for (int j = 0; j < iters; ++j) {
        A(V[j], w);
        if (project) project(w);
        const double a = dot(w, V[j]);
        alpha.push_back(a);
        axpy_vec(-a, V[j], w);
        if (j > 0) axpy_vec(-beta[j - 1], V[j - 1], w);
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& u : V) axpy_vec(-dot(u, w), u, w);
        const double b = std::sqrt(dot(w, w));
        if (b < 1e-13) break;
        beta.push_back(b);
        Vec next = w;
        scale_vec(next, 1.0 / b);
        V.push_back(std::move(next));
    }
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    return es.eigenvalues()(0);
}

} // namespace sdl
