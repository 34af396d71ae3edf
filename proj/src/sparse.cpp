#include "pcity/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pcity/errors.hpp"

namespace pcity {

SparseMatrix SparseMatrix::zeros(const Mesh& mesh) {
    SparseMatrix m;
    m.n_ = mesh.node_count();
    m.off_ = mesh.pattern_row_offsets();
    m.cols_ = mesh.pattern_cols();
    m.vals_.assign(m.cols_.size(), 0.0);
    return m;
}

SparseMatrix SparseMatrix::from_triplets(
    index_t n, const std::vector<std::tuple<index_t, index_t, double>>& t) {
    std::map<std::pair<index_t, index_t>, double> acc;
    for (const auto& [i, j, v] : t) acc[{i, j}] += v;
    SparseMatrix m;
    m.n_ = n;
    m.off_.assign(n + 1, 0);
    for (const auto& [ij, v] : acc) ++m.off_[ij.first + 1];
    for (index_t i = 0; i < n; ++i) m.off_[i + 1] += m.off_[i];
    m.cols_.resize(acc.size());
    m.vals_.resize(acc.size());
    std::size_t k = 0;
    for (const auto& [ij, v] : acc) {
        m.cols_[k] = ij.second;
        m.vals_[k] = v;
        ++k;
    }
    return m;
}

SparseMatrix SparseMatrix::identity(index_t n) {
    std::vector<std::tuple<index_t, index_t, double>> t;
    t.reserve(n);
    for (index_t i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
    return from_triplets(n, t);
}

void SparseMatrix::add(index_t i, index_t j, double v) {
    auto lo = cols_.begin() + off_[i], hi = cols_.begin() + off_[i + 1];
    auto it = std::lower_bound(lo, hi, j);
    if (it == hi || *it != j)
        throw Error("PatternMiss", "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                       ") outside the sparsity pattern");
    vals_[static_cast<std::size_t>(it - cols_.begin())] += v;
}

double SparseMatrix::get(index_t i, index_t j) const {
    auto lo = cols_.begin() + off_[i], hi = cols_.begin() + off_[i + 1];
    auto it = std::lower_bound(lo, hi, j);
    if (it == hi || *it != j) return 0.0;
    return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

void SparseMatrix::mul(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (index_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (index_t k = off_[i]; k < off_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
        y[i] = s;
    }
}

std::vector<double> SparseMatrix::mul(const std::vector<double>& x) const {
    std::vector<double> y;
    mul(x, y);
    return y;
}

std::vector<double> SparseMatrix::row_sums() const {
    std::vector<double> s(n_, 0.0);
    for (index_t i = 0; i < n_; ++i)
        for (index_t k = off_[i]; k < off_[i + 1]; ++k) s[i] += vals_[k];
    return s;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (index_t i = 0; i < n_; ++i) d[i] = get(i, i);
    return d;
}

void SparseMatrix::set_dirichlet_symmetric(const std::vector<index_t>& nodes) {
    std::vector<char> mark(n_, 0);
    for (index_t d : nodes) mark[d] = 1;
    for (index_t i = 0; i < n_; ++i) {
        for (index_t k = off_[i]; k < off_[i + 1]; ++k) {
            index_t j = cols_[k];
            if (mark[i] || mark[j]) vals_[k] = (i == j) ? 1.0 : 0.0;
        }
    }
}

SparseMatrix& SparseMatrix::operator+=(const SparseMatrix& other) {
    if (other.n_ != n_ || other.cols_.size() != cols_.size())
        throw Error("PatternMiss", "matrix sum requires identical patterns");
    for (std::size_t k = 0; k < vals_.size(); ++k) vals_[k] += other.vals_[k];
    return *this;
}

SparseMatrix& SparseMatrix::scale(double s) {
    for (double& v : vals_) v *= s;
    return *this;
}

std::vector<double> lump(const SparseMatrix& m) {
    std::vector<double> d = m.row_sums();
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!(d[i] > 0.0))
            throw Error("NonPositiveLumpedEntry",
                        "row " + std::to_string(i) + " lumps to " + std::to_string(d[i]));
    return d;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double true_residual(const SparseMatrix& a, const std::vector<double>& b,
                     const std::vector<double>& x, double bnorm) {
    std::vector<double> r = a.mul(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return norm(r) / bnorm;
}

double max_abs_row_sum(const SparseMatrix& a) {
    double m = 0.0;
    const auto& off = a.row_offsets();
    const auto& vals = a.values();
    for (index_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (index_t k = off[i]; k < off[i + 1]; ++k) s += std::abs(vals[k]);
        m = std::max(m, s);
    }
    return m;
}

} // namespace

SolveResult solve(const SparseMatrix& a, const std::vector<double>& b, const SolveOpts& opts) {
    const index_t n = a.rows();
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * static_cast<int>(n);
    const double bnorm = norm(b);

    SolveResult res;
    res.x.assign(n, 0.0);
    if (bnorm == 0.0) return res; // x = 0 solves exactly

    if (opts.x0) res.x = *opts.x0;

    std::vector<double> invdiag = a.diagonal();
    for (double& d : invdiag) d = (std::abs(d) > 1e-300) ? 1.0 / d : 1.0;
    const double norm_a = max_abs_row_sum(a);

    std::vector<double>& x = res.x;
    std::vector<double> r = a.mul(x);
    for (index_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

    // Acceptance is ‖r‖ <= tol·‖b‖, with a backward-error escape
    // ‖r‖ <= tol·(‖b‖ + ‖A‖‖x‖) for systems whose rhs is much smaller than
    // the solution scale (warm-started solves near a steady state).
    auto accepted = [&](double rnorm) {
        return rnorm <= opts.rel_tol * bnorm ||
               rnorm <= opts.rel_tol * (bnorm + norm_a * norm(x));
    };
    auto refresh = [&]() {
        r = a.mul(x);
        for (index_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    };

    int iter = 0, restarts = 0;
    if (opts.symmetric) {
        std::vector<double> z(n), p(n), q(n);
        auto restart = [&]() {
            refresh();
            for (index_t i = 0; i < n; ++i) z[i] = invdiag[i] * r[i];
            p = z;
            return dot(r, z);
        };
        double rz = restart();
        while (iter < max_iter) {
            if (norm(r) <= opts.rel_tol * bnorm) {
                refresh();
                double rn = norm(r);
                if (accepted(rn)) {
                    res.iterations = iter;
                    res.rel_residual = rn / bnorm;
                    return res;
                }
                if (++restarts > 3)
                    throw SolveError("MaxIterExceeded", "stagnated after restarts", rn / bnorm,
                                     iter);
                rz = restart();
                if (!(rz > 0.0)) {
                    res.iterations = iter;
                    res.rel_residual = rn / bnorm;
                    return res; // residual at the floating-point floor
                }
            }
            a.mul(p, q);
            double pq = dot(p, q);
            if (!(std::abs(pq) > 0.0))
                throw SolveError("Breakdown", "CG curvature vanished",
                                 true_residual(a, b, x, bnorm), iter);
            double alpha = rz / pq;
            for (index_t i = 0; i < n; ++i) x[i] += alpha * p[i];
            for (index_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
            for (index_t i = 0; i < n; ++i) z[i] = invdiag[i] * r[i];
            double rz_new = dot(r, z);
            double beta = rz_new / rz;
            rz = rz_new;
            for (index_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
            ++iter;
        }
    } else {
        // BiCGStab, Jacobi-preconditioned
        std::vector<double> rhat(n), p(n), v(n), phat(n), s(n), shat(n), t(n);
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        auto restart = [&]() {
            refresh();
            rhat = r;
            rho = alpha = omega = 1.0;
            std::fill(p.begin(), p.end(), 0.0);
            std::fill(v.begin(), v.end(), 0.0);
        };
        restart();
        while (iter < max_iter) {
            if (norm(r) <= opts.rel_tol * bnorm) {
                refresh();
                double rn = norm(r);
                if (accepted(rn)) {
                    res.iterations = iter;
                    res.rel_residual = rn / bnorm;
                    return res;
                }
                if (++restarts > 3)
                    throw SolveError("MaxIterExceeded", "stagnated after restarts", rn / bnorm,
                                     iter);
                restart();
            }
            double rho_new = dot(rhat, r);
            if (!(std::abs(rho_new) > 0.0)) {
                // exact stagnation: either converged to the FP floor or a true breakdown
                refresh();
                double rn = norm(r);
                if (accepted(rn) || rn <= 1e-12 * (bnorm + norm_a * norm(x))) {
                    res.iterations = iter;
                    res.rel_residual = rn / bnorm;
                    return res;
                }
                throw SolveError("Breakdown", "BiCGStab rho vanished", rn / bnorm, iter);
            }
            double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for (index_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
            for (index_t i = 0; i < n; ++i) phat[i] = invdiag[i] * p[i];
            a.mul(phat, v);
            double rv = dot(rhat, v);
            if (!(std::abs(rv) > 0.0))
                throw SolveError("Breakdown", "BiCGStab alpha denominator vanished",
                                 true_residual(a, b, x, bnorm), iter);
            alpha = rho / rv;
            for (index_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
            if (norm(s) <= opts.rel_tol * bnorm) {
                for (index_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
                r = s;
                ++iter;
                continue; // convergence check at loop head
            }
            for (index_t i = 0; i < n; ++i) shat[i] = invdiag[i] * s[i];
            a.mul(shat, t);
            double tt = dot(t, t);
            if (!(tt > 0.0))
                throw SolveError("Breakdown", "BiCGStab omega denominator vanished",
                                 true_residual(a, b, x, bnorm), iter);
            omega = dot(t, s) / tt;
            for (index_t i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
            for (index_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
            ++iter;
        }
    }
    throw SolveError("MaxIterExceeded",
                     "no convergence in " + std::to_string(max_iter) + " iterations",
                     true_residual(a, b, res.x, bnorm), iter);
}

} // namespace pcity
