#pragma once

#include <tuple>
#include <vector>

#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"

namespace pcity {

/// Compressed-row sparse matrix. Column indices are strictly increasing in
/// each row; the pattern of assembled operators comes from the mesh node
/// adjacency and is structurally symmetric.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// All-zero matrix on the mesh's P1 adjacency pattern.
    static SparseMatrix zeros(const Mesh& mesh);
    /// Small-matrix helper for tests and hand assemblies.
    static SparseMatrix from_triplets(index_t n,
                                      const std::vector<std::tuple<index_t, index_t, double>>& t);
    static SparseMatrix identity(index_t n);

    index_t rows() const { return n_; }
    const std::vector<index_t>& row_offsets() const { return off_; }
    const std::vector<index_t>& cols() const { return cols_; }
    const std::vector<double>& values() const { return vals_; }
    std::vector<double>& values() { return vals_; }

    /// Accumulate into an existing pattern entry; throws if (i,j) is absent.
    void add(index_t i, index_t j, double v);
    double get(index_t i, index_t j) const; // 0 when outside the pattern

    void mul(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> mul(const std::vector<double>& x) const;

    std::vector<double> row_sums() const;
    std::vector<double> diagonal() const;

    /// Symmetric Dirichlet elimination: zero row and column, put 1 on the
    /// diagonal. Keeps the pattern. Caller zeroes the matching rhs entries.
    void set_dirichlet_symmetric(const std::vector<index_t>& nodes);

    SparseMatrix& operator+=(const SparseMatrix& other); // same pattern required
    SparseMatrix& scale(double s);

private:
    index_t n_ = 0;
    std::vector<index_t> off_, cols_;
    std::vector<double> vals_;
};

/// Mass lumping by row sums; throws NonPositiveLumpedEntry when a sum is <= 0.
std::vector<double> lump(const SparseMatrix& m);

struct SolveOpts {
    bool symmetric = false; // CG when true, BiCGStab otherwise
    double rel_tol = 1e-8;
    int max_iter = 0; // 0 -> 10 * n
    const std::vector<double>* x0 = nullptr;
};

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    double rel_residual = 0.0; // true residual norm / rhs norm
};

/// Jacobi-preconditioned CG / BiCGStab. The reported residual is the true
/// one, recomputed from A and b. Throws SolveError ("Breakdown" or
/// "MaxIterExceeded"), carrying the residual actually achieved.
SolveResult solve(const SparseMatrix& a, const std::vector<double>& b, const SolveOpts& opts = {});

} // namespace pcity
