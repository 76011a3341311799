#pragma once

#include <vector>

#include "mfpca/matrix.hpp"

namespace mfpca {

// Symmetric matrix stored as one (lower) triangle, so entries (i,j) and (j,i)
// are the same storage and symmetry holds exactly by construction.
class SymMatrix {
public:
    explicit SymMatrix(int order) : order_(order) {
        if (order < 1) throw std::invalid_argument("SymMatrix: order must be >= 1");
        tri_.assign(static_cast<std::size_t>(order) * (order + 1) / 2, 0.0);
    }

    // Reads the lower triangle of a square matrix.
    static SymMatrix from_dense(const Matrix& m) {
        if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix not square");
        SymMatrix s(m.rows());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j <= i; ++j) s.set(i, j, m(i, j));
        return s;
    }

    int order() const { return order_; }

    double at(int i, int j) const { return tri_[index(i, j)]; }
    void set(int i, int j, double v) { tri_[index(i, j)] = v; }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < order_; ++i) t += at(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : tri_) m = std::max(m, std::fabs(v));
        return m;
    }

    bool all_finite() const {
        for (double v : tri_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Matrix dense() const {
        Matrix m(order_, order_);
        for (int i = 0; i < order_; ++i)
            for (int j = 0; j < order_; ++j) m(i, j) = at(i, j);
        return m;
    }

    bool operator==(const SymMatrix&) const = default;

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || j < 0 || i >= order_ || j >= order_)
            throw std::out_of_range("SymMatrix: index out of range");
        if (i < j) std::swap(i, j);
        return static_cast<std::size_t>(i) * (i + 1) / 2 + static_cast<std::size_t>(j);
    }

    int order_;
    std::vector<double> tri_;
};

// All eigenpairs of a SymMatrix, eigenvalues sorted non-increasing.
// Each eigenvector is unit norm and sign-normalized: its first component with
// magnitude above 1e-12 is non-negative.
struct EigenBasis {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
    int source_order = 0;
};

struct DominantPair {
    double eigenvalue = 0.0;
    std::vector<double> vector;
    // Top two eigenvalues closer than 1e-12 * max(1, |lambda1|); the vector is
    // still a valid spanning vector of the top eigenspace.
    bool degenerate = false;
};

// Full eigendecomposition by cyclic Jacobi rotation sweeps. Matrices here are
// tiny (order <= a handful), where Jacobi is unconditionally robust.
EigenBasis eigendecompose(const SymMatrix& m);

DominantPair dominant_eigenvector(const SymMatrix& m);

}  // namespace mfpca
