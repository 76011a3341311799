#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mfpca/kernel.hpp"
#include "mfpca/linalg.hpp"
#include "mfpca/matrix.hpp"

namespace mfpca {

// The three principal-direction estimators this library compares.
struct PcaMethod {
    enum class Kind { Regular, L1Kernel, RecursiveL1 };

    Kind kind = Kind::Regular;
    double tolerance = 1e-8;   // RecursiveL1 convergence tolerance on iterate change
    int max_iterations = 1000; // RecursiveL1 only

    static PcaMethod regular() { return {Kind::Regular}; }
    static PcaMethod l1_kernel() { return {Kind::L1Kernel}; }
    static PcaMethod recursive_l1(double tolerance = 1e-8, int max_iterations = 1000) {
        return {Kind::RecursiveL1, tolerance, max_iterations};
    }

    std::string_view name() const;
};

// Parses "regular", "l1-kernel" or "recursive-l1"; throws on anything else.
PcaMethod pca_method_from_name(std::string_view name);

// Fitted principal directions. For Regular and L1Kernel the basis holds all
// eigenpairs of the respective covariance. For RecursiveL1 it holds a single
// direction and the value slot carries the final objective sum_t |v . row_t|.
struct PrincipalBasis {
    PcaMethod method;
    EigenBasis basis;
    bool degenerate = false;  // top two eigenvalues indistinguishable
    bool converged = true;    // RecursiveL1 hit max_iterations when false
};

// Objective of the recursive estimator: sum over rows of |v . row|.
double l1_objective(const Matrix& X, std::span<const double> v);

struct RecursiveL1Result {
    std::vector<double> direction;       // unit, sign-normalized
    double objective = 0.0;
    std::vector<double> objective_trace; // value per accepted iterate, non-decreasing
    int iterations = 0;
    bool converged = true;
};

// Fixed-point iteration for argmax_{|v|=1} sum_t |v . row_t|:
//   s <- sign(X v)   (sign(0) taken as +1)
//   v <- X^T s / |X^T s|
// initialized at the regular-PCA dominant eigenvector. Stops when the iterate
// change drops to `tolerance`, a sign pattern repeats, or the computed
// objective stops improving. Non-convergence after max_iterations returns the
// best iterate with converged = false rather than failing.
RecursiveL1Result recursive_l1_pca(const Matrix& X, double tolerance = 1e-8,
                                   int max_iterations = 1000);

// Fits the chosen estimator to an N x D matrix whose columns are already
// normalized and mean-subtracted (the detect module's responsibility; no
// re-centering happens here).
PrincipalBasis fit(const Matrix& X, const PcaMethod& method);

}  // namespace mfpca
