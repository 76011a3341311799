#include "mfpca/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace mfpca {

namespace {

void check_pair(std::span<const double> w, std::span<const double> x) {
    if (w.size() != x.size()) throw std::invalid_argument("dot: length mismatch");
    if (w.empty()) throw std::invalid_argument("dot: empty vectors");
    for (double v : w)
        if (!std::isfinite(v)) throw std::invalid_argument("dot: non-finite entry");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("dot: non-finite entry");
}

// One term of the multiplication-free product. The sign is resolved by
// comparing operand signs; a zero operand zeroes the term.
double mf_term(double w, double x, OpCount& ops) {
    ++ops.sign_ops;
    ++ops.min_ops;
    if (w == 0.0 || x == 0.0) return 0.0;
    const double aw = std::fabs(w);
    const double ax = std::fabs(x);
    const double m = aw < ax ? aw : ax;
    return ((w < 0.0) == (x < 0.0)) ? m : -m;
}

}  // namespace

std::string_view kernel_kind_name(KernelKind kind) {
    return kind == KernelKind::L2 ? "l2" : "l1-mf";
}

double mf_dot(std::span<const double> w, std::span<const double> x, OpCount& ops) {
    check_pair(w, x);
    double acc = mf_term(w[0], x[0], ops);
    for (std::size_t i = 1; i < w.size(); ++i) {
        acc += mf_term(w[i], x[i], ops);
        ++ops.additions;
    }
    return acc;
}

double mf_dot(std::span<const double> w, std::span<const double> x) {
    OpCount scratch;
    return mf_dot(w, x, scratch);
}

double l2_dot(std::span<const double> w, std::span<const double> x, OpCount& ops) {
    check_pair(w, x);
    double acc = w[0] * x[0];
    ++ops.multiplications;
    for (std::size_t i = 1; i < w.size(); ++i) {
        acc += w[i] * x[i];
        ++ops.multiplications;
        ++ops.additions;
    }
    return acc;
}

CovarianceResult kernel_covariance(const Matrix& X, KernelKind kind) {
    if (X.rows() < 1 || X.cols() < 1)
        throw std::invalid_argument("kernel_covariance: empty matrix");
    if (!X.all_finite()) throw std::invalid_argument("kernel_covariance: non-finite entries");

    const Matrix Xt = X.transposed();  // row i of Xt is column i of X
    const int d = X.cols();
    CovarianceResult result{SymMatrix(d), OpCount{}, kind};
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const double v = kind == KernelKind::L1MF
                                 ? mf_dot(Xt.row(i), Xt.row(j), result.ops)
                                 : l2_dot(Xt.row(i), Xt.row(j), result.ops);
            result.matrix.set(i, j, v);
        }
    }
    return result;
}

CovarianceResult regular_covariance(const Matrix& X) {
    return kernel_covariance(X, KernelKind::L2);
}

}  // namespace mfpca
