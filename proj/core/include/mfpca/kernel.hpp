#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "mfpca/linalg.hpp"
#include "mfpca/matrix.hpp"

namespace mfpca {

enum class KernelKind { L2, L1MF };

std::string_view kernel_kind_name(KernelKind kind);

// Logical term-operation counts, matching the per-dot-product accounting of
// N multiplications + (N-1) additions for the standard product versus
// N sign + N min + (N-1) additions for the multiplication-free product.
// Counts are exact and depend only on input shape.
struct OpCount {
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;
    std::uint64_t sign_ops = 0;
    std::uint64_t min_ops = 0;

    bool operator==(const OpCount&) const = default;
};

// Multiplication-free dot product: sum_i sign(w_i * x_i) * min(|w_i|, |x_i|),
// where the sign comes from comparing the two operand signs (never from an
// actual product) and the min from a magnitude comparison. A term with a zero
// operand contributes 0. Left-to-right accumulation, single accumulator.
// On the diagonal this induces the l1 norm: mf_dot(x, x) == sum_i |x_i|.
double mf_dot(std::span<const double> w, std::span<const double> x);
double mf_dot(std::span<const double> w, std::span<const double> x, OpCount& ops);

// Standard dot product with the same counting instrumentation.
double l2_dot(std::span<const double> w, std::span<const double> x, OpCount& ops);

struct CovarianceResult {
    SymMatrix matrix;
    OpCount ops;
    KernelKind kind;
};

// Gram matrix of the columns of X under the chosen product: entry (i,j) is
// col_i . col_j (L2) or col_i (.) col_j (L1MF). Upper triangle computed and
// mirrored; diagonal computed once. The L1MF path performs zero
// multiplications, which the returned OpCount substantiates.
CovarianceResult kernel_covariance(const Matrix& X, KernelKind kind);

// C = X^T X, the plain sample covariance. Same as kernel_covariance(X, L2).
CovarianceResult regular_covariance(const Matrix& X);

}  // namespace mfpca
