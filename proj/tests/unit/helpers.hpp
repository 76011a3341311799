#pragma once

#include <cmath>
#include <vector>

#include "mfpca/linalg.hpp"
#include "mfpca/matrix.hpp"
#include "mfpca/rng.hpp"

namespace test_helpers {

inline mfpca::Matrix random_matrix(mfpca::SplitMix64& rng, int rows, int cols,
                                   double scale = 1.0) {
    mfpca::Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = scale * rng.next_gaussian();
    return m;
}

inline mfpca::SymMatrix random_sym_matrix(mfpca::SplitMix64& rng, int order,
                                          double scale = 1.0) {
    mfpca::SymMatrix s(order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j <= i; ++j) s.set(i, j, scale * rng.next_gaussian());
    return s;
}

inline std::vector<double> random_vector(mfpca::SplitMix64& rng, int n, double scale = 1.0,
                                         double zero_fraction = 0.0) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) {
        if (zero_fraction > 0.0 && rng.next_uniform01() < zero_fraction)
            x = 0.0;
        else
            x = scale * rng.next_gaussian();
    }
    return v;
}

// Angle between the lines spanned by two unit vectors (sign-insensitive).
inline double line_angle(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    const double c = std::min(1.0, std::fabs(dot));
    return std::acos(c);
}

}  // namespace test_helpers
