#include "mfpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mfpca {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-14;  // relative to on-diagonal Frobenius norm
constexpr double kSignEpsilon = 1e-12;

void sign_normalize(std::vector<double>& v) {
    for (double c : v) {
        if (std::fabs(c) > kSignEpsilon) {
            if (c < 0.0)
                for (double& x : v) x = -x;
            return;
        }
    }
}

}  // namespace

EigenBasis eigendecompose(const SymMatrix& m) {
    if (!m.all_finite()) throw std::invalid_argument("eigendecompose: non-finite entries");

    const int n = m.order();
    // Working dense copy and accumulated rotations (eigenvectors as columns).
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) {
        V(i, i) = 1.0;
        for (int j = 0; j < n; ++j) A(i, j) = m.at(i, j);
    }

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off_sq = 0.0;
        double diag_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            diag_sq += A(i, i) * A(i, i);
            for (int j = i + 1; j < n; ++j) off_sq += 2.0 * A(i, j) * A(i, j);
        }
        const double off_norm = std::sqrt(off_sq);
        const double diag_norm = std::sqrt(diag_sq);
        if (off_norm == 0.0 || off_norm < kOffDiagonalTolerance * diag_norm) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;

                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                double t;
                if (std::fabs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                A(p, p) -= t * apq;
                A(q, q) += t * apq;
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = A(r, p);
                        const double arq = A(r, q);
                        A(r, p) = arp - s * (arq + tau * arp);
                        A(p, r) = A(r, p);
                        A(r, q) = arq + s * (arp - tau * arq);
                        A(q, r) = A(r, q);
                    }
                    const double vrp = V(r, p);
                    const double vrq = V(r, q);
                    V(r, p) = vrp - s * (vrq + tau * vrp);
                    V(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    // Stable sort descending, keeping Jacobi output order on ties.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return A(i, i) > A(j, j); });

    EigenBasis basis;
    basis.source_order = n;
    basis.eigenvalues.reserve(static_cast<std::size_t>(n));
    basis.eigenvectors.reserve(static_cast<std::size_t>(n));
    for (int k : order) {
        basis.eigenvalues.push_back(A(k, k));
        std::vector<double> vec(static_cast<std::size_t>(n));
        double norm_sq = 0.0;
        for (int r = 0; r < n; ++r) {
            vec[static_cast<std::size_t>(r)] = V(r, k);
            norm_sq += V(r, k) * V(r, k);
        }
        const double norm = std::sqrt(norm_sq);
        for (double& x : vec) x /= norm;
        sign_normalize(vec);
        basis.eigenvectors.push_back(std::move(vec));
    }
    return basis;
}

DominantPair dominant_eigenvector(const SymMatrix& m) {
    const EigenBasis basis = eigendecompose(m);
    DominantPair out;
    out.eigenvalue = basis.eigenvalues[0];
    out.vector = basis.eigenvectors[0];
    if (basis.eigenvalues.size() > 1) {
        const double gap = basis.eigenvalues[0] - basis.eigenvalues[1];
        out.degenerate = gap < 1e-12 * std::max(1.0, std::fabs(basis.eigenvalues[0]));
    }
    return out;
}

}  // namespace mfpca
