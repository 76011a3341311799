#include "mfpca/pca.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace mfpca {

namespace {

void check_data(const Matrix& X) {
    if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("fit: empty matrix");
    if (!X.all_finite()) throw std::invalid_argument("fit: non-finite entries");
    for (double v : X.data())
        if (v != 0.0) return;
    throw std::invalid_argument("fit: all-zero matrix, no direction defined");
}

void sign_normalize(std::vector<double>& v) {
    for (double c : v) {
        if (std::fabs(c) > 1e-12) {
            if (c < 0.0)
                for (double& x : v) x = -x;
            return;
        }
    }
}

bool top_pair_degenerate(const EigenBasis& basis) {
    if (basis.eigenvalues.size() < 2) return false;
    const double gap = basis.eigenvalues[0] - basis.eigenvalues[1];
    return gap < 1e-12 * std::max(1.0, std::fabs(basis.eigenvalues[0]));
}

}  // namespace

std::string_view PcaMethod::name() const {
    switch (kind) {
        case Kind::Regular: return "regular";
        case Kind::L1Kernel: return "l1-kernel";
        case Kind::RecursiveL1: return "recursive-l1";
    }
    return "regular";
}

PcaMethod pca_method_from_name(std::string_view name) {
    if (name == "regular") return PcaMethod::regular();
    if (name == "l1-kernel") return PcaMethod::l1_kernel();
    if (name == "recursive-l1") return PcaMethod::recursive_l1();
    throw std::invalid_argument("unknown PCA method: " + std::string(name));
}

double l1_objective(const Matrix& X, std::span<const double> v) {
    if (static_cast<int>(v.size()) != X.cols())
        throw std::invalid_argument("l1_objective: dimension mismatch");
    double total = 0.0;
    for (int t = 0; t < X.rows(); ++t) {
        double proj = 0.0;
        for (int d = 0; d < X.cols(); ++d) proj += v[static_cast<std::size_t>(d)] * X(t, d);
        total += std::fabs(proj);
    }
    return total;
}

RecursiveL1Result recursive_l1_pca(const Matrix& X, double tolerance, int max_iterations) {
    check_data(X);
    if (tolerance <= 0.0) throw std::invalid_argument("recursive_l1_pca: tolerance must be > 0");
    if (max_iterations < 1)
        throw std::invalid_argument("recursive_l1_pca: max_iterations must be >= 1");

    const int n = X.rows();
    const int d = X.cols();

    RecursiveL1Result result;
    result.direction = dominant_eigenvector(regular_covariance(X).matrix).vector;
    result.objective = l1_objective(X, result.direction);
    result.objective_trace.push_back(result.objective);

    std::set<std::vector<std::int8_t>> seen_signs;
    result.converged = false;
    for (int iter = 0; iter < max_iterations; ++iter) {
        result.iterations = iter + 1;

        std::vector<std::int8_t> signs(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            double proj = 0.0;
            for (int j = 0; j < d; ++j)
                proj += result.direction[static_cast<std::size_t>(j)] * X(t, j);
            signs[static_cast<std::size_t>(t)] = proj < 0.0 ? -1 : 1;  // sign(0) -> +1
        }
        if (!seen_signs.insert(signs).second) {
            // Repeated sign pattern: the iteration has entered its fixed cycle.
            result.converged = true;
            break;
        }

        std::vector<double> update(static_cast<std::size_t>(d), 0.0);
        for (int t = 0; t < n; ++t) {
            const double s = signs[static_cast<std::size_t>(t)];
            for (int j = 0; j < d; ++j) update[static_cast<std::size_t>(j)] += s * X(t, j);
        }
        double norm_sq = 0.0;
        for (double u : update) norm_sq += u * u;
        if (norm_sq == 0.0) {
            result.converged = true;
            break;
        }
        const double norm = std::sqrt(norm_sq);
        for (double& u : update) u /= norm;

        const double objective = l1_objective(X, update);
        if (objective < result.objective) {
            // Exact arithmetic guarantees a non-decreasing objective; a drop
            // here is rounding noise at the fixed point, so stop on the
            // previous (equal or better) iterate.
            result.converged = true;
            break;
        }

        double delta_sq = 0.0;
        for (int j = 0; j < d; ++j) {
            const double diff = update[static_cast<std::size_t>(j)] -
                                result.direction[static_cast<std::size_t>(j)];
            delta_sq += diff * diff;
        }

        result.direction = std::move(update);
        result.objective = objective;
        result.objective_trace.push_back(objective);

        if (std::sqrt(delta_sq) <= tolerance) {
            result.converged = true;
            break;
        }
    }

    sign_normalize(result.direction);
    return result;
}

PrincipalBasis fit(const Matrix& X, const PcaMethod& method) {
    check_data(X);

    PrincipalBasis out;
    out.method = method;
    switch (method.kind) {
        case PcaMethod::Kind::Regular:
            out.basis = eigendecompose(kernel_covariance(X, KernelKind::L2).matrix);
            out.degenerate = top_pair_degenerate(out.basis);
            break;
        case PcaMethod::Kind::L1Kernel:
            out.basis = eigendecompose(kernel_covariance(X, KernelKind::L1MF).matrix);
            out.degenerate = top_pair_degenerate(out.basis);
            break;
        case PcaMethod::Kind::RecursiveL1: {
            RecursiveL1Result r =
                recursive_l1_pca(X, method.tolerance, method.max_iterations);
            out.basis.eigenvalues = {r.objective};
            out.basis.eigenvectors = {std::move(r.direction)};
            out.basis.source_order = X.cols();
            out.converged = r.converged;
            break;
        }
    }
    return out;
}

}  // namespace mfpca
