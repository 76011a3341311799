#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mfpca/linalg.hpp"
#include "mfpca/rng.hpp"

using namespace mfpca;
using test_helpers::random_sym_matrix;

namespace {

SymMatrix diag(std::initializer_list<double> values) {
    SymMatrix m(static_cast<int>(values.size()));
    int i = 0;
    for (double v : values) {
        m.set(i, i, v);
        ++i;
    }
    return m;
}

double residual_inf(const SymMatrix& m, double lambda, const std::vector<double>& v) {
    double worst = 0.0;
    for (int i = 0; i < m.order(); ++i) {
        double mv = 0.0;
        for (int j = 0; j < m.order(); ++j) mv += m.at(i, j) * v[static_cast<std::size_t>(j)];
        worst = std::max(worst, std::fabs(mv - lambda * v[static_cast<std::size_t>(i)]));
    }
    return worst;
}

}  // namespace

TEST_CASE("SymMatrix stores one triangle, symmetry is exact") {
    SymMatrix m(3);
    m.set(0, 2, 0.1234567890123456789);
    CHECK(m.at(2, 0) == m.at(0, 2));
    m.set(2, 1, -7.5);
    CHECK(m.at(1, 2) == -7.5);
    CHECK_THROWS_AS(SymMatrix(0), std::invalid_argument);
}

TEST_CASE("identity eigendecomposition") {
    SymMatrix m = diag({1, 1, 1});
    const EigenBasis basis = eigendecompose(m);
    REQUIRE(basis.eigenvalues.size() == 3);
    for (double lambda : basis.eigenvalues) CHECK(lambda == doctest::Approx(1.0).epsilon(1e-14));
    // Any orthonormal basis is fine; verify orthonormality.
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            double dot = 0.0;
            for (int i = 0; i < 3; ++i)
                dot += basis.eigenvectors[a][i] * basis.eigenvectors[b][i];
            CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
        }
    }
}

TEST_CASE("diagonal matrix eigendecomposition") {
    const EigenBasis basis = eigendecompose(diag({5, 2, -1}));
    CHECK(basis.eigenvalues[0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(basis.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(basis.eigenvalues[2] == doctest::Approx(-1.0).epsilon(1e-14));
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            CHECK(basis.eigenvectors[k][i] == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-12));
}

// Expected values computed with a 50-digit independent reference solve and
// frozen here to 17 significant digits.
TEST_CASE("fixed 4x4 matches high-precision reference") {
    SymMatrix m(4);
    m.set(0, 0, 2.17);
    m.set(1, 0, -0.58);
    m.set(1, 1, 1.05);
    m.set(2, 0, 0.93);
    m.set(2, 1, -0.27);
    m.set(2, 2, 3.62);
    m.set(3, 0, 0.41);
    m.set(3, 1, 0.80);
    m.set(3, 2, -1.14);
    m.set(3, 3, 0.55);

    const double expected_values[4] = {4.4087830110422154, 2.124170626041593,
                                       1.3410381892562328, -0.48399182634004106};
    const double expected_vectors[4][4] = {
        {0.36544312163830156, -0.19500963817027828, 0.87244578192504939, -0.25934711000730245},
        {0.87530878154281826, -0.12525760662112039, -0.28453860231698336, 0.3703820361857107},
        {0.035378179102907914, 0.84625961692238209, 0.30397720656129606, 0.43610882025124972},
        {0.31469707060066981, 0.47971495053899344, -0.25587887619707475, -0.77805226090594339},
    };

    const EigenBasis basis = eigendecompose(m);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::fabs(basis.eigenvalues[k] - expected_values[k]) <= 1e-8);
        for (int i = 0; i < 4; ++i)
            CHECK(std::fabs(basis.eigenvectors[k][i] - expected_vectors[k][i]) <= 1e-8);
    }
}

TEST_CASE("random symmetric matrices satisfy the eigenpair contract") {
    SplitMix64 rng(2024, 11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_uniform01() * 5.0);
        const SymMatrix m = random_sym_matrix(rng, n, 1.0 + 9.0 * rng.next_uniform01());
        const EigenBasis basis = eigendecompose(m);
        const double scale = std::max(1.0, m.max_abs());

        REQUIRE(static_cast<int>(basis.eigenvalues.size()) == n);
        for (int k = 0; k < n; ++k) {
            if (k > 0) CHECK(basis.eigenvalues[k - 1] >= basis.eigenvalues[k]);
            CHECK(residual_inf(m, basis.eigenvalues[k], basis.eigenvectors[k]) <=
                  1e-10 * scale);
            double norm_sq = 0.0;
            for (double x : basis.eigenvectors[k]) norm_sq += x * x;
            CHECK(std::fabs(std::sqrt(norm_sq) - 1.0) <= 1e-12);
            // Sign convention: first non-negligible component non-negative.
            for (double x : basis.eigenvectors[k]) {
                if (std::fabs(x) > 1e-12) {
                    CHECK(x >= 0.0);
                    break;
                }
            }
        }

        // Orthonormality.
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i)
                    dot += basis.eigenvectors[a][i] * basis.eigenvectors[b][i];
                CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
            }

        // Trace preservation.
        double lambda_sum = 0.0;
        for (double lambda : basis.eigenvalues) lambda_sum += lambda;
        CHECK(std::fabs(lambda_sum - m.trace()) <= 1e-10 * std::max(1.0, std::fabs(m.trace())));

        // Reconstruction: sum_k lambda_k v_k v_k^T rebuilds m.
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double rebuilt = 0.0;
                for (int k = 0; k < n; ++k)
                    rebuilt += basis.eigenvalues[k] * basis.eigenvectors[k][i] *
                               basis.eigenvectors[k][j];
                CHECK(std::fabs(rebuilt - m.at(i, j)) <= 1e-9 * scale);
            }
    }
}

TEST_CASE("eigendecomposition is bit-deterministic") {
    SplitMix64 rng(5, 5);
    const SymMatrix m = random_sym_matrix(rng, 5);
    const EigenBasis a = eigendecompose(m);
    const EigenBasis b = eigendecompose(m);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("non-finite entries are rejected") {
    SymMatrix m(2);
    m.set(0, 1, std::nan(""));
    CHECK_THROWS_AS(eigendecompose(m), std::invalid_argument);
    m.set(0, 1, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(dominant_eigenvector(m), std::invalid_argument);
}

TEST_CASE("dominant eigenvector closed forms") {
    {
        const DominantPair top = dominant_eigenvector(diag({3, 1}));
        CHECK(top.eigenvalue == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(top.vector[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(top.vector[1]) <= 1e-12);
        CHECK_FALSE(top.degenerate);
    }
    {
        SymMatrix m(2);
        m.set(0, 0, 2);
        m.set(1, 1, 2);
        m.set(0, 1, 1);
        const DominantPair top = dominant_eigenvector(m);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK(std::fabs(top.eigenvalue - 3.0) <= 1e-12);
        CHECK(std::fabs(top.vector[0] - inv_sqrt2) <= 1e-12);
        CHECK(std::fabs(top.vector[1] - inv_sqrt2) <= 1e-12);
    }
}

TEST_CASE("dominant pair equals the first full eigenpair") {
    SplitMix64 rng(77, 1);
    const SymMatrix m = random_sym_matrix(rng, 5);
    const EigenBasis basis = eigendecompose(m);
    const DominantPair top = dominant_eigenvector(m);
    CHECK(top.eigenvalue == basis.eigenvalues[0]);
    CHECK(top.vector == basis.eigenvectors[0]);
}

TEST_CASE("degenerate top eigenvalue is flagged, result still returned") {
    const DominantPair top = dominant_eigenvector(diag({2, 2}));
    CHECK(top.degenerate);
    double norm_sq = 0.0;
    for (double x : top.vector) norm_sq += x * x;
    CHECK(std::fabs(std::sqrt(norm_sq) - 1.0) <= 1e-12);
}
