#include <doctest.h>

#include <random>

#include "mkit/meixner.hpp"

using namespace mkit;

namespace {

ComplexMatrix random_U(std::mt19937_64& rng, std::size_t d)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix U(d, d);
    for (Eigen::Index i = 0; i < U.rows(); ++i)
        for (Eigen::Index j = 0; j < U.cols(); ++j)
            U(i, j) = Complex(g(rng), g(rng));
    return U;
}

ComplexMatrix scalar_matrix(Complex u)
{
    ComplexMatrix U(1, 1);
    U(0, 0) = u;
    return U;
}

/// Brute force over all d x d matrices with entries <= bound.
std::size_t brute_force_count(const ConstrainedMatrixSet& set, int bound)
{
    const std::size_t d = set.dim();
    const std::size_t cells = d * d;
    std::vector<int> a(cells, 0);
    std::size_t count = 0;
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) {
            int row = 0, col = 0;
            for (std::size_t j = 0; j < d; ++j) {
                row += a[i * d + j];
                col += a[j * d + i];
            }
            ok = row <= set.row_caps[i] && col <= set.col_caps[i] && (!set.row_pinned[i] || row == set.row_caps[i])
                 && (!set.col_pinned[i] || col == set.col_caps[i]);
        }
        count += ok ? 1 : 0;
        std::size_t pos = 0;
        while (pos < cells && a[pos] == bound)
            a[pos++] = 0;
        if (pos == cells)
            break;
        ++a[pos];
    }
    return count;
}

} // namespace

TEST_CASE("constrained matrix enumeration")
{
    CHECK(enumerate_constrained_matrices(ConstrainedMatrixSet::capped({0, 0}, {0, 0})).size() == 1);
    CHECK(enumerate_constrained_matrices(ConstrainedMatrixSet::capped({2}, {3})).size() == 3);
    CHECK(enumerate_constrained_matrices(ConstrainedMatrixSet::capped({1, 1}, {1, 1})).size() == 7);

    const auto set = ConstrainedMatrixSet::capped({2, 1, 2}, {1, 2, 2});
    const auto all = enumerate_constrained_matrices(set);
    CHECK(all.size() == brute_force_count(set, 2));
    // graded-lex order of the flattened entries
    for (std::size_t i = 1; i < all.size(); ++i) {
        const int s0 = all[i - 1].sum(), s1 = all[i].sum();
        CHECK(s0 <= s1);
    }

    const auto pinned = ConstrainedMatrixSet::degenerate(MultiIndex{2, 1, 1}, MultiIndex{1, 2, 1}, 1, 2);
    CHECK(enumerate_constrained_matrices(pinned).size() == brute_force_count(pinned, 2));
    // a pinned row that exceeds the total column capacity has no matrices
    const auto empty = ConstrainedMatrixSet::degenerate(MultiIndex{1, 0}, MultiIndex{0, 3}, 1, 2);
    CHECK(enumerate_constrained_matrices(empty).empty());
}

TEST_CASE("hypergeometric sum: small closed values")
{
    std::mt19937_64 rng(1);
    const ComplexMatrix U = random_U(rng, 2);
    CHECK(meixner_hyper(MultiIndex{0, 0}, MultiIndex{3, 1}, U, 4.0) == Complex(1.0));
    CHECK(std::abs(meixner_hyper(MultiIndex{1}, MultiIndex{1}, scalar_matrix(3.0), 2.0)) < 1e-15);
    const Complex expected = 1.0 + (1.0 - U(1, 0)) / 3.0;
    CHECK(std::abs(meixner_hyper(MultiIndex{1, 0}, MultiIndex{0, 1}, U, 3.0) - expected) < 1e-15);
}

TEST_CASE("d = 1 reduces to a terminating Gauss series")
{
    // U = 0: Chu-Vandermonde gives (sigma + n)_m / (sigma)_m
    for (int m = 0; m <= 8; ++m) {
        for (int n = 0; n <= 8; ++n) {
            const double sigma = 3.0;
            const double expected = pochhammer(sigma + n, m) / pochhammer(sigma, m);
            CHECK(meixner_hyper(MultiIndex{m}, MultiIndex{n}, scalar_matrix(0.0), sigma).real()
                  == doctest::Approx(expected).epsilon(1e-13));
            // U = 1: only the zero matrix has nonzero weight
            CHECK(meixner_hyper(MultiIndex{m}, MultiIndex{n}, scalar_matrix(1.0), sigma) == Complex(1.0));
        }
    }
    // m = 1: 1 + n (1 - U) / sigma
    const Complex u(0.4, -1.2);
    for (int n = 0; n <= 6; ++n)
        CHECK(std::abs(meixner_hyper(MultiIndex{1}, MultiIndex{n}, scalar_matrix(u), 5.0) - (1.0 + static_cast<double>(n) * (1.0 - u) / 5.0)) < 1e-14);
}

TEST_CASE("hypergeometric sum equals the generating-function coefficient")
{
    std::mt19937_64 rng(2);
    for (std::size_t d = 1; d <= 3; ++d) {
        const ComplexMatrix U = random_U(rng, d);
        const double sigma = d + 1.5;
        for (const MultiIndex& m : indices_up_to(d, 3)) {
            for (const MultiIndex& n : indices_up_to(d, 3)) {
                const Complex h = meixner_hyper(m, n, U, sigma);
                const Complex g = meixner_genfun(m, n, U, sigma);
                CHECK(std::abs(h - g) / (1.0 + std::abs(h)) < 1e-12);
                // extra truncation degree does not change the extracted coefficient
                CHECK(std::abs(meixner_genfun(m, n, U, sigma, m.weight() + 2) - g) < 1e-12 * (1.0 + std::abs(g)));
            }
        }
    }
    CHECK_THROWS_AS(meixner_genfun(MultiIndex{2, 1}, MultiIndex{0, 0}, ComplexMatrix::Zero(2, 2), 3.0, 2),
                    std::invalid_argument);
}

TEST_CASE("duality and permutation symmetry")
{
    std::mt19937_64 rng(3);
    const std::size_t d = 3;
    const ComplexMatrix U = random_U(rng, d);
    const std::vector<int> perm{2, 0, 1};
    Eigen::PermutationMatrix<Eigen::Dynamic> P(3);
    for (int i = 0; i < 3; ++i)
        P.indices()(i) = perm[static_cast<std::size_t>(i)];
    const ComplexMatrix PU = P * U * P.transpose();
    auto permute = [&](const MultiIndex& x) {
        std::vector<int> y(3);
        for (std::size_t i = 0; i < 3; ++i)
            y[static_cast<std::size_t>(perm[i])] = x[i];
        return MultiIndex(y);
    };
    for (const MultiIndex& m : indices_up_to(d, 3)) {
        for (const MultiIndex& n : indices_up_to(d, 3)) {
            const Complex v = meixner_hyper(m, n, U, 4.0);
            CHECK(std::abs(v - meixner_hyper(n, m, U.transpose(), 4.0)) < 1e-12 * (1.0 + std::abs(v)));
            CHECK(std::abs(v - meixner_hyper(permute(m), permute(n), PU, 4.0)) < 1e-12 * (1.0 + std::abs(v)));
        }
    }
}

TEST_CASE("value is a polynomial of degree |m| in each coordinate of n")
{
    std::mt19937_64 rng(4);
    const ComplexMatrix U = random_U(rng, 2);
    const MultiIndex m{2, 1};
    for (std::size_t k = 0; k < 2; ++k) {
        // finite difference of order |m| + 1 along coordinate k
        const int order = m.weight() + 1;
        Complex diff = 0.0;
        double scale = 0.0;
        for (int j = 0; j <= order; ++j) {
            std::vector<int> n{1, 2};
            n[k] += j;
            const Complex v = meixner_hyper(m, MultiIndex(n), U, 3.0);
            const double binom = factorial(order) / (factorial(j) * factorial(order - j));
            diff += ((order - j) % 2 ? -1.0 : 1.0) * binom * v;
            scale = std::max(scale, binom * std::abs(v));
        }
        CHECK(std::abs(diff) / (1.0 + scale) < 1e-12);
    }
}

TEST_CASE("degenerate polynomial")
{
    std::mt19937_64 rng(5);
    const ComplexMatrix U = random_U(rng, 3);
    for (const MultiIndex& m : indices_up_to(3, 2)) {
        for (const MultiIndex& n : indices_up_to(3, 2)) {
            CHECK(std::abs(degenerate_meixner(m, n, U, 5.0, 3, 3) - meixner_hyper(m, n, U, 5.0)) < 1e-14);
            for (std::size_t k = 1; k <= 3; ++k) {
                for (std::size_t l = 1; l <= 3; ++l) {
                    const Complex h = degenerate_meixner(m, n, U, 5.0, k, l);
                    const Complex g = degenerate_meixner_genfun(m, n, U, 5.0, k, l);
                    CHECK(std::abs(h - g) / (1.0 + std::abs(h)) < 1e-12);
                    const Complex dual = degenerate_meixner(n, m, U.transpose(), 5.0, l, k);
                    CHECK(std::abs(h - dual) < 1e-12 * (1.0 + std::abs(h)));
                }
            }
        }
    }
    CHECK(degenerate_meixner(MultiIndex{0, 0}, MultiIndex{0, 0}, U.topLeftCorner(2, 2), 3.0, 1, 1) == Complex(1.0));
    // pinned row 2 needs sum 3 but the columns allow at most 1
    CHECK(degenerate_meixner(MultiIndex{1, 0}, MultiIndex{0, 3}, U.topLeftCorner(2, 2), 3.0, 1, 2) == Complex(0.0));
}

TEST_CASE("matrix coefficients: identity, constant term and boosts")
{
    CHECK(std::abs(a_power(Complex(0.3, 1.2), 5) - 1.0 / std::pow(Complex(0.3, 1.2), 5)) < 1e-14);

    const GroupElement g = random_element(6, 2, 0.4);
    CHECK(std::abs(matrix_coefficient(g, 4, MultiIndex{0, 0}, MultiIndex{0, 0}) - std::pow(g.a(), -4)) < 1e-14);

    // d = 1 boost: p = p~ = tanh t, U = coth^2 t
    const double t = 0.5;
    const GroupElement boost = GroupElement::from_blocks(std::cosh(t), ComplexVector::Constant(1, std::sinh(t)),
                                                         ComplexVector::Constant(1, std::sinh(t)),
                                                         ComplexMatrix::Constant(1, 1, std::cosh(t)));
    const MeixnerParams params = extract_params(boost, 2);
    CHECK(std::abs(params.p(0) - std::tanh(t)) < 1e-15);
    CHECK(std::abs(params.p_tilde(0) - std::tanh(t)) < 1e-15);
    CHECK(std::abs(params.U(0, 0) - 1.0 / std::pow(std::tanh(t), 2)) < 1e-13);
    // pi_{1,1} for the boost: 3 * (-1) cosh^-3 tanh^2 * (1 + (1 - coth^2)/3)
    const double expected = -3.0 / std::pow(std::cosh(t), 3) * std::pow(std::tanh(t), 2)
                            * (1.0 + (1.0 - 1.0 / std::pow(std::tanh(t), 2)) / 3.0);
    CHECK(std::abs(matrix_coefficient(boost, 3, MultiIndex{1}, MultiIndex{1}) - expected) < 1e-14);

    CHECK_THROWS_AS(matrix_coefficient(GroupElement(ComplexMatrix::Ones(3, 3)), 3, MultiIndex{0, 0}, MultiIndex{0, 0}),
                    InvalidGroupElement);
}
