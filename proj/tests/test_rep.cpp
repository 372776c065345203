#include <doctest.h>

#include <random>

#include "mkit/matrix_exp.hpp"
#include "mkit/meixner.hpp"
#include "mkit/rep.hpp"

using namespace mkit;

namespace {

/// Leading block over |m|, |n| <= N of an operator on a larger basis.
ComplexMatrix leading_block(const ComplexMatrix& A, std::size_t d, int N)
{
    const auto size = static_cast<Eigen::Index>(indices_up_to(d, N).size());
    return A.topLeftCorner(size, size);
}

} // namespace

TEST_CASE("operator matrix at the identity and its constant entry")
{
    const OperatorMatrix id = operator_matrix(GroupElement::identity(2), 4, 5);
    CHECK(max_abs(id.values() - ComplexMatrix::Identity(id.values().rows(), id.values().cols())) < 1e-15);

    const GroupElement g = random_element(3, 2, 0.4);
    const OperatorMatrix op = operator_matrix(g, 4, 3);
    CHECK(std::abs(op.entry(MultiIndex{0, 0}, MultiIndex{0, 0}) - std::pow(g.a(), -4)) < 1e-14);
    CHECK(op.rank(MultiIndex{0, 1}) == 1);
    CHECK_THROWS(op.rank(MultiIndex{4, 0}));
}

TEST_CASE("operator matrix entries agree with the closed-form coefficients")
{
    for (std::size_t d = 1; d <= 3; ++d) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const int sigma = static_cast<int>(d) + 1 + static_cast<int>(seed);
            std::vector<GroupElement> elements{random_element(seed, d, 0.4)};
            if (d >= 2)
                elements.push_back(rotate_to_zero_tails(elements.front(), 1, d - 1));
            for (const GroupElement& g : elements) {
                const OperatorMatrix op = operator_matrix(g, sigma, 4);
                for (const MultiIndex& m : op.basis()) {
                    for (const MultiIndex& n : op.basis()) {
                        const Complex expected = matrix_coefficient(g, sigma, m, n);
                        CHECK(std::abs(op.entry(m, n) - expected) / (1.0 + std::abs(expected)) < 1e-11);
                    }
                }
            }
        }
    }
}

TEST_CASE("truncated homomorphism defect shrinks with the truncation")
{
    const GroupElement g1 = random_element(11, 2, 0.25);
    const GroupElement g2 = random_element(12, 2, 0.25);
    const int sigma = 4;
    const int block = 2;
    const ComplexMatrix exact = leading_block(operator_matrix(g1 * g2, sigma, block).values(), 2, block);
    double previous = std::numeric_limits<double>::infinity();
    for (int N : {4, 8, 12, 16}) {
        const ComplexMatrix prod = operator_matrix(g1, sigma, N).values() * operator_matrix(g2, sigma, N).values();
        const double defect = max_abs(leading_block(prod, 2, block) - exact);
        CHECK(defect < previous);
        previous = defect;
    }
    CHECK(previous < 1e-6);
}

TEST_CASE("Lie algebra action: explicit values")
{
    auto only = [](const std::vector<std::pair<MultiIndex, Complex>>& terms) {
        REQUIRE(terms.size() == 1);
        return terms.front();
    };
    const auto h = only(lie_action(LieBasisElement::h(1), MultiIndex{2, 0}, 4));
    CHECK(h.first == MultiIndex{2, 0});
    CHECK(h.second.real() == doctest::Approx(4.0 / 3.0 + 2.0).epsilon(1e-15));
    CHECK(lie_action(LieBasisElement::e(0, 1), MultiIndex{0, 5}, 4).empty());
    const auto raise = only(lie_action(LieBasisElement::e(1, 0), MultiIndex{0, 0}, 4));
    CHECK(raise.first == MultiIndex{1, 0});
    CHECK(raise.second.real() == doctest::Approx(-2.0).epsilon(1e-15));
    const auto transfer = only(lie_action(LieBasisElement::e(2, 1), MultiIndex{3, 1}, 4));
    CHECK(transfer.first == MultiIndex{2, 2});
    CHECK(transfer.second.real() == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
    CHECK_THROWS_AS(lie_action(LieBasisElement::e(1, 1), MultiIndex{0, 0}, 4), std::invalid_argument);
    CHECK(lie_basis(3).size() == 15);
    CHECK(LieBasisElement::e(0, 2).name() == "E_0,2");
}

TEST_CASE("Lie coordinates round trip and reject trace")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix X(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            X(i, j) = Complex(g(rng), g(rng));
    X -= X.trace() / 3.0 * ComplexMatrix::Identity(3, 3);
    CHECK(max_abs(from_lie_coordinates(lie_coordinates(X), 2) - X) < 1e-14);
    CHECK_THROWS_AS(lie_coordinates(ComplexMatrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("action is the derivative of the group representation")
{
    std::mt19937_64 rng(5);
    const int N = 4;
    for (std::size_t d = 1; d <= 2; ++d) {
        const int sigma = static_cast<int>(d) + 2;
        const ComplexMatrix X = random_algebra_element(rng, d, 1.0);
        const double h = 1e-4;
        const ComplexMatrix plus = operator_matrix(GroupElement(matrix_exp(ComplexMatrix(h * X))), sigma, N).values();
        const ComplexMatrix minus = operator_matrix(GroupElement(matrix_exp(ComplexMatrix(-h * X))), sigma, N).values();
        const ComplexMatrix derivative = (plus - minus) / (2.0 * h);
        const ComplexMatrix action = lie_action_matrix(X, sigma, N);
        CHECK(max_abs(derivative - action) < 1e-6 * (1.0 + max_abs(action)));
    }
}

TEST_CASE("bracket closure and star compatibility away from the truncation edge")
{
    const std::size_t d = 2;
    const int sigma = 4;
    const int N = 5;
    const auto basis = lie_basis(d);
    for (const LieBasisElement& X : basis) {
        const ComplexMatrix AX = lie_action_matrix(X, d, sigma, N);
        const auto [coeff, Xs] = star(X);
        CHECK(max_abs(star(X.matrix(d)) - coeff * Xs.matrix(d)) == 0.0);
        const ComplexMatrix AXs = coeff * lie_action_matrix(Xs, d, sigma, N);
        CHECK(max_abs(leading_block(AXs, d, N - 1) - leading_block(AX.adjoint(), d, N - 1)) < 1e-13);
        for (const LieBasisElement& Y : basis) {
            const ComplexMatrix AY = lie_action_matrix(Y, d, sigma, N);
            const ComplexMatrix bracket = X.matrix(d) * Y.matrix(d) - Y.matrix(d) * X.matrix(d);
            const ComplexMatrix lhs = AX * AY - AY * AX;
            const ComplexMatrix rhs = lie_action_matrix(bracket, sigma, N);
            CHECK_MESSAGE(max_abs(leading_block(lhs - rhs, d, N - 1)) < 1e-12, X.name() << " " << Y.name());
        }
    }
}

TEST_CASE("conjugated generators: numeric against closed form")
{
    for (const LieBasisElement& X : lie_basis(2)) {
        const ComplexVector at_identity = conjugate_generator(GroupElement::identity(2), X).coordinates;
        const auto basis = lie_basis(2);
        const auto pos = std::find(basis.begin(), basis.end(), X) - basis.begin();
        CHECK(std::abs(at_identity(pos) - 1.0) < 1e-15);
        CHECK(at_identity.norm() == doctest::Approx(1.0).epsilon(1e-15));
    }
    for (std::size_t d = 1; d <= 3; ++d) {
        const GroupElement g = random_element(20 + d, d, 0.5);
        for (const LieBasisElement& X : lie_basis(d)) {
            const ComplexVector numeric = conjugate_generator(g, X).coordinates;
            const ComplexVector closed = conjugated_generator_closed_form(g, X);
            CHECK_MESSAGE((numeric - closed).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + numeric.cwiseAbs().maxCoeff()),
                          X.name());
        }
    }
}

TEST_CASE("Monte Carlo inner products at the identity")
{
    const GroupElement id = GroupElement::identity(2);
    const auto one = integral_matrix_coefficient(id, 4, MultiIndex{0, 0}, MultiIndex{0, 0}, 100000, 7);
    CHECK(std::abs(one.value - 1.0) < 4.0 * one.standard_error + 1e-12);
    const auto norm = integral_matrix_coefficient(id, 4, MultiIndex{1, 1}, MultiIndex{1, 1}, 100000, 7);
    CHECK(std::abs(norm.value - 1.0) < 4.0 * norm.standard_error);
    const auto off = integral_matrix_coefficient(id, 4, MultiIndex{1, 0}, MultiIndex{0, 1}, 100000, 7);
    CHECK(std::abs(off.value) < 4.0 * off.standard_error);
    const auto again = integral_matrix_coefficient(id, 4, MultiIndex{1, 0}, MultiIndex{0, 1}, 100000, 7);
    CHECK(again.value == off.value);
}
