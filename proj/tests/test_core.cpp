#include <doctest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "mkit/core.hpp"
#include "mkit/matrix_exp.hpp"
#include "mkit/multi_index.hpp"
#include "mkit/truncated_series.hpp"

using namespace mkit;

TEST_CASE("pochhammer values and recurrence")
{
    CHECK(pochhammer(3.0, 0) == 1.0);
    CHECK(pochhammer(3.0, 4) == 3.0 * 4 * 5 * 6);
    CHECK(pochhammer(-2.0, 3) == 0.0);
    CHECK(pochhammer(-2.0, 2) == 2.0);
    CHECK_THROWS_AS(pochhammer(1.0, -1), std::invalid_argument);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> x(-3.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = x(rng);
        for (int k = 0; k < 6; ++k)
            CHECK(pochhammer(a, k + 1) == doctest::Approx(pochhammer(a, k) * (a + k)).epsilon(1e-14));
    }
    const Complex z(0.5, -1.5);
    CHECK(std::abs(pochhammer(z, 3) - z * (z + 1.0) * (z + 2.0)) < 1e-14);
}

TEST_CASE("int_power and compensated sum")
{
    CHECK(int_power(0.0, 0) == 1.0);
    CHECK(int_power(2.0, -3) == 0.125);
    CompensatedSum<double> s;
    s.add(1e16);
    for (int i = 0; i < 100; ++i)
        s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 100.0);
    CompensatedSum<Complex> c;
    c += Complex(1e16, -1e16);
    c += Complex(3.0, 4.0);
    c += Complex(-1e16, 1e16);
    CHECK(c.value() == Complex(3.0, 4.0));
}

TEST_CASE("multi-index graded-lex order and enumeration")
{
    const std::vector<MultiIndex> expected{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
    CHECK(indices_up_to(2, 2) == expected);
    CHECK(indices_of_weight(3, 2).size() == 6);
    CHECK(indices_up_to(3, 4).size() == 35);
    CHECK(indices_in_box(MultiIndex{1, 2}).size() == 6);
    const auto box = indices_in_box(MultiIndex{2, 1});
    CHECK(std::is_sorted(box.begin(), box.end()));

    const MultiIndex m{2, 0, 1};
    CHECK(m.weight() == 3);
    CHECK(m.factorial() == 2.0);
    CHECK(!m.shifted(1, -1).has_value());
    CHECK(*m.shifted(1, 1) == MultiIndex{2, 1, 1});
    CHECK(MultiIndex{1, 0, 1}.dominated_by(m));
    CHECK(m - MultiIndex{1, 0, 1} == MultiIndex{1, 0, 0});
    CHECK(to_string(m) == "2,0,1");
    CHECK(parse_multi_index("2,0,1") == m);
    CHECK_THROWS_AS(parse_multi_index("1,-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_multi_index("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_multi_index("x"), std::invalid_argument);
}

namespace {

TruncatedSeries random_series(std::mt19937_64& rng, std::size_t d, int N, Complex c0)
{
    std::normal_distribution<double> g(0.0, 0.5);
    TruncatedSeries f(d, N);
    for (const MultiIndex& m : indices_up_to(d, N))
        f.set(m, Complex(g(rng), g(rng)));
    f.set(MultiIndex(d), c0);
    return f;
}

} // namespace

TEST_CASE("series product is commutative and associative")
{
    std::mt19937_64 rng(11);
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto f = random_series(rng, d, 5, 1.0);
        const auto g = random_series(rng, d, 5, 0.3);
        const auto h = random_series(rng, d, 5, -2.0);
        CHECK(max_abs_difference(series_mul(f, g), series_mul(g, f)) < 1e-13);
        CHECK(max_abs_difference(series_mul(series_mul(f, g), h), series_mul(f, series_mul(g, h))) < 1e-12);
    }
}

TEST_CASE("series power matches repeated products and is additive in the exponent")
{
    std::mt19937_64 rng(12);
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto f = random_series(rng, d, 6, 1.0);
        // the Euler recurrence path at a non-integer exponent, squared, against the integer path
        const auto half = series_power(f, 0.5);
        CHECK(max_abs_difference(series_mul(half, half), f) < 1e-10);
        const auto a = series_power(f, Complex(-1.3, 0.4));
        const auto b = series_power(f, Complex(2.1, -0.4));
        CHECK(max_abs_difference(series_mul(a, b), series_power(f, 0.8)) < 1e-9);
        CHECK(max_abs_difference(series_power(f, 3.0), series_mul(f, series_mul(f, f))) < 1e-12);
        const auto inv = series_power(f, -1.0);
        CHECK(max_abs_difference(series_mul(inv, f), TruncatedSeries::constant(d, 6, 1.0)) < 1e-11);
    }
    TruncatedSeries bad = TruncatedSeries::constant(2, 3, 2.0);
    CHECK_THROWS_AS(series_power(bad, 0.5), std::invalid_argument);
}

TEST_CASE("one-variable binomial series coefficients")
{
    ComplexVector c(1);
    c(0) = -1.0;
    const auto f = TruncatedSeries::linear(1, 8, 1.0, c); // 1 - t
    const auto h = series_power(f, -3.0);                 // sum (3)_k / k! t^k
    for (int k = 0; k <= 8; ++k)
        CHECK(std::abs(h.coefficient(MultiIndex{k}) - pochhammer(3.0, k) / factorial(k)) < 1e-12 * (1 + pochhammer(3.0, k)));
}

TEST_CASE("series division inverts multiplication")
{
    std::mt19937_64 rng(13);
    const auto f = random_series(rng, 2, 6, 0.7);
    const auto g = random_series(rng, 2, 6, Complex(1.5, 0.5));
    CHECK(max_abs_difference(series_divide(series_mul(f, g), g), f) < 1e-11);
    CHECK_THROWS(series_divide(f, TruncatedSeries(2, 6)));
    CHECK_THROWS_AS(series_mul(f, TruncatedSeries(3, 6)), std::invalid_argument);
}

TEST_CASE("matrix_exp agrees with Eigen's matrix exponential")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int n = 1; n <= 5; ++n) {
        for (double scale : {0.01, 1.0, 8.0}) {
            ComplexMatrix X(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    X(i, j) = scale * Complex(g(rng), g(rng));
            const ComplexMatrix ours = matrix_exp(X);
            const ComplexMatrix ref = X.exp();
            CHECK(max_abs(ours - ref) <= 1e-12 * (1.0 + max_abs(ref)));
        }
    }
    CHECK(max_abs(matrix_exp(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)) == 0.0);
    Eigen::Matrix2d r;
    r << 0.0, -1.0, 1.0, 0.0;
    const Eigen::Matrix2d rot = matrix_exp(r);
    CHECK(rot(0, 0) == doctest::Approx(std::cos(1.0)).epsilon(1e-15));
    CHECK(rot(1, 0) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
}
