#include <doctest.h>

#include <random>

#include "mkit/su1d.hpp"

using namespace mkit;

TEST_CASE("identity and random elements are valid")
{
    for (std::size_t d = 1; d <= 4; ++d) {
        CHECK(validate(GroupElement::identity(d)).passed());
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const GroupElement g = random_element(seed, d, 0.4);
            const ValidationReport r = validate(g);
            CHECK_MESSAGE(r.passed(), r.describe());
            CHECK(std::abs(g.matrix().determinant() - 1.0) < 1e-12);
            for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
                CHECK(std::abs(g.b()(i)) > 1e-3);
                CHECK(std::abs(g.c()(i)) > 1e-3);
            }
        }
    }
}

TEST_CASE("random elements are deterministic in the seed")
{
    const GroupElement g1 = random_element(42, 3, 0.3);
    const GroupElement g2 = random_element(42, 3, 0.3);
    CHECK(max_abs(g1.matrix() - g2.matrix()) == 0.0);
    CHECK(max_abs(g1.matrix() - random_element(43, 3, 0.3).matrix()) > 0.0);
    CHECK_THROWS_AS(random_element(1, 2, 0.0), std::domain_error);
}

TEST_CASE("validation rejects non-members")
{
    ComplexMatrix M = random_element(3, 2, 0.3).matrix();
    M(1, 2) += 1e-6;
    const GroupElement bad(M);
    CHECK_FALSE(validate(bad).passed());
    CHECK_THROWS_AS(require_valid(bad), InvalidGroupElement);
    CHECK_THROWS_AS(inverse(bad), InvalidGroupElement);

    ComplexMatrix U = ComplexMatrix::Identity(3, 3);
    U(0, 0) = Complex(0.0, 1.0); // det = i
    CHECK_FALSE(validate(GroupElement(U)).passed());

    ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
    nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(validate(GroupElement(nan)).passed());
}

TEST_CASE("implied block identities hold for valid elements")
{
    const GroupElement g = random_element(7, 3, 0.5);
    const ValidationReport r = validate(g);
    CHECK(r.norm_b < 1e-12);
    CHECK(r.norm_c < 1e-12);
    CHECK(r.d_dagger_d < 1e-12);
    CHECK(r.d_d_dagger < 1e-12);
    CHECK(r.cross_b < 1e-12);
    CHECK(r.cross_c < 1e-12);
}

TEST_CASE("inverse by block rearrangement")
{
    for (std::size_t d = 1; d <= 3; ++d) {
        const GroupElement g = random_element(9 + d, d, 0.4);
        const ComplexMatrix prod = (g * inverse(g)).matrix();
        CHECK(max_abs(prod - ComplexMatrix::Identity(d + 1, d + 1)) < 1e-13);
        CHECK(max_abs(inverse(g).matrix() - g.matrix().inverse()) < 1e-12);
    }
}

TEST_CASE("zero patterns and permutations")
{
    ComplexVector v(4);
    v << 1.0, 0.0, 2.0, 0.0;
    CHECK_THROWS_AS(nonzero_prefix_length(v, 1.0), std::invalid_argument);
    const auto perm = zero_tail_permutation(v, 1.0);
    CHECK(perm == std::vector<std::size_t>{0, 2, 1, 3});
    ComplexVector w(3);
    w << 1.0, 1e-12, 0.0;
    CHECK(nonzero_prefix_length(w, 1.0) == 1);

    const GroupElement g = random_element(5, 3, 0.4);
    const std::vector<std::size_t> p{2, 0, 1};
    const GroupElement h = permute_coordinates(g, p);
    CHECK(validate(h).passed());
    CHECK(h.b()(0) == g.b()(2));
    CHECK(h.c()(1) == g.c()(0));
    CHECK(h.D()(0, 1) == g.D()(2, 0));
}

TEST_CASE("rotation to zero tails keeps membership and zeros the requested entries")
{
    const GroupElement g = random_element(17, 3, 0.4);
    for (std::size_t k = 1; k <= 3; ++k) {
        for (std::size_t l = 1; l <= 3; ++l) {
            const GroupElement h = rotate_to_zero_tails(g, k, l);
            CHECK_MESSAGE(validate(h).passed(), validate(h).describe());
            CHECK(std::abs(h.a() - g.a()) < 1e-12);
            CHECK(nonzero_prefix_length(h.b(), h.a()) == k);
            CHECK(nonzero_prefix_length(h.c(), h.a()) == l);
            CHECK(std::abs(h.b().norm() - g.b().norm()) < 1e-12);
        }
    }
}

TEST_CASE("Meixner parameters satisfy the invariant and rebuild the element")
{
    for (std::size_t d = 1; d <= 3; ++d) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const GroupElement g = random_element(seed, d, 0.4);
            const MeixnerParams params = extract_params(g, static_cast<int>(d) + 2);
            CHECK(params.generic());
            CHECK(params_invariant_residual(params) < 1e-12);
            CHECK(params.p0_sq == doctest::Approx(1.0 - params.p.squaredNorm()).epsilon(1e-12));
            CHECK(max_abs(from_params(params).matrix() - g.matrix()) < 1e-12);
        }
    }
    const GroupElement g = rotate_to_zero_tails(random_element(4, 3, 0.4), 2, 1);
    const MeixnerParams params = extract_params(g, 5);
    CHECK(params.k == 2);
    CHECK(params.l == 1);
    CHECK_FALSE(params.generic());
    CHECK(params_invariant_residual(params) < 1e-12);
    CHECK(max_abs(from_params(params).matrix() - g.matrix()) < 1e-12);
    CHECK(std::abs(params.p(2) - 1.0 / g.a()) < 1e-15);

    MeixnerParams broken = params;
    broken.U(0, 0) += 0.1;
    CHECK_THROWS_AS(from_params(broken), std::invalid_argument);
}

TEST_CASE("identity element has the extrapolated zero pattern")
{
    const MeixnerParams params = extract_params(GroupElement::identity(2), 3);
    CHECK(params.k == 0);
    CHECK(params.l == 0);
    CHECK(params.extrapolated);
}
