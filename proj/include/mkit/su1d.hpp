#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mkit/core.hpp"

namespace mkit {

inline constexpr double kDefaultGroupTolerance = 1e-10;

/// An element of SU(1,d) in block form g = [[a, b^t], [c, D]].
///
/// The constructor only checks shape; membership is checked by validate().
class GroupElement {
public:
    explicit GroupElement(ComplexMatrix matrix);

    static GroupElement identity(std::size_t d);
    static GroupElement from_blocks(Complex a, const ComplexVector& b, const ComplexVector& c, const ComplexMatrix& D);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()) - 1; }
    const ComplexMatrix& matrix() const { return matrix_; }

    Complex a() const { return matrix_(0, 0); }
    ComplexVector b() const { return matrix_.row(0).tail(matrix_.cols() - 1).transpose(); }
    ComplexVector c() const { return matrix_.col(0).tail(matrix_.rows() - 1); }
    ComplexMatrix D() const { return matrix_.bottomRightCorner(matrix_.rows() - 1, matrix_.cols() - 1); }

private:
    ComplexMatrix matrix_;
};

GroupElement operator*(const GroupElement& g1, const GroupElement& g2);

/// J = diag(1, -1, ..., -1) of size d+1.
ComplexMatrix indefinite_form(std::size_t d);

/// Residuals of the defining relation and of the identities it implies.
struct ValidationReport {
    double defining_relation = 0;  ///< max |g^dagger J g - J|
    double determinant = 0;        ///< |det g - 1|
    double norm_b = 0;             ///< ||a|^2 - ||b||^2 - 1|
    double norm_c = 0;             ///< ||a|^2 - ||c||^2 - 1|
    double d_dagger_d = 0;         ///< max |D^dagger D - I - conj(b) b^t|
    double d_d_dagger = 0;         ///< max |D D^dagger - I - c c^dagger|
    double cross_b = 0;            ///< max |conj(a) b^t - c^dagger D|
    double cross_c = 0;            ///< max |a c^dagger - b^t D^dagger|
    double tolerance = kDefaultGroupTolerance;
    bool finite = true;

    double max_residual() const;
    bool passed() const { return finite && max_residual() < tolerance; }
    std::string describe() const;
};

ValidationReport validate(const GroupElement& g, double tol = kDefaultGroupTolerance);

/// Throws InvalidGroupElement with the report text unless validate(g, tol) passes.
void require_valid(const GroupElement& g, double tol = kDefaultGroupTolerance);

/// g^{-1} = J g^dagger J = [[conj(a), -c^dagger], [-conj(b), D^dagger]]. Throws on invalid g.
GroupElement inverse(const GroupElement& g);

/// X with trace 0 and X^dagger J = -J X, entries of order `scale`.
ComplexMatrix random_algebra_element(std::mt19937_64& rng, std::size_t d, double scale);

/// exp(X) for a seeded random algebra element, resampled until |a|, |b_i|, |c_i| > 1e-3.
///
/// Deterministic in (seed, d, scale). Throws std::domain_error when no
/// generic element is found, which is always the case for scale = 0.
GroupElement random_element(std::uint64_t seed, std::size_t d, double scale, int max_attempts = 64);

/// Entry x counts as zero when |x| < 1e-9 (1 + |a|).
bool is_negligible(Complex x, Complex a);

/// Number of leading nonzero entries, or throws std::invalid_argument if
/// the zeros of v do not form a contiguous tail.
std::size_t nonzero_prefix_length(const ComplexVector& v, Complex a);

/// Stable permutation moving the negligible entries of v to the tail:
/// result[new_position] = old_position.
std::vector<std::size_t> zero_tail_permutation(const ComplexVector& v, Complex a);

/// Q g Q^t with Q = diag(1, P), P the permutation matrix sending coordinate
/// perm[i] to i. Relabels m and n simultaneously: pi_{m,n}(g) = pi_{Pm,Pn}(QgQ^t).
GroupElement permute_coordinates(const GroupElement& g, std::span<const std::size_t> perm);

/// Multiplies g by block-diagonal SU(d) rotations so that b_{k+1..d} = 0 and
/// c_{l+1..d} = 0 while b_k and c_l absorb the norm of the removed tails.
GroupElement rotate_to_zero_tails(const GroupElement& g, std::size_t k, std::size_t l);

/// Meixner parameterization of a group element: p_i = b_i/a, p~_j = c_j/a,
/// U per the generic or four-case degenerate definition. Entries of p past
/// k (and of p~ past l) are padded with 1/a so that D_{j,i} = a p_i p~_j U_{i,j}.
struct MeixnerParams {
    int sigma = 0;
    Complex a = 1.0;
    ComplexMatrix U;
    ComplexVector p;
    ComplexVector p_tilde;
    std::size_t k = 0;
    std::size_t l = 0;
    double p0_sq = 1.0;
    bool extrapolated = false; ///< k == 0 or l == 0: outside the range the identities are stated for

    std::size_t dim() const { return static_cast<std::size_t>(U.rows()); }
    bool generic() const { return k == dim() && l == dim(); }
};

MeixnerParams extract_params(const GroupElement& g, int sigma);

/// max |U_hat^dagger C U_hat C~ - |p_0|^2 I| for the parameter set.
double params_invariant_residual(const MeixnerParams& params);

/// g = a P~ U_hat^t P. Throws std::invalid_argument if the parameter
/// invariant (or |a|^2 |p_0|^2 = 1) is violated beyond tol.
GroupElement from_params(const MeixnerParams& params, double tol = kDefaultGroupTolerance);

} // namespace mkit
