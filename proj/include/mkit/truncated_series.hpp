#pragma once

#include <cstddef>
#include <map>

#include "mkit/core.hpp"
#include "mkit/multi_index.hpp"

namespace mkit {

/// Multivariate complex power series truncated at total degree N.
///
/// Coefficients are stored sparsely, keyed by MultiIndex in graded-lex
/// order; exact zeros are not stored and nothing of weight > N is ever kept.
class TruncatedSeries {
public:
    using Terms = std::map<MultiIndex, Complex>;

    TruncatedSeries(std::size_t dim, int max_degree);

    static TruncatedSeries constant(std::size_t dim, int max_degree, Complex value);
    /// c0 + sum_j coeffs_j z_j
    static TruncatedSeries linear(std::size_t dim, int max_degree, Complex c0, const ComplexVector& coeffs);

    std::size_t dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    const Terms& terms() const { return terms_; }

    Complex coefficient(const MultiIndex& m) const;
    /// Sets a coefficient; ignored when weight(m) > N.
    void set(const MultiIndex& m, Complex value);
    void add_to(const MultiIndex& m, Complex value);

    TruncatedSeries& operator+=(const TruncatedSeries& other);
    TruncatedSeries& operator-=(const TruncatedSeries& other);
    TruncatedSeries& operator*=(Complex scale);

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, Complex s) { return a *= s; }
    friend TruncatedSeries operator*(Complex s, TruncatedSeries a) { return a *= s; }

private:
    void require_compatible(const TruncatedSeries& other) const;

    std::size_t dim_;
    int max_degree_;
    Terms terms_;
};

/// Truncated product; throws std::invalid_argument on dim/degree mismatch.
TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g);

/// f^s for f with constant term 1, via the binomial series.
///
/// Nonnegative integer exponents use repeated series_mul. Other exponents
/// use the Euler-operator recurrence f E(h) = s h E(f), E = sum z_i d/dz_i,
/// which costs O(#monomials * #terms(f)).
TruncatedSeries series_power(const TruncatedSeries& f, Complex s);

/// f / g for g with nonzero constant term.
TruncatedSeries series_divide(const TruncatedSeries& f, const TruncatedSeries& g);

/// Largest coefficient difference over the union of supports.
double max_abs_difference(const TruncatedSeries& f, const TruncatedSeries& g);

} // namespace mkit
