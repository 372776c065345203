#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mkit/core.hpp"
#include "mkit/multi_index.hpp"
#include "mkit/su1d.hpp"

namespace mkit {

/// Truncated matrix of pi^sigma(g) in the orthonormal monomial basis
/// e_m = sqrt((sigma)_{|m|}/m!) z^m, rows and columns |m|, |n| <= N.
///
/// Column n holds the exact Taylor coefficients of pi^sigma(g) e_n up to
/// degree N, so every stored entry equals the true matrix coefficient; only
/// sums over rows or columns are affected by truncation.
class OperatorMatrix {
public:
    OperatorMatrix(std::size_t dim, int sigma, int max_degree);

    std::size_t dim() const { return dim_; }
    int sigma() const { return sigma_; }
    int max_degree() const { return max_degree_; }
    const std::vector<MultiIndex>& basis() const { return basis_; }
    std::size_t rank(const MultiIndex& m) const;
    bool contains(const MultiIndex& m) const { return m.weight() <= max_degree_; }

    Complex entry(const MultiIndex& m, const MultiIndex& n) const;
    const ComplexMatrix& values() const { return values_; }
    ComplexMatrix& values() { return values_; }

private:
    std::size_t dim_;
    int sigma_;
    int max_degree_;
    std::vector<MultiIndex> basis_;
    std::map<MultiIndex, std::size_t> rank_;
    ComplexMatrix values_;
};

/// Expands (a + c^t z)^{-sigma-|n|} prod_i (b_i + (D^t z)_i)^{n_i} as a
/// truncated series for every |n| <= N and rescales to the orthonormal basis.
OperatorMatrix operator_matrix(const GroupElement& g, int sigma, int N);

/// Basis element of the complexified Lie algebra: H_i (1 <= i <= d) or
/// E_{i,j} (0 <= i != j <= d).
struct LieBasisElement {
    enum class Kind { H, E };
    Kind kind = Kind::H;
    std::size_t i = 1;
    std::size_t j = 1;

    static LieBasisElement h(std::size_t i) { return {Kind::H, i, i}; }
    static LieBasisElement e(std::size_t i, std::size_t j) { return {Kind::E, i, j}; }

    ComplexMatrix matrix(std::size_t d) const;
    std::string name() const;

    friend bool operator==(const LieBasisElement&, const LieBasisElement&) = default;
};

/// H_1..H_d followed by E_{i,j} for i != j in row-major order; size (d+1)^2 - 1.
std::vector<LieBasisElement> lie_basis(std::size_t d);

/// X* = J X^dagger J
ComplexMatrix star(const ComplexMatrix& X);

/// (coefficient, element) with X* = coefficient * element for a basis element.
std::pair<double, LieBasisElement> star(const LieBasisElement& X);

/// Coordinates of a traceless X in lie_basis(d) order. Throws on nonzero trace.
ComplexVector lie_coordinates(const ComplexMatrix& X);

/// Inverse of lie_coordinates.
ComplexMatrix from_lie_coordinates(const ComplexVector& coords, std::size_t d);

/// pi^sigma(X) e_n for a basis element, terms with a negative index dropped.
std::vector<std::pair<MultiIndex, Complex>> lie_action(const LieBasisElement& X, const MultiIndex& n, int sigma);

/// pi^sigma(X) on the basis |n| <= N; images leaving the truncated basis are dropped.
ComplexMatrix lie_action_matrix(const LieBasisElement& X, std::size_t d, int sigma, int N);
/// Same for a traceless matrix X, by linearity over lie_coordinates(X).
ComplexMatrix lie_action_matrix(const ComplexMatrix& X, int sigma, int N);

struct ConjugatedGenerator {
    ComplexMatrix matrix;      ///< g X g^{-1}
    ComplexVector coordinates; ///< in lie_basis order
};

ConjugatedGenerator conjugate_generator(const GroupElement& g, const LieBasisElement& X);

/// Closed-form coordinates of g X g^{-1} in terms of a, b, c, D, using the
/// conventions D_{i,0} = c_i and b_0 = a. For X = E_{k,0} the expansion
/// carries an extra overall minus sign coming from J_{00} = +1.
ComplexVector conjugated_generator_closed_form(const GroupElement& g, const LieBasisElement& X);

struct MonteCarloEstimate {
    Complex value;
    double standard_error = 0;
    std::size_t samples = 0;
};

/// <pi^sigma(g) e_n, e_m> estimated by sampling z uniformly in the unit ball
/// of C^d (normalized volume) and weighting by c_alpha (1-|z|^2)^alpha,
/// alpha = sigma - d - 1, c_alpha = (alpha+1)_d / d!.
MonteCarloEstimate integral_matrix_coefficient(const GroupElement& g, int sigma, const MultiIndex& m,
                                               const MultiIndex& n, std::size_t samples, std::uint64_t seed);

/// Several (m, n) pairs estimated from one shared sample stream.
std::vector<MonteCarloEstimate> integral_matrix_coefficients(const GroupElement& g, int sigma,
                                                             const std::vector<std::pair<MultiIndex, MultiIndex>>& pairs,
                                                             std::size_t samples, std::uint64_t seed);

} // namespace mkit
