#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mkit/core.hpp"
#include "mkit/multi_index.hpp"
#include "mkit/su1d.hpp"

namespace mkit {

/// Nonnegative integer d x d matrices with row i sum <= row_caps[i] and
/// column j sum <= col_caps[j]; pinned rows/columns must hit their cap exactly.
struct ConstrainedMatrixSet {
    std::vector<int> row_caps;
    std::vector<int> col_caps;
    std::vector<bool> row_pinned;
    std::vector<bool> col_pinned;

    /// No pins: the index set of the Gelfand-Aomoto series.
    static ConstrainedMatrixSet capped(std::vector<int> row_caps, std::vector<int> col_caps);

    /// Rows i >= k pinned to n_i, columns j >= l pinned to m_j (0-based k, l).
    static ConstrainedMatrixSet degenerate(const MultiIndex& m, const MultiIndex& n, std::size_t k, std::size_t l);

    std::size_t dim() const { return row_caps.size(); }
};

/// Visits every matrix of the set exactly once, in graded-lex order of the
/// row-major flattened entries (total sum first, then lexicographic).
void for_each_constrained_matrix(const ConstrainedMatrixSet& set, const std::function<void(const IndexMatrix&)>& visit);

std::vector<IndexMatrix> enumerate_constrained_matrices(const ConstrainedMatrixSet& set);

/// Multivariate Meixner polynomial M_m(n; U, sigma) as a finite
/// Gelfand-Aomoto hypergeometric sum:
///
///   sum_A prod_j (-m_j)_{col_j(A)} prod_i (-n_i)_{row_i(A)} / (sigma)_{|A|}
///         prod_{i,j} (1 - U_{i,j})^{a_{i,j}} / a_{i,j}!
///
/// Only matrices with row sums <= n and column sums <= m contribute.
Complex meixner_hyper(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma);

/// Same polynomial from its generating function
///
///   (1 - sum_j t_j)^{-sigma-|n|} prod_i (1 - sum_j U_{i,j} t_j)^{n_i}
///
/// expanded as a truncated series to degree `truncation` (default |m|);
/// the coefficient of t^m divided by (sigma)_{|m|}/m!.
/// Throws std::invalid_argument when truncation < |m|.
Complex meixner_genfun(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma,
                       int truncation = -1);

/// Degenerate polynomial M^_m(n; U, sigma) for the zero pattern (k, l):
/// rows past k are pinned to n_i, columns past l to m_j, and the weight is
/// (1 - U_{i,j}) on the leading k x l block and (-U_{i,j}) elsewhere.
/// k = l = d reproduces meixner_hyper. Returns 0 when a pin is unsatisfiable.
Complex degenerate_meixner(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma,
                           std::size_t k, std::size_t l);

/// Degenerate generating function
///
///   (1 - sum_{j<=l} t_j)^{-sigma-|n|} prod_{i<=k} (1 - sum_j U_{i,j} t_j)^{n_i}
///                                     prod_{i>k} (-sum_j U_{i,j} t_j)^{n_i}
///
/// coefficient of t^m over (sigma)_{|m|}/m!.
Complex degenerate_meixner_genfun(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma,
                                  std::size_t k, std::size_t l, int truncation = -1);

/// Evaluates M or M^ according to params.k, params.l.
Complex meixner_value(const MeixnerParams& params, const MultiIndex& m, const MultiIndex& n);

/// sqrt((sigma)_{|m|} (sigma)_{|n|} / (m! n!))
double basis_normalization(int sigma, const MultiIndex& m, const MultiIndex& n);

/// a^{-sigma} on the principal branch; checked against repeated multiplication.
Complex a_power(Complex a, int sigma);

/// pi^sigma_{m,n}(g) = sqrt(...) (-1)^{|m|} a^{-sigma} p~^m p^n M_m(n), with
/// M replaced by M^ and p, p~ padded when b or c has zero entries.
/// Throws InvalidGroupElement for invalid g.
Complex matrix_coefficient(const GroupElement& g, int sigma, const MultiIndex& m, const MultiIndex& n);
Complex matrix_coefficient(const MeixnerParams& params, const MultiIndex& m, const MultiIndex& n);

/// x^m = prod_i x_i^{m_i}
Complex monomial(const ComplexVector& x, const MultiIndex& m);

} // namespace mkit
