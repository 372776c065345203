#include "mkit/meixner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mkit/truncated_series.hpp"

namespace mkit {

ConstrainedMatrixSet ConstrainedMatrixSet::capped(std::vector<int> row_caps, std::vector<int> col_caps)
{
    if (row_caps.size() != col_caps.size())
        throw std::invalid_argument("ConstrainedMatrixSet: row/column cap count mismatch");
    const std::size_t d = row_caps.size();
    return {std::move(row_caps), std::move(col_caps), std::vector<bool>(d, false), std::vector<bool>(d, false)};
}

ConstrainedMatrixSet ConstrainedMatrixSet::degenerate(const MultiIndex& m, const MultiIndex& n, std::size_t k,
                                                      std::size_t l)
{
    const std::size_t d = m.dim();
    if (n.dim() != d || k > d || l > d)
        throw std::invalid_argument("ConstrainedMatrixSet::degenerate: bad dimensions");
    ConstrainedMatrixSet set = capped(n.entries(), m.entries());
    for (std::size_t i = k; i < d; ++i)
        set.row_pinned[i] = true;
    for (std::size_t j = l; j < d; ++j)
        set.col_pinned[j] = true;
    return set;
}

namespace {

struct Enumerator {
    const ConstrainedMatrixSet& set;
    const std::function<void(const IndexMatrix&)>& visit;
    Eigen::Index d;
    IndexMatrix A;
    std::vector<int> row_sum, col_sum;

    void cell(Eigen::Index i, Eigen::Index j, int remaining)
    {
        if (j == d) {
            if (set.row_pinned[i] && row_sum[i] != set.row_caps[i])
                return;
            if (i + 1 == d) {
                if (remaining != 0)
                    return;
                for (Eigen::Index c = 0; c < d; ++c) {
                    if (set.col_pinned[c] && col_sum[c] != set.col_caps[c])
                        return;
                }
                visit(A);
                return;
            }
            cell(i + 1, 0, remaining);
            return;
        }
        const int top = std::min({remaining, set.row_caps[i] - row_sum[i], set.col_caps[j] - col_sum[j]});
        for (int v = 0; v <= top; ++v) {
            A(i, j) = v;
            row_sum[i] += v;
            col_sum[j] += v;
            cell(i, j + 1, remaining - v);
            row_sum[i] -= v;
            col_sum[j] -= v;
        }
        A(i, j) = 0;
    }
};

} // namespace

void for_each_constrained_matrix(const ConstrainedMatrixSet& set, const std::function<void(const IndexMatrix&)>& visit)
{
    const std::size_t d = set.dim();
    if (set.col_caps.size() != d || set.row_pinned.size() != d || set.col_pinned.size() != d)
        throw std::invalid_argument("ConstrainedMatrixSet: inconsistent sizes");
    for (std::size_t i = 0; i < d; ++i) {
        if (set.row_caps[i] < 0 || set.col_caps[i] < 0)
            return; // empty set
    }
    if (d == 0) {
        visit(IndexMatrix(0, 0));
        return;
    }
    const int max_total = std::min(std::accumulate(set.row_caps.begin(), set.row_caps.end(), 0),
                                   std::accumulate(set.col_caps.begin(), set.col_caps.end(), 0));
    const auto n = static_cast<Eigen::Index>(d);
    Enumerator e{set, visit, n, IndexMatrix::Zero(n, n), std::vector<int>(d, 0), std::vector<int>(d, 0)};
    for (int total = 0; total <= max_total; ++total)
        e.cell(0, 0, total);
}

std::vector<IndexMatrix> enumerate_constrained_matrices(const ConstrainedMatrixSet& set)
{
    std::vector<IndexMatrix> out;
    for_each_constrained_matrix(set, [&](const IndexMatrix& A) { out.push_back(A); });
    return out;
}

namespace {

/// sum_A prod_j (-m_j)_{c_j} prod_i (-n_i)_{r_i} / (sigma)_{|A|} prod W_{ij}^{a_ij} / a_ij!
///
/// Each term is built one unit of a_{ij} at a time, multiplying by the ratio
/// of consecutive Pochhammer factors, so no large intermediate products appear.
Complex gelfand_aomoto_sum(const ConstrainedMatrixSet& set, const ComplexMatrix& W, double sigma)
{
    const auto d = static_cast<Eigen::Index>(set.dim());
    CompensatedSum<Complex> sum;
    std::vector<int> row(set.dim()), col(set.dim());
    for_each_constrained_matrix(set, [&](const IndexMatrix& A) {
        std::fill(row.begin(), row.end(), 0);
        std::fill(col.begin(), col.end(), 0);
        int total = 0;
        Complex term = 1.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                for (int u = 0; u < A(i, j); ++u) {
                    const double ratio = (col[j] - set.col_caps[j]) * static_cast<double>(row[i] - set.row_caps[i])
                                         / ((sigma + total) * (u + 1));
                    term *= ratio * W(i, j);
                    ++col[j];
                    ++row[i];
                    ++total;
                }
            }
        }
        sum.add(term);
    });
    return sum.value();
}

void require_square(const ComplexMatrix& U, std::size_t d)
{
    if (U.rows() != static_cast<Eigen::Index>(d) || U.cols() != static_cast<Eigen::Index>(d))
        throw std::invalid_argument("Meixner polynomial: U must be d x d");
}

} // namespace

Complex meixner_hyper(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma)
{
    return degenerate_meixner(m, n, U, sigma, m.dim(), m.dim());
}

Complex degenerate_meixner(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma,
                           std::size_t k, std::size_t l)
{
    const std::size_t d = m.dim();
    require_square(U, d);
    const auto set = ConstrainedMatrixSet::degenerate(m, n, k, l);
    ComplexMatrix W(U.rows(), U.cols());
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        for (Eigen::Index j = 0; j < U.cols(); ++j) {
            const bool leading = i < static_cast<Eigen::Index>(k) && j < static_cast<Eigen::Index>(l);
            W(i, j) = leading ? 1.0 - U(i, j) : -U(i, j);
        }
    }
    return gelfand_aomoto_sum(set, W, sigma);
}

Complex meixner_genfun(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma,
                       int truncation)
{
    return degenerate_meixner_genfun(m, n, U, sigma, m.dim(), m.dim(), truncation);
}

Complex degenerate_meixner_genfun(const MultiIndex& m, const MultiIndex& n, const ComplexMatrix& U, double sigma,
                                  std::size_t k, std::size_t l, int truncation)
{
    const std::size_t d = m.dim();
    require_square(U, d);
    if (n.dim() != d || k > d || l > d)
        throw std::invalid_argument("degenerate_meixner_genfun: bad dimensions");
    const int N = truncation < 0 ? m.weight() : truncation;
    if (N < m.weight())
        throw std::invalid_argument("meixner_genfun: truncation below |m|");

    const auto dn = static_cast<Eigen::Index>(d);
    ComplexVector head = ComplexVector::Zero(dn);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(l); ++j)
        head(j) = -1.0;
    TruncatedSeries G = series_power(TruncatedSeries::linear(d, N, 1.0, head), Complex(-sigma - n.weight()));
    for (Eigen::Index i = 0; i < dn; ++i) {
        const Complex constant = i < static_cast<Eigen::Index>(k) ? 1.0 : 0.0;
        const TruncatedSeries factor = TruncatedSeries::linear(d, N, constant, -U.row(i).transpose());
        for (int e = 0; e < n[static_cast<std::size_t>(i)]; ++e)
            G = series_mul(G, factor);
    }
    return G.coefficient(m) * m.factorial() / pochhammer(sigma, m.weight());
}

Complex meixner_value(const MeixnerParams& params, const MultiIndex& m, const MultiIndex& n)
{
    return degenerate_meixner(m, n, params.U, params.sigma, params.k, params.l);
}

double basis_normalization(int sigma, const MultiIndex& m, const MultiIndex& n)
{
    const double s = sigma;
    return std::sqrt(pochhammer(s, m.weight()) * pochhammer(s, n.weight()) / (m.factorial() * n.factorial()));
}

Complex a_power(Complex a, int sigma)
{
    const Complex principal = principal_power(a, Complex(-sigma));
    const Complex repeated = int_power(a, -sigma);
    if (std::abs(principal - repeated) > 1e-12 * (std::abs(repeated) + 1e-300))
        throw std::logic_error("a_power: branch mismatch for integer exponent");
    return principal;
}

Complex monomial(const ComplexVector& x, const MultiIndex& m)
{
    Complex result = 1.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        result *= int_power(x(static_cast<Eigen::Index>(i)), m[i]);
    return result;
}

Complex matrix_coefficient(const MeixnerParams& params, const MultiIndex& m, const MultiIndex& n)
{
    const double sign = (m.weight() % 2 == 0) ? 1.0 : -1.0;
    return basis_normalization(params.sigma, m, n) * sign * a_power(params.a, params.sigma)
           * monomial(params.p_tilde, m) * monomial(params.p, n) * meixner_value(params, m, n);
}

Complex matrix_coefficient(const GroupElement& g, int sigma, const MultiIndex& m, const MultiIndex& n)
{
    if (m.dim() != g.dim() || n.dim() != g.dim())
        throw std::invalid_argument("matrix_coefficient: index dimension != d");
    return matrix_coefficient(extract_params(g, sigma), m, n);
}

} // namespace mkit
