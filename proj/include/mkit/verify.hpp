#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mkit/core.hpp"
#include "mkit/multi_index.hpp"
#include "mkit/su1d.hpp"

namespace mkit {

inline constexpr double kFiniteTolerance = 1e-8;
inline constexpr double kTruncatedTolerance = 1e-6;
inline constexpr int kDefaultShellCap = 150;

enum class CheckStatus { pass, fail, inconclusive };

std::string to_string(CheckStatus status);
CheckStatus parse_check_status(const std::string& text);

/// Outcome of one identity check. Relative residuals are |lhs - rhs| / (1 + scale)
/// where scale is the largest term magnitude entering the identity.
struct CheckReport {
    std::string identity;
    std::size_t d = 0;
    int sigma = 0;
    std::uint64_t seed = 0;
    std::string indices;
    int truncation = 0;         ///< highest shell summed (0 for finite identities)
    double tail_estimate = 0.0; ///< relative size of the last shell
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    double tolerance = kFiniteTolerance;
    CheckStatus status = CheckStatus::pass;
    double wall_time_ms = 0.0;
    std::vector<std::string> notes;
    std::map<std::string, double> metrics;

    bool passed() const { return status == CheckStatus::pass; }
    /// Sets status from the residual unless already inconclusive.
    void finalize();
};

/// Memoized M_m(n) (or the degenerate M^) for one parameter set; negative
/// indices evaluate to zero.
class MeixnerTable {
public:
    explicit MeixnerTable(const MeixnerParams& params);
    Complex operator()(const std::vector<int>& m, const std::vector<int>& n);
    Complex operator()(const MultiIndex& m, const MultiIndex& n);
    const MeixnerParams& params() const { return params_; }

private:
    MeixnerParams params_;
    std::map<std::pair<MultiIndex, MultiIndex>, Complex> cache_;
};

/// Both orthogonality relations for |m|, |m'| <= m_max (resp. n, n'), plus the
/// mass identity sum (sigma)_{|n|}/n! |p|^{2n} = |p_0|^{-2 sigma}. Shells are
/// added until the last one is below tol/10 relative; hitting shell_cap is inconclusive.
CheckReport check_orthogonality(const MeixnerParams& params, int m_max, double tol = kTruncatedTolerance,
                                int shell_cap = kDefaultShellCap);

/// M_m(n; U, sigma) = M_n(m; U^t, sigma) over |m|, |n| <= max_degree; the
/// degenerate pattern (k, l) becomes (l, k) on the dual side.
CheckReport check_duality(const MeixnerParams& params, int max_degree, double tol = kFiniteTolerance);

/// Composition identity from pi(g1 g2) = pi(g1) pi(g2), written in Meixner
/// polynomials and summed over k with adaptive shells.
CheckReport check_sum_identity(const GroupElement& g1, const GroupElement& g2, int sigma, int max_degree,
                               double tol = kTruncatedTolerance, int shell_cap = kDefaultShellCap);

/// Convolution identity from the multiplication intertwiner of a tensor
/// product: (sigma)_{|m|}/m! M_m(n; U, sigma) equals the sum over compositions
/// m_1 + ... + m_N = m of prod (sigma_i)_{|m_i|}/m_i! M_{m_i}(n_i; U, sigma_i).
CheckReport check_tensor_identity(const std::vector<int>& sigmas, const ComplexMatrix& U, const MultiIndex& m,
                                  const std::vector<MultiIndex>& n_parts, double tol = kFiniteTolerance);

/// Difference equations in n from the Cartan action, for every k = 1..d and
/// |m|, |n| <= max_degree; the generic case also checks the rewritten
/// difference form. Degenerate parameters use the indicator chi_k.
CheckReport check_difference_equation(const MeixnerParams& params, int max_degree, double tol = kFiniteTolerance);

/// Lowering/raising relations from the E_{k,l} action, for all k != l in
/// 0..d (U_{0,i} = 1, v_0 = 0, n_0 = -sigma-|n|) and |m|, |n| <= max_degree.
/// For l = 0 the left side carries the factor -|p_0|^2 n_0 instead of n_0.
CheckReport check_raising_lowering(const MeixnerParams& params, int max_degree, double tol = kFiniteTolerance);

/// matrix_coefficient(family(eps)) -> matrix_coefficient(family(0)) for
/// eps in {1e-2, 1e-4, 1e-6}; passes when every step shrinks the residual
/// by >= 10x or the residual is already below floor.
CheckReport check_degenerate_limit(const std::function<GroupElement(double)>& family, int sigma, int max_degree,
                                   double floor = 1e-12);

/// Standard family g0 exp(eps X) through a degenerate element g0, with X a
/// seeded algebra element; b and c entries zero at eps = 0 become O(eps).
std::function<GroupElement(double)> degenerate_family(const GroupElement& g0, std::uint64_t seed);

/// Column orthonormality of operator_matrix(g, sigma, N) on |n| <= safe_degree,
/// column norms <= 1, and pi_{m,n}(g) = conj(pi_{n,m}(g^{-1})).
CheckReport check_unitarity(const GroupElement& g, int sigma, int N, int safe_degree, double tol = kTruncatedTolerance);

/// meixner_hyper against meixner_genfun over |m|, |n| <= max_degree
/// (degenerate sum against the degenerate generating function when b or c has zeros).
CheckReport check_dual_path(const MeixnerParams& params, int max_degree, double tol = 1e-9);

/// matrix_coefficient against operator_matrix entries for |m|, |n| <= max_degree.
CheckReport check_representation(const GroupElement& g, int sigma, int max_degree, double tol = 1e-9);

/// d = 1 values against the Gauss hypergeometric 2F1(-m, -n; sigma; 1 - u),
/// evaluated as a terminating series in long double.
CheckReport check_classical_reduction(Complex u, double sigma, int max_degree, double tol = 1e-12);

/// Closed-form conjugated generators, the star compatibility of conjugation,
/// and exact adjointness of the truncated action matrices.
CheckReport check_lie_layer(const GroupElement& g, int sigma, int N);

/// Monte-Carlo integral against matrix_coefficient for |m|, |n| <= max_degree;
/// passes when every pair is within 3 standard errors and every se < se_limit.
CheckReport check_integral(const GroupElement& g, int sigma, int max_degree, std::size_t samples,
                           std::uint64_t seed, double se_limit = 5e-3);

/// 2F1(-m, -n; c; x) for nonnegative integers m, n.
Complex hyp2f1_terminating(int m, int n, double c, Complex x);

} // namespace mkit
