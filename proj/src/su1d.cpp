#include "mkit/su1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mkit/matrix_exp.hpp"

namespace mkit {

GroupElement::GroupElement(ComplexMatrix matrix) : matrix_(std::move(matrix))
{
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2)
        throw std::invalid_argument("GroupElement: need a square matrix of size d+1 >= 2");
}

GroupElement GroupElement::identity(std::size_t d)
{
    const auto n = static_cast<Eigen::Index>(d + 1);
    return GroupElement(ComplexMatrix::Identity(n, n));
}

GroupElement GroupElement::from_blocks(Complex a, const ComplexVector& b, const ComplexVector& c, const ComplexMatrix& D)
{
    const Eigen::Index d = b.size();
    if (c.size() != d || D.rows() != d || D.cols() != d)
        throw std::invalid_argument("GroupElement::from_blocks: inconsistent block sizes");
    ComplexMatrix g(d + 1, d + 1);
    g(0, 0) = a;
    g.row(0).tail(d) = b.transpose();
    g.col(0).tail(d) = c;
    g.bottomRightCorner(d, d) = D;
    return GroupElement(std::move(g));
}

GroupElement operator*(const GroupElement& g1, const GroupElement& g2)
{
    if (g1.dim() != g2.dim())
        throw std::invalid_argument("GroupElement product: dimension mismatch");
    return GroupElement(g1.matrix() * g2.matrix());
}

ComplexMatrix indefinite_form(std::size_t d)
{
    ComplexMatrix J = -ComplexMatrix::Identity(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d + 1));
    J(0, 0) = 1.0;
    return J;
}

double ValidationReport::max_residual() const
{
    return std::max({defining_relation, determinant, norm_b, norm_c, d_dagger_d, d_d_dagger, cross_b, cross_c});
}

std::string ValidationReport::describe() const
{
    std::ostringstream os;
    os.precision(3);
    os << (passed() ? "valid" : "invalid") << " SU(1,d) element (tol " << tolerance << "): "
       << "g^+Jg-J " << defining_relation << ", det-1 " << determinant << ", |a|^2-|b|^2-1 " << norm_b
       << ", |a|^2-|c|^2-1 " << norm_c << ", D^+D " << d_dagger_d << ", DD^+ " << d_d_dagger << ", cross "
       << std::max(cross_b, cross_c);
    if (!finite)
        os << " (non-finite entries)";
    return os.str();
}

ValidationReport validate(const GroupElement& g, double tol)
{
    ValidationReport r;
    r.tolerance = tol;
    const ComplexMatrix& G = g.matrix();
    if (!G.allFinite()) {
        r.finite = false;
        return r;
    }
    const std::size_t d = g.dim();
    const auto n = static_cast<Eigen::Index>(d);
    const ComplexMatrix J = indefinite_form(d);
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    const Complex a = g.a();
    const ComplexVector b = g.b();
    const ComplexVector c = g.c();
    const ComplexMatrix D = g.D();

    r.defining_relation = max_abs(G.adjoint() * J * G - J);
    r.determinant = std::abs(G.determinant() - 1.0);
    r.norm_b = std::abs(std::norm(a) - b.squaredNorm() - 1.0);
    r.norm_c = std::abs(std::norm(a) - c.squaredNorm() - 1.0);
    r.d_dagger_d = max_abs(D.adjoint() * D - I - b.conjugate() * b.transpose());
    r.d_d_dagger = max_abs(D * D.adjoint() - I - c * c.adjoint());
    r.cross_b = max_abs(std::conj(a) * b.transpose() - c.adjoint() * D);
    r.cross_c = max_abs(a * c.adjoint() - b.transpose() * D.adjoint());
    return r;
}

void require_valid(const GroupElement& g, double tol)
{
    const auto report = validate(g, tol);
    if (!report.passed())
        throw InvalidGroupElement(report.describe());
}

GroupElement inverse(const GroupElement& g)
{
    require_valid(g);
    return GroupElement::from_blocks(std::conj(g.a()), -g.c().conjugate(), -g.b().conjugate(), g.D().adjoint());
}

ComplexMatrix random_algebra_element(std::mt19937_64& rng, std::size_t d, double scale)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] {
        const double re = normal(rng);
        const double im = normal(rng);
        return scale * Complex(re, im);
    };
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix X = ComplexMatrix::Zero(n + 1, n + 1);
    for (Eigen::Index j = 1; j <= n; ++j) {
        const Complex r = draw();
        X(0, j) = r;
        X(j, 0) = std::conj(r);
    }
    // anti-hermitian lower-right block
    for (Eigen::Index i = 1; i <= n; ++i) {
        X(i, i) = Complex(0.0, scale * normal(rng));
        for (Eigen::Index j = i + 1; j <= n; ++j) {
            const Complex z = draw();
            X(i, j) = z;
            X(j, i) = -std::conj(z);
        }
    }
    X(0, 0) = -X.diagonal().tail(n).sum();
    return X;
}

GroupElement random_element(std::uint64_t seed, std::size_t d, double scale, int max_attempts)
{
    if (d == 0)
        throw std::invalid_argument("random_element: d must be >= 1");
    std::mt19937_64 rng(seed);
    double smallest = 0.0;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        GroupElement g(matrix_exp(random_algebra_element(rng, d, scale)));
        smallest = std::abs(g.a());
        smallest = std::min(smallest, g.b().cwiseAbs().minCoeff());
        smallest = std::min(smallest, g.c().cwiseAbs().minCoeff());
        if (smallest > 1e-3)
            return g;
    }
    std::ostringstream os;
    os << "random_element: genericity filter rejected all " << max_attempts << " candidates (seed " << seed
       << ", scale " << scale << ", smallest |a|,|b_i|,|c_i| " << smallest << ")";
    throw std::domain_error(os.str());
}

bool is_negligible(Complex x, Complex a)
{
    return std::abs(x) < 1e-9 * (1.0 + std::abs(a));
}

std::size_t nonzero_prefix_length(const ComplexVector& v, Complex a)
{
    std::size_t k = 0;
    while (k < static_cast<std::size_t>(v.size()) && !is_negligible(v(static_cast<Eigen::Index>(k)), a))
        ++k;
    for (std::size_t i = k; i < static_cast<std::size_t>(v.size()); ++i) {
        if (!is_negligible(v(static_cast<Eigen::Index>(i)), a))
            throw std::invalid_argument("zero pattern is not a contiguous tail; apply permute_coordinates first");
    }
    return k;
}

std::vector<std::size_t> zero_tail_permutation(const ComplexVector& v, Complex a)
{
    std::vector<std::size_t> perm;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!is_negligible(v(i), a))
            perm.push_back(static_cast<std::size_t>(i));
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (is_negligible(v(i), a))
            perm.push_back(static_cast<std::size_t>(i));
    }
    return perm;
}

GroupElement permute_coordinates(const GroupElement& g, std::span<const std::size_t> perm)
{
    const std::size_t d = g.dim();
    if (perm.size() != d)
        throw std::invalid_argument("permute_coordinates: permutation length != d");
    std::vector<bool> seen(d, false);
    for (std::size_t p : perm) {
        if (p >= d || seen[p])
            throw std::invalid_argument("permute_coordinates: not a permutation");
        seen[p] = true;
    }
    auto old_index = [&](Eigen::Index i) { return i == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(perm[i - 1] + 1); };
    const auto n = static_cast<Eigen::Index>(d + 1);
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = g.matrix()(old_index(i), old_index(j));
    }
    return GroupElement(std::move(out));
}

namespace {

/// Unitary M of determinant 1 with (M w)_i = 0 for i >= 1.
ComplexMatrix tail_annihilator(const ComplexVector& w)
{
    const Eigen::Index r = w.size();
    Eigen::HouseholderQR<ComplexMatrix> qr{ComplexMatrix(w)};
    ComplexMatrix M = ComplexMatrix(qr.householderQ()).adjoint();
    const Complex det = M.determinant();
    M.row(r - 1) *= std::conj(det) / std::abs(det);
    return M;
}

} // namespace

GroupElement rotate_to_zero_tails(const GroupElement& g, std::size_t k, std::size_t l)
{
    const std::size_t d = g.dim();
    if (k < 1 || k > d || l < 1 || l > d)
        throw std::invalid_argument("rotate_to_zero_tails: need 1 <= k, l <= d");
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix G = g.matrix();

    if (k < d) {
        const Eigen::Index start = static_cast<Eigen::Index>(k) - 1;
        const Eigen::Index r = n - start;
        const ComplexMatrix M = tail_annihilator(G.row(0).segment(1 + start, r).transpose());
        // b' = V^t b with V^t = M on the tail block
        ComplexMatrix V = ComplexMatrix::Identity(n + 1, n + 1);
        V.block(1 + start, 1 + start, r, r) = M.transpose();
        G = G * V;
    }
    if (l < d) {
        const Eigen::Index start = static_cast<Eigen::Index>(l) - 1;
        const Eigen::Index r = n - start;
        const ComplexMatrix M = tail_annihilator(G.col(0).segment(1 + start, r));
        ComplexMatrix W = ComplexMatrix::Identity(n + 1, n + 1);
        W.block(1 + start, 1 + start, r, r) = M;
        G = W * G;
    }
    // flush the rounding residue of the annihilated entries
    for (Eigen::Index i = static_cast<Eigen::Index>(k) + 1; i <= n; ++i)
        G(0, i) = 0.0;
    for (Eigen::Index j = static_cast<Eigen::Index>(l) + 1; j <= n; ++j)
        G(j, 0) = 0.0;
    return GroupElement(std::move(G));
}

MeixnerParams extract_params(const GroupElement& g, int sigma)
{
    require_valid(g);
    const std::size_t d = g.dim();
    if (sigma < static_cast<int>(d) + 1)
        throw std::invalid_argument("sigma must be >= d+1");
    const auto n = static_cast<Eigen::Index>(d);
    const Complex a = g.a();
    const ComplexVector b = g.b();
    const ComplexVector c = g.c();
    const ComplexMatrix D = g.D();

    MeixnerParams params;
    params.sigma = sigma;
    params.a = a;
    params.k = nonzero_prefix_length(b, a);
    params.l = nonzero_prefix_length(c, a);
    params.extrapolated = params.k == 0 || params.l == 0;
    params.p0_sq = 1.0 / std::norm(a);

    const auto k = static_cast<Eigen::Index>(params.k);
    const auto l = static_cast<Eigen::Index>(params.l);
    params.p.resize(n);
    params.p_tilde.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        params.p(i) = i < k ? b(i) / a : 1.0 / a;
        params.p_tilde(i) = i < l ? c(i) / a : 1.0 / a;
    }
    params.U.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex row_scale = i < k ? b(i) : Complex(1.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex col_scale = j < l ? c(j) : Complex(1.0);
            params.U(i, j) = a * D(j, i) / (row_scale * col_scale);
        }
    }
    return params;
}

namespace {

ComplexMatrix u_hat(const MeixnerParams& params)
{
    const auto n = static_cast<Eigen::Index>(params.dim());
    ComplexMatrix Uh = ComplexMatrix::Zero(n + 1, n + 1);
    Uh(0, 0) = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Uh(0, j + 1) = j < static_cast<Eigen::Index>(params.l) ? 1.0 : 0.0;
        Uh(j + 1, 0) = j < static_cast<Eigen::Index>(params.k) ? 1.0 : 0.0;
    }
    Uh.bottomRightCorner(n, n) = params.U;
    return Uh;
}

ComplexMatrix diag_with_one(const ComplexVector& v)
{
    ComplexVector diag(v.size() + 1);
    diag(0) = 1.0;
    diag.tail(v.size()) = v;
    return diag.asDiagonal();
}

} // namespace

double params_invariant_residual(const MeixnerParams& params)
{
    const auto n = static_cast<Eigen::Index>(params.dim());
    const ComplexMatrix J = indefinite_form(params.dim());
    const ComplexMatrix P = diag_with_one(params.p);
    const ComplexMatrix Pt = diag_with_one(params.p_tilde);
    const ComplexMatrix C = P.adjoint() * J * P;
    const ComplexMatrix Ct = Pt.adjoint() * J * Pt;
    const ComplexMatrix Uh = u_hat(params);
    return max_abs(Uh.adjoint() * C * Uh * Ct - params.p0_sq * ComplexMatrix::Identity(n + 1, n + 1));
}

GroupElement from_params(const MeixnerParams& params, double tol)
{
    const Eigen::Index n = params.U.rows();
    if (params.U.cols() != n || params.p.size() != n || params.p_tilde.size() != n)
        throw std::invalid_argument("from_params: inconsistent parameter sizes");
    if (params.k > params.dim() || params.l > params.dim())
        throw std::invalid_argument("from_params: degeneracy pattern out of range");
    const double invariant = params_invariant_residual(params);
    const double modulus = std::abs(params.p0_sq * std::norm(params.a) - 1.0);
    if (invariant > tol || modulus > tol) {
        std::ostringstream os;
        os << "from_params: parameter invariant violated (U_hat residual " << invariant << ", |a|^2|p0|^2-1 "
           << modulus << ")";
        throw std::invalid_argument(os.str());
    }
    GroupElement g(params.a * diag_with_one(params.p_tilde) * u_hat(params).transpose() * diag_with_one(params.p));
    require_valid(g, tol);
    return g;
}

} // namespace mkit
