#include "mkit/rep.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mkit/meixner.hpp"
#include "mkit/truncated_series.hpp"

namespace mkit {

OperatorMatrix::OperatorMatrix(std::size_t dim, int sigma, int max_degree)
    : dim_(dim), sigma_(sigma), max_degree_(max_degree), basis_(indices_up_to(dim, max_degree))
{
    for (std::size_t r = 0; r < basis_.size(); ++r)
        rank_.emplace(basis_[r], r);
    const auto size = static_cast<Eigen::Index>(basis_.size());
    values_ = ComplexMatrix::Zero(size, size);
}

std::size_t OperatorMatrix::rank(const MultiIndex& m) const
{
    const auto it = rank_.find(m);
    if (it == rank_.end())
        throw std::out_of_range("OperatorMatrix: index " + to_string(m) + " outside the truncated basis");
    return it->second;
}

Complex OperatorMatrix::entry(const MultiIndex& m, const MultiIndex& n) const
{
    return values_(static_cast<Eigen::Index>(rank(m)), static_cast<Eigen::Index>(rank(n)));
}

OperatorMatrix operator_matrix(const GroupElement& g, int sigma, int N)
{
    require_valid(g);
    if (N < 0)
        throw std::invalid_argument("operator_matrix: negative truncation");
    const std::size_t d = g.dim();
    if (sigma < static_cast<int>(d) + 1)
        throw std::invalid_argument("operator_matrix: sigma must be >= d+1");
    const Complex a = g.a();
    const ComplexVector c = g.c();
    const ComplexVector b = g.b();
    const ComplexMatrix D = g.D();

    OperatorMatrix out(d, sigma, N);
    const auto& basis = out.basis();

    // pi(g) z^n = (a + c^t z)^{-sigma-|n|} prod_i (b_i + (D^t z)_i)^{n_i}, built
    // from its parent n - v_i by one factor (b_i + (D^t z)_i) / (a + c^t z).
    const TruncatedSeries denominator = TruncatedSeries::linear(d, N, a, c);
    std::vector<TruncatedSeries> numerators;
    for (std::size_t i = 0; i < d; ++i)
        numerators.push_back(TruncatedSeries::linear(d, N, b(static_cast<Eigen::Index>(i)), D.col(static_cast<Eigen::Index>(i))));

    std::vector<TruncatedSeries> columns;
    columns.reserve(basis.size());
    columns.push_back(series_power(TruncatedSeries::linear(d, N, 1.0, c / a), Complex(-sigma))
                      * principal_power(a, Complex(-sigma)));
    for (std::size_t col = 1; col < basis.size(); ++col) {
        const MultiIndex& n = basis[col];
        std::size_t i = 0;
        while (n[i] == 0)
            ++i;
        const MultiIndex parent = *n.shifted(i, -1);
        columns.push_back(series_divide(series_mul(columns[out.rank(parent)], numerators[i]), denominator));
    }

    const double s = sigma;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const MultiIndex& n = basis[col];
        const double column_scale = std::sqrt(pochhammer(s, n.weight()) / n.factorial());
        for (const auto& [m, coeff] : columns[col].terms()) {
            const double row_scale = std::sqrt(m.factorial() / pochhammer(s, m.weight()));
            out.values()(static_cast<Eigen::Index>(out.rank(m)), static_cast<Eigen::Index>(col))
                = coeff * column_scale * row_scale;
        }
    }
    return out;
}

ComplexMatrix LieBasisElement::matrix(std::size_t d) const
{
    const auto n = static_cast<Eigen::Index>(d + 1);
    ComplexMatrix X = ComplexMatrix::Zero(n, n);
    if (kind == Kind::H) {
        X = -ComplexMatrix::Identity(n, n) / static_cast<double>(d + 1);
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += 1.0;
    } else {
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    }
    return X;
}

std::string LieBasisElement::name() const
{
    if (kind == Kind::H)
        return "H_" + std::to_string(i);
    return "E_" + std::to_string(i) + "," + std::to_string(j);
}

std::vector<LieBasisElement> lie_basis(std::size_t d)
{
    std::vector<LieBasisElement> basis;
    for (std::size_t i = 1; i <= d; ++i)
        basis.push_back(LieBasisElement::h(i));
    for (std::size_t i = 0; i <= d; ++i) {
        for (std::size_t j = 0; j <= d; ++j) {
            if (i != j)
                basis.push_back(LieBasisElement::e(i, j));
        }
    }
    return basis;
}

ComplexMatrix star(const ComplexMatrix& X)
{
    const ComplexMatrix J = indefinite_form(static_cast<std::size_t>(X.rows()) - 1);
    return J * X.adjoint() * J;
}

std::pair<double, LieBasisElement> star(const LieBasisElement& X)
{
    if (X.kind == LieBasisElement::Kind::H)
        return {1.0, X};
    if (X.i == 0 || X.j == 0)
        return {-1.0, LieBasisElement::e(X.j, X.i)};
    return {1.0, LieBasisElement::e(X.j, X.i)};
}

ComplexVector lie_coordinates(const ComplexMatrix& X)
{
    if (X.rows() != X.cols() || X.rows() < 2)
        throw std::invalid_argument("lie_coordinates: need a square matrix of size >= 2");
    if (std::abs(X.trace()) > 1e-12 * (1.0 + max_abs(X)))
        throw std::invalid_argument("lie_coordinates: matrix is not traceless");
    const auto d = static_cast<std::size_t>(X.rows()) - 1;
    const auto basis = lie_basis(d);
    ComplexVector coords(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t r = 0; r < basis.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(basis[r].i);
        const auto j = static_cast<Eigen::Index>(basis[r].j);
        coords(static_cast<Eigen::Index>(r)) = basis[r].kind == LieBasisElement::Kind::H ? X(i, i) - X(0, 0) : X(i, j);
    }
    return coords;
}

ComplexMatrix from_lie_coordinates(const ComplexVector& coords, std::size_t d)
{
    const auto basis = lie_basis(d);
    if (static_cast<std::size_t>(coords.size()) != basis.size())
        throw std::invalid_argument("from_lie_coordinates: wrong coordinate count");
    const auto n = static_cast<Eigen::Index>(d + 1);
    ComplexMatrix X = ComplexMatrix::Zero(n, n);
    for (std::size_t r = 0; r < basis.size(); ++r)
        X += coords(static_cast<Eigen::Index>(r)) * basis[r].matrix(d);
    return X;
}

std::vector<std::pair<MultiIndex, Complex>> lie_action(const LieBasisElement& X, const MultiIndex& n, int sigma)
{
    const std::size_t d = n.dim();
    const double s = sigma;
    const double w = n.weight();
    std::vector<std::pair<MultiIndex, Complex>> out;
    if (X.i > d || X.j > d || (X.kind == LieBasisElement::Kind::E && X.i == X.j) || (X.kind == LieBasisElement::Kind::H && X.i == 0))
        throw std::invalid_argument("lie_action: not a basis element for this dimension");

    if (X.kind == LieBasisElement::Kind::H) {
        out.emplace_back(n, s / static_cast<double>(d + 1) + n[X.i - 1]);
    } else if (X.i == 0) {
        const std::size_t j = X.j - 1;
        if (auto target = n.shifted(j, -1))
            out.emplace_back(*target, std::sqrt((s + w - 1.0) * n[j]));
    } else if (X.j == 0) {
        const std::size_t i = X.i - 1;
        out.emplace_back(*n.shifted(i, 1), -std::sqrt((n[i] + 1.0) * (s + w)));
    } else {
        const std::size_t i = X.i - 1;
        const std::size_t j = X.j - 1;
        if (auto lowered = n.shifted(j, -1))
            out.emplace_back(*lowered->shifted(i, 1), std::sqrt((n[i] + 1.0) * n[j]));
    }
    return out;
}

ComplexMatrix lie_action_matrix(const LieBasisElement& X, std::size_t d, int sigma, int N)
{
    const auto basis = indices_up_to(d, N);
    std::map<MultiIndex, Eigen::Index> rank;
    for (std::size_t r = 0; r < basis.size(); ++r)
        rank.emplace(basis[r], static_cast<Eigen::Index>(r));
    const auto size = static_cast<Eigen::Index>(basis.size());
    ComplexMatrix A = ComplexMatrix::Zero(size, size);
    for (Eigen::Index col = 0; col < size; ++col) {
        for (const auto& [m, coeff] : lie_action(X, basis[static_cast<std::size_t>(col)], sigma)) {
            if (m.weight() <= N)
                A(rank.at(m), col) += coeff;
        }
    }
    return A;
}

ComplexMatrix lie_action_matrix(const ComplexMatrix& X, int sigma, int N)
{
    const auto d = static_cast<std::size_t>(X.rows()) - 1;
    const ComplexVector coords = lie_coordinates(X);
    const auto basis = lie_basis(d);
    ComplexMatrix A;
    for (std::size_t r = 0; r < basis.size(); ++r) {
        const Complex w = coords(static_cast<Eigen::Index>(r));
        ComplexMatrix term = lie_action_matrix(basis[r], d, sigma, N);
        if (r == 0)
            A = ComplexMatrix::Zero(term.rows(), term.cols());
        if (w != Complex(0.0))
            A += w * term;
    }
    return A;
}

ConjugatedGenerator conjugate_generator(const GroupElement& g, const LieBasisElement& X)
{
    const GroupElement g_inv = inverse(g);
    ConjugatedGenerator out;
    out.matrix = g.matrix() * X.matrix(g.dim()) * g_inv.matrix();
    out.coordinates = lie_coordinates(out.matrix);
    return out;
}

ComplexVector conjugated_generator_closed_form(const GroupElement& g, const LieBasisElement& X)
{
    require_valid(g);
    const std::size_t d = g.dim();
    const ComplexMatrix& G = g.matrix();
    const auto k = static_cast<Eigen::Index>(X.i);
    const auto l = static_cast<Eigen::Index>(X.kind == LieBasisElement::Kind::H ? X.i : X.j);

    // column k of g: (b_k, D_{.,k}) with b_0 = a, D_{i,0} = c_i; likewise for l
    auto column = [&](Eigen::Index col, Eigen::Index row) { return G(row, col); };
    const double sign = (l == 0) ? -1.0 : 1.0;

    const auto basis = lie_basis(d);
    ComplexVector coords(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t r = 0; r < basis.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(basis[r].i);
        const auto j = static_cast<Eigen::Index>(basis[r].j);
        Complex value;
        if (basis[r].kind == LieBasisElement::Kind::H)
            value = column(k, i) * std::conj(column(l, i)) + column(k, 0) * std::conj(column(l, 0));
        else if (j == 0)
            value = -std::conj(column(l, 0)) * column(k, i);
        else
            value = column(k, i) * std::conj(column(l, j));
        coords(static_cast<Eigen::Index>(r)) = sign * value;
    }
    return coords;
}

MonteCarloEstimate integral_matrix_coefficient(const GroupElement& g, int sigma, const MultiIndex& m,
                                               const MultiIndex& n, std::size_t samples, std::uint64_t seed)
{
    return integral_matrix_coefficients(g, sigma, {{m, n}}, samples, seed).front();
}

std::vector<MonteCarloEstimate> integral_matrix_coefficients(const GroupElement& g, int sigma,
                                                             const std::vector<std::pair<MultiIndex, MultiIndex>>& pairs,
                                                             std::size_t samples, std::uint64_t seed)
{
    require_valid(g);
    if (samples == 0)
        throw std::invalid_argument("integral_matrix_coefficient: need at least one sample");
    const std::size_t d = g.dim();
    const auto dn = static_cast<Eigen::Index>(d);
    const int alpha = sigma - static_cast<int>(d) - 1;
    if (alpha < 0)
        throw std::invalid_argument("integral_matrix_coefficient: sigma must be >= d+1");
    const double c_alpha = pochhammer(alpha + 1.0, static_cast<int>(d)) / factorial(static_cast<int>(d));

    const Complex a = g.a();
    const ComplexVector b = g.b();
    const ComplexVector c = g.c();
    const ComplexMatrix Dt = g.D().transpose();

    std::vector<double> scale(pairs.size());
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        if (pairs[q].first.dim() != d || pairs[q].second.dim() != d)
            throw std::invalid_argument("integral_matrix_coefficient: index dimension != d");
        scale[q] = basis_normalization(sigma, pairs[q].first, pairs[q].second);
    }

    // substream 0 of the seed; a threaded caller would use one stream per worker
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    std::vector<Complex> mean(pairs.size(), 0.0);
    std::vector<double> m2(pairs.size(), 0.0);
    ComplexVector z(dn);
    ComplexVector ratio(dn);
    std::vector<double> raw(2 * d);
    for (std::size_t s = 1; s <= samples; ++s) {
        double norm_sq = 0.0;
        for (auto& x : raw) {
            x = normal(rng);
            norm_sq += x * x;
        }
        const double radius = std::pow(uniform(rng), 1.0 / static_cast<double>(2 * d));
        const double direction = radius / std::sqrt(norm_sq);
        for (Eigen::Index j = 0; j < dn; ++j)
            z(j) = direction * Complex(raw[2 * j], raw[2 * j + 1]);
        const double weight = c_alpha * int_power(1.0 - radius * radius, alpha);

        const Complex denom = a + c.cwiseProduct(z).sum();
        ratio = (b + Dt * z) / denom;
        const Complex base = int_power(denom, -sigma) * weight;

        for (std::size_t q = 0; q < pairs.size(); ++q) {
            const Complex f = scale[q] * base * monomial(ratio, pairs[q].second)
                              * std::conj(monomial(z, pairs[q].first));
            const Complex delta = f - mean[q];
            mean[q] += delta / static_cast<double>(s);
            m2[q] += std::real(std::conj(delta) * (f - mean[q]));
        }
    }

    std::vector<MonteCarloEstimate> out(pairs.size());
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        out[q].value = mean[q];
        out[q].samples = samples;
        const double variance = samples > 1 ? m2[q] / static_cast<double>(samples - 1) : 0.0;
        out[q].standard_error = std::sqrt(variance / static_cast<double>(samples));
    }
    return out;
}

} // namespace mkit
