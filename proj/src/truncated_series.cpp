#include "mkit/truncated_series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mkit {

TruncatedSeries::TruncatedSeries(std::size_t dim, int max_degree) : dim_(dim), max_degree_(max_degree)
{
    if (max_degree < 0)
        throw std::invalid_argument("TruncatedSeries: negative truncation degree");
}

TruncatedSeries TruncatedSeries::constant(std::size_t dim, int max_degree, Complex value)
{
    TruncatedSeries s(dim, max_degree);
    s.set(MultiIndex(dim), value);
    return s;
}

TruncatedSeries TruncatedSeries::linear(std::size_t dim, int max_degree, Complex c0, const ComplexVector& coeffs)
{
    if (static_cast<std::size_t>(coeffs.size()) != dim)
        throw std::invalid_argument("TruncatedSeries::linear: coefficient count != dim");
    TruncatedSeries s = constant(dim, max_degree, c0);
    for (std::size_t j = 0; j < dim; ++j)
        s.set(MultiIndex::unit(dim, j), coeffs(static_cast<Eigen::Index>(j)));
    return s;
}

Complex TruncatedSeries::coefficient(const MultiIndex& m) const
{
    const auto it = terms_.find(m);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

void TruncatedSeries::set(const MultiIndex& m, Complex value)
{
    if (m.dim() != dim_)
        throw std::invalid_argument("TruncatedSeries: index dimension mismatch");
    if (m.weight() > max_degree_)
        return;
    if (value == Complex(0.0))
        terms_.erase(m);
    else
        terms_[m] = value;
}

void TruncatedSeries::add_to(const MultiIndex& m, Complex value)
{
    if (m.weight() > max_degree_)
        return;
    set(m, coefficient(m) + value);
}

void TruncatedSeries::require_compatible(const TruncatedSeries& other) const
{
    if (other.dim_ != dim_ || other.max_degree_ != max_degree_) {
        throw std::invalid_argument("TruncatedSeries: mismatch (dim " + std::to_string(dim_) + " vs "
                                    + std::to_string(other.dim_) + ", degree " + std::to_string(max_degree_)
                                    + " vs " + std::to_string(other.max_degree_) + ")");
    }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other)
{
    require_compatible(other);
    for (const auto& [m, c] : other.terms_)
        add_to(m, c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other)
{
    require_compatible(other);
    for (const auto& [m, c] : other.terms_)
        add_to(m, -c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex scale)
{
    if (scale == Complex(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_)
        c *= scale;
    return *this;
}

TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g)
{
    if (f.dim() != g.dim() || f.max_degree() != g.max_degree())
        throw std::invalid_argument("series_mul: dimension/degree mismatch");
    const int N = f.max_degree();
    TruncatedSeries::Terms acc;
    for (const auto& [a, fa] : f.terms()) {
        for (const auto& [b, gb] : g.terms()) {
            if (a.weight() + b.weight() > N)
                break; // terms are sorted by weight
            acc[a + b] += fa * gb;
        }
    }
    TruncatedSeries out(f.dim(), N);
    for (const auto& [m, c] : acc)
        out.set(m, c);
    return out;
}

namespace {

bool is_small_nonnegative_integer(Complex s, int& as_int)
{
    if (s.imag() != 0.0 || s.real() < 0.0 || s.real() > 256.0 || std::floor(s.real()) != s.real())
        return false;
    as_int = static_cast<int>(s.real());
    return true;
}

} // namespace

TruncatedSeries series_power(const TruncatedSeries& f, Complex s)
{
    const std::size_t d = f.dim();
    const int N = f.max_degree();
    const MultiIndex zero(d);
    if (std::abs(f.coefficient(zero) - Complex(1.0)) > 1e-14)
        throw std::invalid_argument("series_power: constant term must equal 1");

    int integer_exponent = 0;
    if (is_small_nonnegative_integer(s, integer_exponent)) {
        TruncatedSeries result = TruncatedSeries::constant(d, N, 1.0);
        for (int k = 0; k < integer_exponent; ++k)
            result = series_mul(result, f);
        return result;
    }

    // k h_m = sum_{a != 0, a <= m} ((s+1)|a| - k) f_a h_{m-a},  k = |m|
    TruncatedSeries h = TruncatedSeries::constant(d, N, 1.0);
    const auto monomials = indices_up_to(d, N);
    for (const auto& m : monomials) {
        const int k = m.weight();
        if (k == 0)
            continue;
        Complex acc = 0.0;
        for (const auto& [a, fa] : f.terms()) {
            if (a.weight() == 0)
                continue;
            if (a.weight() > k)
                break;
            if (!a.dominated_by(m))
                continue;
            const Complex hb = h.coefficient(m - a);
            if (hb != Complex(0.0))
                acc += ((s + 1.0) * static_cast<double>(a.weight()) - static_cast<double>(k)) * fa * hb;
        }
        h.set(m, acc / static_cast<double>(k));
    }
    return h;
}

TruncatedSeries series_divide(const TruncatedSeries& f, const TruncatedSeries& g)
{
    if (f.dim() != g.dim() || f.max_degree() != g.max_degree())
        throw std::invalid_argument("series_divide: dimension/degree mismatch");
    const std::size_t d = f.dim();
    const Complex g0 = g.coefficient(MultiIndex(d));
    if (g0 == Complex(0.0))
        throw std::invalid_argument("series_divide: divisor has zero constant term");

    TruncatedSeries h(d, f.max_degree());
    for (const auto& m : indices_up_to(d, f.max_degree())) {
        Complex acc = f.coefficient(m);
        for (const auto& [a, ga] : g.terms()) {
            if (a.weight() == 0)
                continue;
            if (a.weight() > m.weight())
                break;
            if (!a.dominated_by(m))
                continue;
            const Complex hb = h.coefficient(m - a);
            if (hb != Complex(0.0))
                acc -= ga * hb;
        }
        h.set(m, acc / g0);
    }
    return h;
}

double max_abs_difference(const TruncatedSeries& f, const TruncatedSeries& g)
{
    double worst = 0.0;
    for (const auto& [m, c] : f.terms())
        worst = std::max(worst, std::abs(c - g.coefficient(m)));
    for (const auto& [m, c] : g.terms())
        worst = std::max(worst, std::abs(c - f.coefficient(m)));
    return worst;
}

} // namespace mkit
