#include "mkit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mkit/matrix_exp.hpp"
#include "mkit/meixner.hpp"
#include "mkit/rep.hpp"

namespace mkit {

std::string to_string(CheckStatus status)
{
    switch (status) {
    case CheckStatus::pass:
        return "pass";
    case CheckStatus::fail:
        return "fail";
    case CheckStatus::inconclusive:
        return "inconclusive";
    }
    return "fail";
}

CheckStatus parse_check_status(const std::string& text)
{
    if (text == "pass")
        return CheckStatus::pass;
    if (text == "fail")
        return CheckStatus::fail;
    if (text == "inconclusive")
        return CheckStatus::inconclusive;
    throw std::invalid_argument("unknown check status '" + text + "'");
}

void CheckReport::finalize()
{
    if (status == CheckStatus::inconclusive)
        return;
    status = (std::isfinite(max_rel_residual) && max_rel_residual < tolerance) ? CheckStatus::pass : CheckStatus::fail;
}

MeixnerTable::MeixnerTable(const MeixnerParams& params) : params_(params) {}

Complex MeixnerTable::operator()(const std::vector<int>& m, const std::vector<int>& n)
{
    const auto negative = [](int x) { return x < 0; };
    if (std::any_of(m.begin(), m.end(), negative) || std::any_of(n.begin(), n.end(), negative))
        return 0.0;
    return (*this)(MultiIndex(m), MultiIndex(n));
}

Complex MeixnerTable::operator()(const MultiIndex& m, const MultiIndex& n)
{
    auto key = std::make_pair(m, n);
    const auto it = cache_.find(key);
    if (it != cache_.end())
        return it->second;
    const Complex value = meixner_value(params_, m, n);
    cache_.emplace(std::move(key), value);
    return value;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Running max of |lhs - rhs| and |lhs - rhs| / (1 + scale).
struct Residuals {
    double max_abs = 0.0;
    double max_rel = 0.0;
    std::string worst;

    void add(Complex lhs, Complex rhs, double scale, const std::string& where)
    {
        const double abs_res = std::abs(lhs - rhs);
        const double rel = std::isfinite(abs_res) ? abs_res / (1.0 + scale) : std::numeric_limits<double>::infinity();
        max_abs = std::max(max_abs, abs_res);
        if (rel > max_rel || (!std::isfinite(rel) && std::isfinite(max_rel))) {
            max_rel = rel;
            worst = where;
        }
    }

    void store(CheckReport& report) const
    {
        report.max_abs_residual = max_abs;
        report.max_rel_residual = max_rel;
        if (!worst.empty())
            report.notes.push_back("worst at " + worst);
    }
};

std::vector<int> shift(std::vector<int> v, std::size_t i, int delta)
{
    v[i] += delta;
    return v;
}

std::string pair_label(const MultiIndex& m, const MultiIndex& n)
{
    return "m=(" + to_string(m) + ") n=(" + to_string(n) + ")";
}

double abs_sq_monomial(const ComplexVector& x, const MultiIndex& m)
{
    return std::norm(monomial(x, m));
}

CheckReport base_report(std::string identity, std::size_t d, int sigma, double tol)
{
    CheckReport r;
    r.identity = std::move(identity);
    r.d = d;
    r.sigma = sigma;
    r.tolerance = tol;
    return r;
}

/// Adaptive sum over shells |n| = 0, 1, ... of a family of series indexed by
/// `count` slots; `shell` adds one shell's terms and returns its absolute sum per slot.
struct ShellSum {
    std::vector<CompensatedSum<Complex>> sums;
    std::vector<double> max_term;
    std::vector<double> shell_abs;

    explicit ShellSum(std::size_t count) : sums(count), max_term(count, 0.0), shell_abs(count, 0.0) {}

    void begin_shell() { std::fill(shell_abs.begin(), shell_abs.end(), 0.0); }
    void add(std::size_t slot, Complex term)
    {
        sums[slot].add(term);
        max_term[slot] = std::max(max_term[slot], std::abs(term));
        shell_abs[slot] += std::abs(term);
    }
};

} // namespace

CheckReport check_orthogonality(const MeixnerParams& params, int m_max, double tol, int shell_cap)
{
    const auto start = Clock::now();
    const std::size_t d = params.dim();
    CheckReport report = base_report("orthogonality", d, params.sigma, tol);
    report.indices = "|m|,|m'|<=" + std::to_string(m_max);
    const double s = params.sigma;
    const double p0_pow = int_power(params.p0_sq, params.sigma);
    constexpr double mass_tolerance = 1e-8;
    const double stop = std::min(tol, mass_tolerance) / 10.0;
    const int min_shells = m_max + 2;

    const auto low = indices_up_to(d, m_max);
    const std::size_t L = low.size();
    MeixnerTable M(params);

    // slot (a, b) of relation 1: sum_n w_n M_a(n) conj(M_b(n)); relation 2 likewise over m
    ShellSum first(L * L);
    ShellSum second(L * L);
    std::vector<double> closed_first(L * L, 0.0);
    std::vector<double> closed_second(L * L, 0.0);
    for (std::size_t a = 0; a < L; ++a) {
        const double pochh = pochhammer(s, low[a].weight());
        closed_first[a * L + a] = low[a].factorial() / (abs_sq_monomial(params.p_tilde, low[a]) * pochh * p0_pow);
        closed_second[a * L + a] = low[a].factorial() / (abs_sq_monomial(params.p, low[a]) * pochh * p0_pow);
    }

    auto converged = [&](const ShellSum& sum, const std::vector<double>& closed, double& tail) {
        bool ok = true;
        for (std::size_t slot = 0; slot < sum.sums.size(); ++slot) {
            const double rel = sum.shell_abs[slot] / (1.0 + std::max(closed[slot], sum.max_term[slot]));
            tail = std::max(tail, rel);
            ok = ok && rel < stop;
        }
        return ok;
    };

    int shell = 0;
    bool done = false;
    double tail = 0.0;
    std::vector<Complex> row(L);
    std::vector<Complex> col(L);
    for (; shell <= shell_cap; ++shell) {
        first.begin_shell();
        second.begin_shell();
        for (const MultiIndex& x : indices_of_weight(d, shell)) {
            const double w = pochhammer(s, shell) / x.factorial();
            const double w1 = w * abs_sq_monomial(params.p, x);
            const double w2 = w * abs_sq_monomial(params.p_tilde, x);
            for (std::size_t a = 0; a < L; ++a) {
                row[a] = M(low[a], x);
                col[a] = M(x, low[a]);
            }
            for (std::size_t a = 0; a < L; ++a) {
                for (std::size_t b = 0; b < L; ++b) {
                    if (row[a] != Complex(0.0) && row[b] != Complex(0.0))
                        first.add(a * L + b, w1 * row[a] * std::conj(row[b]));
                    if (col[a] != Complex(0.0) && col[b] != Complex(0.0))
                        second.add(a * L + b, w2 * col[a] * std::conj(col[b]));
                }
            }
        }
        tail = 0.0;
        const bool ok1 = converged(first, closed_first, tail);
        const bool ok2 = converged(second, closed_second, tail);
        if (shell >= min_shells && ok1 && ok2) {
            done = true;
            break;
        }
    }
    report.truncation = std::min(shell, shell_cap);
    report.tail_estimate = tail;

    Residuals res;
    for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) {
            const std::size_t slot = a * L + b;
            res.add(first.sums[slot].value(), closed_first[slot], std::max(closed_first[slot], first.max_term[slot]),
                    "first " + pair_label(low[a], low[b]));
            res.add(second.sums[slot].value(), closed_second[slot], std::max(closed_second[slot], second.max_term[slot]),
                    "second " + pair_label(low[a], low[b]));
        }
    }
    res.store(report);

    const double mass = std::abs(first.sums[0].value() - closed_first[0]) / (1.0 + closed_first[0]);
    report.metrics["mass_residual"] = mass;
    report.metrics["mass_closed"] = closed_first[0];
    report.wall_time_ms = elapsed_ms(start);
    if (!done) {
        report.status = CheckStatus::inconclusive;
        report.notes.push_back("shell cap " + std::to_string(shell_cap) + " reached before the tail fell below tol/10");
        return report;
    }
    report.finalize();
    if (mass >= mass_tolerance) {
        report.status = CheckStatus::fail;
        report.notes.push_back("mass identity residual above 1e-8");
    }
    return report;
}

CheckReport check_duality(const MeixnerParams& params, int max_degree, double tol)
{
    const auto start = Clock::now();
    const std::size_t d = params.dim();
    CheckReport report = base_report("duality", d, params.sigma, tol);
    report.indices = "|m|,|n|<=" + std::to_string(max_degree);
    const ComplexMatrix Ut = params.U.transpose();
    Residuals res;
    const auto box = indices_up_to(d, max_degree);
    for (const MultiIndex& m : box) {
        for (const MultiIndex& n : box) {
            const Complex lhs = degenerate_meixner(m, n, params.U, params.sigma, params.k, params.l);
            const Complex rhs = degenerate_meixner(n, m, Ut, params.sigma, params.l, params.k);
            res.add(lhs, rhs, std::max(std::abs(lhs), std::abs(rhs)), pair_label(m, n));
        }
    }
    res.store(report);
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    return report;
}

CheckReport check_sum_identity(const GroupElement& g1, const GroupElement& g2, int sigma, int max_degree, double tol,
                               int shell_cap)
{
    const auto start = Clock::now();
    const std::size_t d = g1.dim();
    CheckReport report = base_report("sum_identity", d, sigma, tol);
    report.indices = "|m|,|n|<=" + std::to_string(max_degree);
    const GroupElement g12 = g1 * g2;
    const MeixnerParams p1 = extract_params(g1, sigma);
    const MeixnerParams p2 = extract_params(g2, sigma);
    const MeixnerParams p12 = extract_params(g12, sigma);
    if (!p1.generic() || !p2.generic() || !p12.generic())
        throw std::invalid_argument("check_sum_identity: g1, g2 and g1 g2 must have nonzero b and c entries");
    const double s = sigma;
    MeixnerTable M1(p1);
    MeixnerTable M2(p2);
    MeixnerTable M12(p12);

    const auto low = indices_up_to(d, max_degree);
    const std::size_t L = low.size();
    const Complex prefactor = int_power(p1.a * p2.a / p12.a, sigma);
    std::vector<Complex> closed(L * L);
    std::vector<double> closed_abs(L * L);
    for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) {
            const MultiIndex& m = low[a];
            const MultiIndex& n = low[b];
            closed[a * L + b] = prefactor * monomial(p12.p_tilde, m) / monomial(p1.p_tilde, m) * monomial(p12.p, n)
                                / monomial(p2.p, n) * M12(m, n);
            closed_abs[a * L + b] = std::abs(closed[a * L + b]);
        }
    }

    ShellSum sum(L * L);
    const double stop = tol / 10.0;
    int shell = 0;
    bool done = false;
    double tail = 0.0;
    std::vector<Complex> left(L);
    std::vector<Complex> right(L);
    for (; shell <= shell_cap; ++shell) {
        sum.begin_shell();
        for (const MultiIndex& k : indices_of_weight(d, shell)) {
            const Complex w = ((shell % 2) ? -1.0 : 1.0) * monomial(p1.p, k) * monomial(p2.p_tilde, k)
                              * (pochhammer(s, shell) / k.factorial());
            for (std::size_t a = 0; a < L; ++a) {
                left[a] = M1(low[a], k);
                right[a] = M2(k, low[a]);
            }
            for (std::size_t a = 0; a < L; ++a) {
                for (std::size_t b = 0; b < L; ++b)
                    sum.add(a * L + b, w * left[a] * right[b]);
            }
        }
        tail = 0.0;
        bool ok = true;
        for (std::size_t slot = 0; slot < L * L; ++slot) {
            const double rel = sum.shell_abs[slot] / (1.0 + std::max(closed_abs[slot], sum.max_term[slot]));
            tail = std::max(tail, rel);
            ok = ok && rel < stop;
        }
        if (shell >= 2 * max_degree + 2 && ok) {
            done = true;
            break;
        }
    }
    report.truncation = std::min(shell, shell_cap);
    report.tail_estimate = tail;

    Residuals res;
    for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) {
            const std::size_t slot = a * L + b;
            res.add(sum.sums[slot].value(), closed[slot], std::max(closed_abs[slot], sum.max_term[slot]),
                    pair_label(low[a], low[b]));
        }
    }
    res.store(report);
    report.wall_time_ms = elapsed_ms(start);
    if (!done) {
        report.status = CheckStatus::inconclusive;
        report.notes.push_back("shell cap " + std::to_string(shell_cap) + " reached before the tail fell below tol/10");
        return report;
    }
    report.finalize();
    return report;
}

CheckReport check_tensor_identity(const std::vector<int>& sigmas, const ComplexMatrix& U, const MultiIndex& m,
                                  const std::vector<MultiIndex>& n_parts, double tol)
{
    const auto start = Clock::now();
    if (sigmas.size() < 2 || sigmas.size() != n_parts.size())
        throw std::invalid_argument("check_tensor_identity: need N >= 2 sigmas and one n part per sigma");
    const std::size_t d = m.dim();
    int sigma = 0;
    MultiIndex n(d);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (sigmas[i] < static_cast<int>(d) + 1)
            throw std::invalid_argument("check_tensor_identity: each sigma_i must be >= d+1");
        sigma += sigmas[i];
        n += n_parts[i];
    }
    CheckReport report = base_report("tensor_identity", d, sigma, tol);
    report.indices = "m=(" + to_string(m) + ") n=(" + to_string(n) + ") N=" + std::to_string(sigmas.size());

    const auto weight = [](int sig, const MultiIndex& x) { return pochhammer(double(sig), x.weight()) / x.factorial(); };
    const Complex lhs = weight(sigma, m) * meixner_hyper(m, n, U, sigma);

    CompensatedSum<Complex> total;
    double scale = std::abs(lhs);
    // depth-first over compositions m_1 + ... + m_N = m
    std::function<void(std::size_t, const MultiIndex&, Complex)> visit = [&](std::size_t part, const MultiIndex& rest,
                                                                                Complex product) {
        if (part + 1 == sigmas.size()) {
            const Complex term = product * weight(sigmas[part], rest) * meixner_hyper(rest, n_parts[part], U, sigmas[part]);
            scale = std::max(scale, std::abs(term));
            total.add(term);
            return;
        }
        for (const MultiIndex& piece : indices_in_box(rest)) {
            const Complex factor = weight(sigmas[part], piece) * meixner_hyper(piece, n_parts[part], U, sigmas[part]);
            visit(part + 1, rest - piece, product * factor);
        }
    };
    visit(0, m, 1.0);

    Residuals res;
    res.add(lhs, total.value(), scale, report.indices);
    res.store(report);
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    return report;
}

CheckReport check_difference_equation(const MeixnerParams& params, int max_degree, double tol)
{
    const auto start = Clock::now();
    const std::size_t d = params.dim();
    CheckReport report = base_report("difference_equation", d, params.sigma, tol);
    report.indices = "|m|,|n|<=" + std::to_string(max_degree);
    const double s = params.sigma;
    const ComplexVector& p = params.p;
    const ComplexVector& pt = params.p_tilde;
    const ComplexMatrix& U = params.U;
    MeixnerTable M(params);
    Residuals res;
    Residuals rewritten;

    const auto box = indices_up_to(d, max_degree);
    for (std::size_t k = 0; k < d; ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        const double chi = k < params.k ? 1.0 : 0.0;
        const double ratio = params.p0_sq / std::norm(p(ki)); // |p_0 / p_k|^2
        for (const MultiIndex& mi : box) {
            for (const MultiIndex& ni : box) {
                const std::vector<int>& m = mi.entries();
                const std::vector<int>& n = ni.entries();
                const double sm = s + mi.weight();
                const Complex M0 = M(m, n);
                double scale = 0.0;
                auto track = [&scale](Complex x) {
                    scale = std::max(scale, std::abs(x));
                    return x;
                };

                const Complex lhs = track(ratio * double(n[k]) * M0);
                Complex diag = chi * sm;
                for (std::size_t i = 0; i < d; ++i)
                    diag += std::norm(U(ki, static_cast<Eigen::Index>(i)) * pt(static_cast<Eigen::Index>(i))) * double(m[i]);
                Complex rhs = track(diag * M0);

                Complex exchange = 0.0;
                Complex lowering = 0.0;
                Complex raising = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    const auto ii = static_cast<Eigen::Index>(i);
                    const Complex ubar = std::conj(U(ki, ii)) * std::norm(pt(ii));
                    for (std::size_t j = 0; j < d; ++j) {
                        if (i == j || m[j] == 0)
                            continue;
                        const Complex t = ubar * U(ki, static_cast<Eigen::Index>(j)) * double(m[j])
                                          * M(shift(shift(m, j, -1), i, 1), n);
                        exchange += track(t);
                    }
                    if (m[i] > 0)
                        lowering += track(U(ki, ii) * double(m[i]) * M(shift(m, i, -1), n));
                    raising += track(sm * ubar * M(shift(m, i, 1), n));
                }
                rhs += exchange - chi * (lowering + raising);
                res.add(lhs, rhs, scale, "k=" + std::to_string(k + 1) + " " + pair_label(mi, ni));

                if (params.generic()) {
                    // n_k M = |p_k/p_0|^2 [ sum_{i!=j} ... (M' - M) - sum U m (M' - M) - sum ... (M' - M) ]
                    double scale2 = std::abs(double(n[k]) * M0);
                    Complex bracket = 0.0;
                    for (std::size_t i = 0; i < d; ++i) {
                        const auto ii = static_cast<Eigen::Index>(i);
                        const Complex ubar = std::conj(U(ki, ii)) * std::norm(pt(ii));
                        for (std::size_t j = 0; j < d; ++j) {
                            if (i == j)
                                continue;
                            const Complex t = ubar * U(ki, static_cast<Eigen::Index>(j)) * double(m[j])
                                              * (M(shift(shift(m, j, -1), i, 1), n) - M0);
                            bracket += t;
                            scale2 = std::max(scale2, std::abs(t) / ratio);
                        }
                        const Complex lo = U(ki, ii) * double(m[i]) * (M(shift(m, i, -1), n) - M0);
                        const Complex ra = ubar * sm * (M(shift(m, i, 1), n) - M0);
                        bracket -= lo + ra;
                        scale2 = std::max({scale2, std::abs(lo) / ratio, std::abs(ra) / ratio});
                    }
                    rewritten.add(double(n[k]) * M0, bracket / ratio, scale2,
                                  "k=" + std::to_string(k + 1) + " " + pair_label(mi, ni));
                }
            }
        }
    }
    res.store(report);
    if (params.generic()) {
        report.metrics["difference_form_residual"] = rewritten.max_rel;
        report.max_rel_residual = std::max(report.max_rel_residual, rewritten.max_rel);
        report.max_abs_residual = std::max(report.max_abs_residual, rewritten.max_abs);
    } else {
        report.notes.push_back("degenerate pattern k=" + std::to_string(params.k) + " l=" + std::to_string(params.l));
    }
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    return report;
}

CheckReport check_raising_lowering(const MeixnerParams& params, int max_degree, double tol)
{
    if (!params.generic())
        throw std::invalid_argument("check_raising_lowering: needs nonzero b and c entries");
    const auto start = Clock::now();
    const std::size_t d = params.dim();
    CheckReport report = base_report("raising_lowering", d, params.sigma, tol);
    report.indices = "|m|,|n|<=" + std::to_string(max_degree) + " k,l in 0.." + std::to_string(d);
    const double s = params.sigma;
    const ComplexVector& pt = params.p_tilde;
    MeixnerTable M(params);
    Residuals res;
    Residuals literal_l0;

    // U_hat(k, i) with U_{0,i} = 1
    auto Uh = [&](std::size_t k, std::size_t i) -> Complex {
        return k == 0 ? Complex(1.0) : params.U(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(i));
    };
    const auto box = indices_up_to(d, max_degree);
    for (std::size_t k = 0; k <= d; ++k) {
        for (std::size_t l = 0; l <= d; ++l) {
            if (k == l)
                continue;
            for (const MultiIndex& mi : box) {
                for (const MultiIndex& ni : box) {
                    const std::vector<int>& m = mi.entries();
                    std::vector<int> shifted = ni.entries();
                    if (k > 0)
                        shifted[k - 1] += 1;
                    if (l > 0)
                        shifted[l - 1] -= 1;
                    const double n_l = l == 0 ? -s - ni.weight() : double(ni[l - 1]);
                    const double factor = l == 0 ? -params.p0_sq
                                                 : params.p0_sq / std::norm(params.p(static_cast<Eigen::Index>(l - 1)));
                    const double sm = s + mi.weight();
                    const Complex M0 = M(mi, ni);

                    double scale = 0.0;
                    auto track = [&scale](Complex x) {
                        scale = std::max(scale, std::abs(x));
                        return x;
                    };
                    const Complex shifted_value = M(m, shifted);
                    const Complex lhs = track(factor * n_l * shifted_value);
                    Complex diag = sm;
                    for (std::size_t i = 0; i < d; ++i)
                        diag += std::conj(Uh(l, i)) * Uh(k, i) * std::norm(pt(static_cast<Eigen::Index>(i))) * double(m[i]);
                    Complex rhs = track(diag * M0);
                    for (std::size_t i = 0; i < d; ++i) {
                        const Complex ubar = std::conj(Uh(l, i)) * std::norm(pt(static_cast<Eigen::Index>(i)));
                        for (std::size_t j = 0; j < d; ++j) {
                            if (i == j || m[j] == 0)
                                continue;
                            rhs += track(ubar * Uh(k, j) * double(m[j]) * M(shift(shift(m, i, 1), j, -1), ni.entries()));
                        }
                        if (m[i] > 0)
                            rhs -= track(Uh(k, i) * double(m[i]) * M(shift(m, i, -1), ni.entries()));
                        rhs -= track(sm * ubar * M(shift(m, i, 1), ni.entries()));
                    }
                    const std::string where = "k=" + std::to_string(k) + " l=" + std::to_string(l) + " " + pair_label(mi, ni);
                    res.add(lhs, rhs, scale, where);
                    if (l == 0) {
                        const Complex literal = n_l * shifted_value;
                        literal_l0.add(literal, rhs, std::max(scale, std::abs(literal)), where);
                    }
                }
            }
        }
    }
    res.store(report);
    report.metrics["literal_l0_residual"] = literal_l0.max_rel;
    report.notes.push_back("l = 0 uses left factor -|p_0|^2 n_0");
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    return report;
}

std::function<GroupElement(double)> degenerate_family(const GroupElement& g0, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const ComplexMatrix X = random_algebra_element(rng, g0.dim(), 1.0);
    return [g0, X](double eps) {
        if (eps == 0.0)
            return g0;
        return GroupElement(g0.matrix() * matrix_exp(ComplexMatrix(eps * X)));
    };
}

CheckReport check_degenerate_limit(const std::function<GroupElement(double)>& family, int sigma, int max_degree,
                                   double floor)
{
    const auto start = Clock::now();
    const GroupElement g0 = family(0.0);
    const std::size_t d = g0.dim();
    CheckReport report = base_report("degenerate_limit", d, sigma, 1.0);
    report.indices = "|m|,|n|<=" + std::to_string(max_degree);
    const MeixnerParams p0 = extract_params(g0, sigma);
    report.notes.push_back("limit pattern k=" + std::to_string(p0.k) + " l=" + std::to_string(p0.l));
    const auto box = indices_up_to(d, max_degree);

    std::vector<Complex> limit;
    for (const MultiIndex& m : box) {
        for (const MultiIndex& n : box)
            limit.push_back(matrix_coefficient(p0, m, n));
    }
    // independent expansion of the limit element
    const OperatorMatrix op = operator_matrix(g0, sigma, max_degree);
    double oracle = 0.0;
    {
        std::size_t idx = 0;
        for (const MultiIndex& m : box) {
            for (const MultiIndex& n : box) {
                oracle = std::max(oracle, std::abs(op.entry(m, n) - limit[idx]) / (1.0 + std::abs(limit[idx])));
                ++idx;
            }
        }
    }
    report.metrics["oracle_residual"] = oracle;

    const double eps_values[] = {1e-2, 1e-4, 1e-6};
    std::vector<double> residuals;
    for (double eps : eps_values) {
        const MeixnerParams pe = extract_params(family(eps), sigma);
        double worst = 0.0;
        std::size_t idx = 0;
        for (const MultiIndex& m : box) {
            for (const MultiIndex& n : box) {
                worst = std::max(worst, std::abs(matrix_coefficient(pe, m, n) - limit[idx]) / (1.0 + std::abs(limit[idx])));
                ++idx;
            }
        }
        std::ostringstream key;
        key << "residual_eps_" << eps;
        report.metrics[key.str()] = worst;
        residuals.push_back(worst);
    }
    // statistic: 10 * r(eps_next) / r(eps), so a 10x reduction per step maps to 1
    double worst_step = 0.0;
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        if (residuals[i] < floor)
            continue;
        worst_step = std::max(worst_step, 10.0 * residuals[i] / std::max(residuals[i - 1], 1e-300));
    }
    if (residuals.size() >= 2 && residuals[0] > 0 && residuals.back() > 0)
        report.metrics["observed_order"] = std::log10(residuals[0] / residuals.back()) / std::log10(1e-2 / 1e-6);
    report.max_abs_residual = residuals.back();
    report.max_rel_residual = worst_step;
    report.status = (worst_step <= 1.0 && oracle < 1e-9) ? CheckStatus::pass : CheckStatus::fail;
    if (oracle >= 1e-9)
        report.notes.push_back("limit value disagrees with the operator expansion");
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

CheckReport check_unitarity(const GroupElement& g, int sigma, int N, int safe_degree, double tol)
{
    const auto start = Clock::now();
    const std::size_t d = g.dim();
    CheckReport report = base_report("unitarity", d, sigma, tol);
    report.indices = "|n|<=" + std::to_string(safe_degree);
    report.truncation = N;
    const OperatorMatrix op = operator_matrix(g, sigma, N);
    const OperatorMatrix inv = operator_matrix(inverse(g), sigma, N);
    const ComplexMatrix& V = op.values();

    double max_norm = 0.0;
    for (Eigen::Index col = 0; col < V.cols(); ++col)
        max_norm = std::max(max_norm, V.col(col).squaredNorm());
    report.metrics["max_column_norm_sq"] = max_norm;

    const auto safe = static_cast<Eigen::Index>(indices_up_to(d, safe_degree).size());
    const ComplexMatrix block = V.leftCols(safe);
    const ComplexMatrix gram = block.adjoint() * block;
    const double gram_dev = max_abs(gram - ComplexMatrix::Identity(safe, safe));
    report.metrics["gram_deviation"] = gram_dev;
    // column norms deficit of the first excluded shell: a tail estimate
    double tail = 0.0;
    for (Eigen::Index col = safe; col < V.cols(); ++col)
        tail = std::max(tail, 1.0 - V.col(col).squaredNorm());
    report.tail_estimate = tail;

    double dual = 0.0;
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
        for (Eigen::Index j = 0; j < V.cols(); ++j)
            dual = std::max(dual, std::abs(V(i, j) - std::conj(inv.values()(j, i))) / (1.0 + std::abs(V(i, j))));
    }
    report.metrics["dual_residual"] = dual;

    report.max_abs_residual = std::max(gram_dev, dual);
    report.max_rel_residual = report.max_abs_residual;
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    if (max_norm > 1.0 + 1e-10) {
        report.status = CheckStatus::fail;
        report.notes.push_back("column norm exceeds 1");
    }
    return report;
}

CheckReport check_dual_path(const MeixnerParams& params, int max_degree, double tol)
{
    const auto start = Clock::now();
    const std::size_t d = params.dim();
    CheckReport report = base_report("dual_path", d, params.sigma, tol);
    report.indices = "|m|,|n|<=" + std::to_string(max_degree);
    Residuals res;
    const auto box = indices_up_to(d, max_degree);
    for (const MultiIndex& m : box) {
        for (const MultiIndex& n : box) {
            Complex hyper, genfun;
            if (params.generic()) {
                hyper = meixner_hyper(m, n, params.U, params.sigma);
                genfun = meixner_genfun(m, n, params.U, params.sigma);
            } else {
                hyper = degenerate_meixner(m, n, params.U, params.sigma, params.k, params.l);
                genfun = degenerate_meixner_genfun(m, n, params.U, params.sigma, params.k, params.l);
            }
            res.add(hyper, genfun, std::abs(hyper), pair_label(m, n));
        }
    }
    res.store(report);
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    return report;
}

CheckReport check_representation(const GroupElement& g, int sigma, int max_degree, double tol)
{
    const auto start = Clock::now();
    const std::size_t d = g.dim();
    CheckReport report = base_report("representation", d, sigma, tol);
    report.indices = "|m|,|n|<=" + std::to_string(max_degree);
    report.truncation = max_degree;
    const MeixnerParams params = extract_params(g, sigma);
    const OperatorMatrix op = operator_matrix(g, sigma, max_degree);
    Residuals res;
    for (const MultiIndex& m : op.basis()) {
        for (const MultiIndex& n : op.basis()) {
            const Complex value = matrix_coefficient(params, m, n);
            res.add(value, op.entry(m, n), std::abs(value), pair_label(m, n));
        }
    }
    res.store(report);
    if (!params.generic())
        report.notes.push_back("degenerate pattern k=" + std::to_string(params.k) + " l=" + std::to_string(params.l));
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    return report;
}

Complex hyp2f1_terminating(int m, int n, double c, Complex x)
{
    using LComplex = std::complex<long double>;
    const LComplex xl(x.real(), x.imag());
    LComplex term = 1.0L;
    LComplex total = 1.0L;
    for (int j = 0; j < std::min(m, n); ++j) {
        term *= static_cast<long double>(j - m) * static_cast<long double>(j - n)
                / ((static_cast<long double>(c) + j) * (j + 1.0L)) * xl;
        total += term;
    }
    return Complex(static_cast<double>(total.real()), static_cast<double>(total.imag()));
}

CheckReport check_classical_reduction(Complex u, double sigma, int max_degree, double tol)
{
    const auto start = Clock::now();
    CheckReport report = base_report("classical_reduction", 1, static_cast<int>(sigma), tol);
    report.indices = "m,n<=" + std::to_string(max_degree);
    ComplexMatrix U(1, 1);
    U(0, 0) = u;
    Residuals res;
    for (int m = 0; m <= max_degree; ++m) {
        for (int n = 0; n <= max_degree; ++n) {
            const Complex value = meixner_hyper(MultiIndex{m}, MultiIndex{n}, U, sigma);
            const Complex oracle = hyp2f1_terminating(m, n, sigma, 1.0 - u);
            res.add(value, oracle, std::abs(oracle), "m=" + std::to_string(m) + " n=" + std::to_string(n));
        }
    }
    res.store(report);
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    return report;
}

CheckReport check_lie_layer(const GroupElement& g, int sigma, int N)
{
    const auto start = Clock::now();
    const std::size_t d = g.dim();
    CheckReport report = base_report("lie_layer", d, sigma, 1e-10);
    report.indices = "basis of size " + std::to_string((d + 1) * (d + 1) - 1);
    report.truncation = N;
    const auto basis = lie_basis(d);

    double closed = 0.0;
    double star_compat = 0.0;
    double adjoint = 0.0;
    for (const LieBasisElement& X : basis) {
        const ConjugatedGenerator direct = conjugate_generator(g, X);
        closed = std::max(closed, max_abs(direct.coordinates - conjugated_generator_closed_form(g, X)));

        const auto [coef, Xs] = star(X);
        const ConjugatedGenerator conj_star = conjugate_generator(g, Xs);
        star_compat = std::max(star_compat, max_abs(star(direct.matrix) - coef * conj_star.matrix));

        const ComplexMatrix A = lie_action_matrix(X, d, sigma, N);
        const ComplexMatrix As = lie_action_matrix(Xs, d, sigma, N);
        adjoint = std::max(adjoint, max_abs(ComplexMatrix(A.adjoint()) - coef * As));
    }
    report.metrics["closed_form_residual"] = closed;
    report.metrics["star_residual"] = star_compat;
    report.metrics["adjoint_residual"] = adjoint;
    report.max_abs_residual = std::max({closed, star_compat, adjoint});
    report.max_rel_residual = closed;
    report.wall_time_ms = elapsed_ms(start);
    report.finalize();
    if (star_compat >= 1e-12) {
        report.status = CheckStatus::fail;
        report.notes.push_back("conjugation does not commute with the star map to 1e-12");
    }
    if (adjoint != 0.0) {
        report.status = CheckStatus::fail;
        report.notes.push_back("action matrices of X and X* are not exact adjoints");
    }
    return report;
}

CheckReport check_integral(const GroupElement& g, int sigma, int max_degree, std::size_t samples, std::uint64_t seed,
                           double se_limit)
{
    const auto start = Clock::now();
    const std::size_t d = g.dim();
    CheckReport report = base_report("integral", d, sigma, 3.0);
    report.seed = seed;
    report.indices = "|m|,|n|<=" + std::to_string(max_degree);
    const MeixnerParams params = extract_params(g, sigma);
    std::vector<std::pair<MultiIndex, MultiIndex>> pairs;
    const auto box = indices_up_to(d, max_degree);
    for (const MultiIndex& m : box) {
        for (const MultiIndex& n : box)
            pairs.emplace_back(m, n);
    }
    const auto estimates = integral_matrix_coefficients(g, sigma, pairs, samples, seed);
    double worst_z = 0.0;
    double worst_se = 0.0;
    double worst_abs = 0.0;
    std::string where;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const Complex exact = matrix_coefficient(params, pairs[q].first, pairs[q].second);
        const double err = std::abs(estimates[q].value - exact);
        const double z = err / std::max(estimates[q].standard_error, 1e-300);
        worst_abs = std::max(worst_abs, err);
        worst_se = std::max(worst_se, estimates[q].standard_error);
        if (z > worst_z) {
            worst_z = z;
            where = pair_label(pairs[q].first, pairs[q].second);
        }
    }
    report.max_abs_residual = worst_abs;
    report.max_rel_residual = worst_z;
    report.metrics["samples"] = static_cast<double>(samples);
    report.metrics["max_standard_error"] = worst_se;
    if (!where.empty())
        report.notes.push_back("largest z-score at " + where);
    report.wall_time_ms = elapsed_ms(start);
    report.status = (worst_z <= 3.0 && worst_se < se_limit) ? CheckStatus::pass : CheckStatus::fail;
    return report;
}

} // namespace mkit
