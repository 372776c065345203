#include "mkit/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mkit/meixner.hpp"

namespace mkit {

const std::vector<std::string>& campaign_checks()
{
    static const std::vector<std::string> names{
        "orthogonality",   "duality",          "sum_identity",   "tensor_identity", "difference_equation",
        "raising_lowering", "degenerate_limit", "unitarity",      "dual_path",       "representation",
        "classical_reduction", "lie_layer",     "integral"};
    return names;
}

std::vector<CampaignEntry> parse_campaign(const json& j)
{
    const json* list = &j;
    if (j.is_object() && j.contains("checks"))
        list = &j.at("checks");
    if (!list->is_array())
        throw std::invalid_argument("campaign: expected an array of check entries");
    std::vector<CampaignEntry> out;
    for (const json& e : *list) {
        try {
            CampaignEntry entry;
            entry.check = e.at("check").get<std::string>();
            const auto& names = campaign_checks();
            if (std::find(names.begin(), names.end(), entry.check) == names.end())
                throw std::invalid_argument("unknown check '" + entry.check + "'");
            entry.d = e.at("d").get<std::size_t>();
            entry.sigma = e.at("sigma").get<int>();
            entry.seed = e.value("seed", std::uint64_t{1});
            entry.indices = e.value("indices", 2);
            if (e.contains("tol"))
                entry.tol = e.at("tol").get<double>();
            entry.scale = e.value("scale", 0.3);
            if (e.contains("zero_b"))
                entry.zero_b = e.at("zero_b").get<std::size_t>();
            if (e.contains("zero_c"))
                entry.zero_c = e.at("zero_c").get<std::size_t>();
            entry.samples = e.value("samples", std::size_t{1000000});
            entry.trunc = e.value("trunc", 16);
            entry.safe = e.value("safe", 3);
            entry.shell_cap = e.value("shell_cap", kDefaultShellCap);
            if (entry.d < 1 || entry.d > 6)
                throw std::invalid_argument("d must be in 1..6");
            if (entry.sigma < static_cast<int>(entry.d) + 1)
                throw std::invalid_argument("sigma must be >= d+1");
            if (entry.indices < 0 || entry.trunc < 0 || entry.safe < 0 || entry.shell_cap < 1)
                throw std::invalid_argument("indices, trunc and safe must be nonnegative and shell_cap positive");
            out.push_back(entry);
        } catch (const json::exception& ex) {
            throw std::invalid_argument("campaign entry " + e.dump() + ": " + ex.what());
        } catch (const std::invalid_argument& ex) {
            throw std::invalid_argument("campaign entry " + e.dump() + ": " + ex.what());
        }
    }
    return out;
}

json campaign_to_json(const std::vector<CampaignEntry>& entries)
{
    json out = json::array();
    for (const CampaignEntry& e : entries) {
        json j{{"check", e.check}, {"d", e.d}, {"sigma", e.sigma}, {"seed", e.seed}, {"indices", e.indices},
               {"scale", e.scale}};
        if (e.tol)
            j["tol"] = *e.tol;
        if (e.zero_b)
            j["zero_b"] = *e.zero_b;
        if (e.zero_c)
            j["zero_c"] = *e.zero_c;
        if (e.check == "integral")
            j["samples"] = e.samples;
        if (e.check == "unitarity") {
            j["trunc"] = e.trunc;
            j["safe"] = e.safe;
            j["shell_cap"] = e.shell_cap;
        }
        out.push_back(j);
    }
    return out;
}

std::vector<CampaignEntry> default_campaign()
{
    std::vector<CampaignEntry> out;
    auto add = [&out](std::string check, std::size_t d, int sigma, std::uint64_t seed, int indices) -> CampaignEntry& {
        CampaignEntry e;
        e.check = std::move(check);
        e.d = d;
        e.sigma = sigma;
        e.seed = seed;
        e.indices = indices;
        out.push_back(e);
        return out.back();
    };
    for (std::size_t d = 1; d <= 3; ++d) {
        const int s = static_cast<int>(d) + 2;
        add("dual_path", d, s, 1, 4);
        add("representation", d, s, 2, 4);
        add("duality", d, s, 3, 4);
        add("difference_equation", d, s, 4, 4);
        add("raising_lowering", d, s, 5, 3);
        add("sum_identity", d, s, 6, 2);
        add("lie_layer", d, s, 7, 6);
        add("tensor_identity", d, 2 * s, 8, 3);
    }
    for (std::size_t d = 1; d <= 2; ++d) {
        add("orthogonality", d, static_cast<int>(d) + 2, 9, 3);
        add("unitarity", d, static_cast<int>(d) + 2, 10, 0).scale = 0.15;
        add("integral", d, static_cast<int>(d) + 2, 11, 2).samples = 200000;
    }
    add("orthogonality", 2, 4, 12, 2).zero_b = 1;
    add("duality", 2, 4, 13, 4).zero_c = 1;
    add("difference_equation", 3, 5, 14, 3).zero_b = 2;
    add("degenerate_limit", 2, 4, 15, 2).zero_b = 1;
    auto& both = add("degenerate_limit", 3, 5, 16, 2);
    both.zero_b = 1;
    both.zero_c = 2;
    add("classical_reduction", 1, 3, 17, 9);
    return out;
}

GroupElement campaign_group(const CampaignEntry& entry)
{
    GroupElement g = random_element(entry.seed, entry.d, entry.scale);
    if (entry.zero_b || entry.zero_c)
        g = rotate_to_zero_tails(g, entry.zero_b.value_or(entry.d), entry.zero_c.value_or(entry.d));
    return g;
}

namespace {

/// Worst-of merge for sweeps that run one check per sub-case.
void merge_into(CheckReport& total, const CheckReport& part)
{
    total.max_abs_residual = std::max(total.max_abs_residual, part.max_abs_residual);
    if (part.max_rel_residual > total.max_rel_residual) {
        total.max_rel_residual = part.max_rel_residual;
        total.notes = part.notes;
    }
    if (part.status == CheckStatus::fail)
        total.status = CheckStatus::fail;
    else if (part.status == CheckStatus::inconclusive && total.status == CheckStatus::pass)
        total.status = CheckStatus::inconclusive;
    total.wall_time_ms += part.wall_time_ms;
}

CheckReport run_tensor_sweep(const CampaignEntry& entry, double tol)
{
    const std::size_t d = entry.d;
    const int first = static_cast<int>(d) + 1;
    if (entry.sigma < 2 * first)
        throw std::invalid_argument("tensor_identity: sigma must be >= 2(d+1) to split into two parts");
    const std::vector<int> sigmas{first, entry.sigma - first};
    const ComplexMatrix U = extract_params(campaign_group(entry), entry.sigma).U;
    std::mt19937_64 rng(entry.seed);
    std::uniform_int_distribution<int> pick(0, entry.indices);

    CheckReport total;
    total.identity = "tensor_identity";
    total.d = d;
    total.sigma = entry.sigma;
    total.tolerance = tol;
    total.indices = "|m|<=" + std::to_string(entry.indices) + " n_i entries<=" + std::to_string(entry.indices);
    for (const MultiIndex& m : indices_up_to(d, entry.indices)) {
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<MultiIndex> parts;
            for (std::size_t i = 0; i < sigmas.size(); ++i) {
                std::vector<int> v(d);
                for (int& x : v)
                    x = pick(rng);
                parts.emplace_back(v);
            }
            merge_into(total, check_tensor_identity(sigmas, U, m, parts, tol));
        }
    }
    return total;
}

} // namespace

CheckReport run_entry(const CampaignEntry& entry)
{
    const std::string& c = entry.check;
    auto tol_or = [&entry](double fallback) { return entry.tol.value_or(fallback); };
    CheckReport report;
    if (c == "tensor_identity") {
        report = run_tensor_sweep(entry, tol_or(kFiniteTolerance));
    } else if (c == "classical_reduction") {
        if (entry.d != 1)
            throw std::invalid_argument("classical_reduction is a d = 1 check");
        std::mt19937_64 rng(entry.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const Complex u(normal(rng), normal(rng));
        report = check_classical_reduction(u, entry.sigma, entry.indices, tol_or(1e-12));
    } else {
        const GroupElement g = campaign_group(entry);
        if (c == "orthogonality") {
            report = check_orthogonality(extract_params(g, entry.sigma), entry.indices, tol_or(kTruncatedTolerance),
                                         entry.shell_cap);
        } else if (c == "duality") {
            report = check_duality(extract_params(g, entry.sigma), entry.indices, tol_or(kFiniteTolerance));
        } else if (c == "sum_identity") {
            CampaignEntry other = entry;
            other.seed = entry.seed + 1000003;
            report = check_sum_identity(g, campaign_group(other), entry.sigma, entry.indices, tol_or(kTruncatedTolerance));
        } else if (c == "difference_equation") {
            report = check_difference_equation(extract_params(g, entry.sigma), entry.indices, tol_or(kFiniteTolerance));
        } else if (c == "raising_lowering") {
            report = check_raising_lowering(extract_params(g, entry.sigma), entry.indices, tol_or(kFiniteTolerance));
        } else if (c == "degenerate_limit") {
            if (!entry.zero_b && !entry.zero_c)
                throw std::invalid_argument("degenerate_limit needs zero_b or zero_c");
            report = check_degenerate_limit(degenerate_family(g, entry.seed), entry.sigma, entry.indices);
        } else if (c == "unitarity") {
            report = check_unitarity(g, entry.sigma, entry.trunc, entry.safe, tol_or(kTruncatedTolerance));
        } else if (c == "dual_path") {
            report = check_dual_path(extract_params(g, entry.sigma), entry.indices, tol_or(1e-9));
        } else if (c == "representation") {
            report = check_representation(g, entry.sigma, entry.indices, tol_or(1e-9));
        } else if (c == "lie_layer") {
            report = check_lie_layer(g, entry.sigma, entry.indices);
            if (entry.tol) {
                report.tolerance = *entry.tol;
                if (report.status == CheckStatus::pass)
                    report.finalize();
            }
        } else if (c == "integral") {
            report = check_integral(g, entry.sigma, entry.indices, entry.samples, entry.seed);
        } else {
            throw std::invalid_argument("unknown check '" + c + "'");
        }
    }
    report.seed = entry.seed;
    return report;
}

std::vector<CheckReport> run_campaign(const std::vector<CampaignEntry>& entries, unsigned jobs)
{
    std::vector<CheckReport> reports(entries.size());
    std::vector<std::exception_ptr> errors(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            try {
                reports[i] = run_entry(entries[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(entries.size(), 1))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors) {
        if (e)
            std::rethrow_exception(e);
    }

    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (reports[a].identity != reports[b].identity)
            return reports[a].identity < reports[b].identity;
        return reports[a].seed < reports[b].seed;
    });
    std::vector<CheckReport> sorted;
    sorted.reserve(order.size());
    for (std::size_t i : order)
        sorted.push_back(std::move(reports[i]));
    return sorted;
}

int campaign_exit_code(const std::vector<CheckReport>& reports)
{
    bool inconclusive = false;
    for (const CheckReport& r : reports) {
        if (r.status == CheckStatus::fail)
            return 1;
        inconclusive = inconclusive || r.status == CheckStatus::inconclusive;
    }
    return inconclusive ? 4 : 0;
}

std::string summary_table(const std::vector<CheckReport>& reports, bool include_timing)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %2s %5s %6s %-26s %11s %9s %-12s", "identity", "d", "sigma", "seed",
                  "indices", "rel_resid", "tol", "status");
    out << line << (include_timing ? "   time_ms" : "") << '\n';
    std::size_t passed = 0;
    for (const CheckReport& r : reports) {
        std::snprintf(line, sizeof line, "%-20s %2zu %5d %6llu %-26s %11.3e %9.1e %-12s", r.identity.c_str(), r.d,
                      r.sigma, static_cast<unsigned long long>(r.seed), r.indices.substr(0, 26).c_str(),
                      r.max_rel_residual, r.tolerance, to_string(r.status).c_str());
        out << line;
        if (include_timing) {
            std::snprintf(line, sizeof line, " %9.1f", r.wall_time_ms);
            out << line;
        }
        out << '\n';
        passed += r.passed() ? 1 : 0;
    }
    out << passed << "/" << reports.size() << " checks passed\n";
    return out.str();
}

} // namespace mkit
