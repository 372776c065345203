#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mkit/io.hpp"
#include "mkit/verify.hpp"

namespace mkit {

/// One campaign line: {check, d, sigma, seed, indices, tol} plus optional
/// fixture knobs (scale, zero_b, zero_c, samples, trunc, safe, shell_cap).
struct CampaignEntry {
    std::string check;
    std::size_t d = 2;
    int sigma = 3;
    std::uint64_t seed = 1;
    int indices = 2;
    std::optional<double> tol;
    double scale = 0.3;
    std::optional<std::size_t> zero_b; ///< keep b_1..b_k, zero the rest
    std::optional<std::size_t> zero_c; ///< keep c_1..c_l, zero the rest
    std::size_t samples = 1000000;
    int trunc = 16;
    int safe = 3;
    int shell_cap = kDefaultShellCap; ///< orthogonality only
};

/// Names accepted in the "check" field.
const std::vector<std::string>& campaign_checks();

/// Parses a JSON array (or {"checks": [...]}). Throws std::invalid_argument on malformed entries.
std::vector<CampaignEntry> parse_campaign(const json& j);
json campaign_to_json(const std::vector<CampaignEntry>& entries);

/// A small sweep touching every check once or twice.
std::vector<CampaignEntry> default_campaign();

/// Seeded random element for the entry, rotated to the requested zero pattern.
GroupElement campaign_group(const CampaignEntry& entry);

CheckReport run_entry(const CampaignEntry& entry);

/// Runs entries on `jobs` threads; the result is ordered by (identity, seed)
/// with input order breaking ties, independent of scheduling.
std::vector<CheckReport> run_campaign(const std::vector<CampaignEntry>& entries, unsigned jobs = 1);

/// 0 all pass, 1 any fail, 4 inconclusive without failures.
int campaign_exit_code(const std::vector<CheckReport>& reports);

/// Fixed-width text table; wall times only when include_timing.
std::string summary_table(const std::vector<CheckReport>& reports, bool include_timing = false);

} // namespace mkit
