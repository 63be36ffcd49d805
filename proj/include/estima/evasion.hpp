// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_EVASION_HPP
#define ESTIMA_EVASION_HPP

#include <estima/estimator.hpp>

#include <map>
#include <string>
#include <vector>

namespace estima {

// A withdrawal is 1-to-n when it has a single distinct input address,
// regardless of its number of input slots. 1-to-n withdrawals defeat MI
// clustering.
enum class WithdrawalKind { one_to_n, multi_input };

WithdrawalKind classify_withdrawal(const Transaction& tx);

struct Proportion {
    std::uint64_t num = 0;
    std::uint64_t den = 0; // den == 0: no withdrawals

    bool defined() const { return den != 0; }
};

bool proportion_less(const Proportion& a, const Proportion& b);
bool proportion_equal(const Proportion& a, const Proportion& b);

struct WithdrawalStats {
    std::string group;
    bool expanded_scope = false; // false: withdrawals of the seeds themselves
    std::uint64_t total = 0;
    std::uint64_t one_to_n = 0;

    Proportion proportion() const { return {one_to_n, total}; }
};

struct CdfRow {
    Proportion proportion;            // distinct seed-scope proportion
    std::uint64_t groups_at_or_below = 0;
    std::uint64_t groups_total = 0;   // groups with at least one withdrawal
};

struct EvasionResult {
    std::vector<WithdrawalStats> stats;            // both scopes per group, group-sorted
    std::vector<CdfRow> cdf;                       // seed-scope proportions
    std::vector<std::string> no_withdrawal_groups; // excluded from the CDF
};

// Per group: seeds judged online wallets are removed; withdrawal stats over
// the remaining seeds and over the union of their MI clusters; CDF of the
// seed-scope 1-to-n proportions across groups with at least one withdrawal.
EvasionResult evasion_stats(const std::map<std::string, SeedSet>& groups, const Ledger& ledger,
                            std::uint32_t height, const ClusterIndex& mi, const TagTable& tags,
                            OwPolicy ow_policy, std::uint32_t ow_threshold);

std::string render_evasion_stats_csv(const EvasionResult& result);
std::string render_evasion_cdf_csv(const EvasionResult& result);

} // namespace estima

#endif // ESTIMA_EVASION_HPP
