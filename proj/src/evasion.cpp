// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/evasion.hpp>

#include <algorithm>
#include <cstdio>
#include <set>

namespace estima {

WithdrawalKind classify_withdrawal(const Transaction& tx) {
    return distinct_input_addresses(tx).size() == 1 ? WithdrawalKind::one_to_n
                                                    : WithdrawalKind::multi_input;
}

bool proportion_less(const Proportion& a, const Proportion& b) {
    return static_cast<unsigned __int128>(a.num) * b.den <
           static_cast<unsigned __int128>(b.num) * a.den;
}

bool proportion_equal(const Proportion& a, const Proportion& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
}

namespace {

WithdrawalStats stats_over(const std::string& group, bool expanded_scope,
                           const std::vector<std::uint32_t>& withdrawals, const Ledger& ledger) {
    WithdrawalStats stats;
    stats.group = group;
    stats.expanded_scope = expanded_scope;
    stats.total = withdrawals.size();
    for (std::uint32_t ti : withdrawals) {
        if (classify_withdrawal(ledger.tx(ti)) == WithdrawalKind::one_to_n) ++stats.one_to_n;
    }
    return stats;
}

std::string render_proportion(const Proportion& p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f",
                  p.den == 0 ? 0.0 : static_cast<double>(p.num) / static_cast<double>(p.den));
    return buf;
}

} // namespace

EvasionResult evasion_stats(const std::map<std::string, SeedSet>& groups, const Ledger& ledger,
                            std::uint32_t height, const ClusterIndex& mi, const TagTable& tags,
                            OwPolicy ow_policy, std::uint32_t ow_threshold) {
    EvasionResult result;
    std::vector<Proportion> seed_proportions;

    std::uint32_t tx_limit = ledger.txs_at(height);
    for (const auto& [label, seeds] : groups) {
        // Seeds = entries with deposits at the height; drop online wallets.
        std::vector<AddrId> remaining;
        for (const auto& entry : seeds.entries()) {
            auto id = ledger.find_address(entry.address);
            if (!id) continue;
            const auto deposit_txs = ledger.deposit_txs(*id);
            auto end = std::lower_bound(deposit_txs.begin(), deposit_txs.end(), tx_limit);
            bool has_deposit = false;
            for (auto it = deposit_txs.begin(); it != end; ++it) {
                if (ledger.paid_to(*it, *id) > 0) {
                    has_deposit = true;
                    break;
                }
            }
            if (!has_deposit) continue;
            auto verdict =
                classify_cluster(mi.entry_of(*id).id, mi, ledger, tags, ow_policy, ow_threshold);
            if (!verdict.is_service) remaining.push_back(*id);
        }
        std::sort(remaining.begin(), remaining.end());
        remaining.erase(std::unique(remaining.begin(), remaining.end()), remaining.end());

        auto seed_stats = stats_over(label, false, ledger.withdrawals_from_ids(remaining, height),
                                     ledger);

        // Expanded scope: the union of the MI clusters of the remaining seeds.
        std::set<std::uint64_t> wanted;
        for (AddrId id : remaining) wanted.insert(mi.entry_of(id).id);
        std::vector<AddrId> expanded;
        if (!wanted.empty()) {
            std::uint32_t n = mi.address_count();
            for (AddrId id = 0; id < n; ++id) {
                if (wanted.contains(mi.entry_of(id).id)) expanded.push_back(id);
            }
        }
        auto expanded_stats = stats_over(label, true, ledger.withdrawals_from_ids(expanded, height),
                                         ledger);

        if (seed_stats.total == 0) {
            result.no_withdrawal_groups.push_back(label);
        } else {
            seed_proportions.push_back(seed_stats.proportion());
        }
        result.stats.push_back(std::move(seed_stats));
        result.stats.push_back(std::move(expanded_stats));
    }

    std::sort(seed_proportions.begin(), seed_proportions.end(), proportion_less);
    std::uint64_t total = seed_proportions.size();
    std::uint64_t counted = 0;
    for (std::size_t i = 0; i < seed_proportions.size();) {
        std::size_t j = i;
        while (j < seed_proportions.size() &&
               proportion_equal(seed_proportions[i], seed_proportions[j])) {
            ++j;
        }
        counted += j - i;
        result.cdf.push_back({seed_proportions[i], counted, total});
        i = j;
    }
    return result;
}

std::string render_evasion_stats_csv(const EvasionResult& result) {
    std::string out = "group,scope,withdrawals,one_to_n,proportion\n";
    for (const auto& stats : result.stats) {
        out += stats.group;
        out += ',';
        out += stats.expanded_scope ? "expanded" : "seeds";
        out += ',';
        out += std::to_string(stats.total);
        out += ',';
        out += std::to_string(stats.one_to_n);
        out += ',';
        out += stats.total == 0 ? "no-withdrawals" : render_proportion(stats.proportion());
        out += '\n';
    }
    return out;
}

std::string render_evasion_cdf_csv(const EvasionResult& result) {
    std::string out = "proportion,cumulative_fraction\n";
    for (const auto& row : result.cdf) {
        out += render_proportion(row.proportion);
        out += ',';
        out += render_proportion({row.groups_at_or_below, row.groups_total});
        out += '\n';
    }
    return out;
}

} // namespace estima
