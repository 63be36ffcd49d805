// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/evasion.hpp>
#include <estima/synth.hpp>

#include "test_support.hpp"

#include <doctest.h>

using namespace estima;
using namespace estima::test;

namespace {

std::map<std::string, SeedSet> one_group(const std::string& label,
                                         std::vector<std::string> addresses) {
    std::vector<SeedEntry> entries;
    for (auto& address : addresses) entries.push_back({std::move(address), label});
    std::map<std::string, SeedSet> groups;
    groups.emplace(label, SeedSet::from_entries(std::move(entries)));
    return groups;
}

} // namespace

TEST_CASE("classify_withdrawal looks at distinct input addresses only") {
    auto ledger = ledger_of({
        tx("multi_slot", 1, {in("A", 5), in("A", 7), in("A", 2)}, {out("X", 14)}),
        tx("two_addr", 2, {in("A", 5), in("B", 5)}, {out("Y", 10)}),
    });
    CHECK(classify_withdrawal(ledger.tx(0)) == WithdrawalKind::one_to_n);
    CHECK(classify_withdrawal(ledger.tx(1)) == WithdrawalKind::multi_input);
}

TEST_CASE("fig1 withdrawals classify as the figure shows") {
    auto [la, ta] = synth::gen_fig1a();
    auto collection = static_cast<std::uint32_t>(la.tx_count() - 1);
    CHECK(classify_withdrawal(la.tx(collection)) == WithdrawalKind::multi_input);

    auto [lb, tb] = synth::gen_fig1b();
    for (std::uint32_t ti : lb.withdrawals_from({"S1", "S2"}, kMaxHeight)) {
        CHECK(classify_withdrawal(lb.tx(ti)) == WithdrawalKind::one_to_n);
    }
}

TEST_CASE("a group whose only withdrawal is 1-to-1 has proportion one") {
    auto ledger = ledger_of({
        tx("pay", 1, {in("V", 10)}, {out("S", 10)}),
        tx("move", 2, {in("S", 10)}, {out("D", 10)}),
    });
    TagTable tags;
    auto mi = build_mi_clusters(ledger, kMaxHeight);
    auto result = evasion_stats(one_group("g", {"S"}), ledger, kMaxHeight, mi, tags,
                                OwPolicy::tag_plus_threshold, 1000);
    REQUIRE(result.stats.size() == 2);
    CHECK(result.stats[0].total == 1);
    CHECK(result.stats[0].one_to_n == 1);
    CHECK(proportion_equal(result.stats[0].proportion(), {1, 1}));
    CHECK(result.no_withdrawal_groups.empty());
    REQUIRE(result.cdf.size() == 1);
    CHECK(result.cdf[0].groups_at_or_below == 1);
    CHECK(result.cdf[0].groups_total == 1);
}

TEST_CASE("groups without withdrawals are listed apart and excluded from the CDF") {
    auto ledger = ledger_of({tx("pay", 1, {in("V", 10)}, {out("S", 10)})});
    TagTable tags;
    auto mi = build_mi_clusters(ledger, kMaxHeight);
    auto result = evasion_stats(one_group("quiet", {"S"}), ledger, kMaxHeight, mi, tags,
                                OwPolicy::tag_plus_threshold, 1000);
    REQUIRE(result.no_withdrawal_groups.size() == 1);
    CHECK(result.no_withdrawal_groups[0] == "quiet");
    CHECK(result.cdf.empty());
    CHECK(result.stats[0].total == 0);
    auto csv = render_evasion_stats_csv(result);
    CHECK(csv.find("no-withdrawals") != std::string::npos);
}

TEST_CASE("online-wallet seeds are removed before counting withdrawals") {
    // S2 sits in a tagged service cluster; only S1's withdrawal counts.
    auto ledger = ledger_of({
        tx("pay1", 1, {in("V1", 10)}, {out("S1", 10)}),
        tx("pay2", 1, {in("V2", 10)}, {out("S2", 10)}),
        tx("svc", 2, {in("S2", 10), in("E1", 5)}, {out("EH", 15)}),
        tx("move", 3, {in("S1", 10)}, {out("D", 10)}),
    });
    auto tags = TagTable::from_records({{"E1", "exch", TagCategory::exchange}});
    auto mi = build_mi_clusters(ledger, kMaxHeight);
    auto result = evasion_stats(one_group("g", {"S1", "S2"}), ledger, kMaxHeight, mi, tags,
                                OwPolicy::tag_plus_threshold, 1000);
    CHECK(result.stats[0].total == 1); // S2's service co-spend not counted
    CHECK(result.stats[0].one_to_n == 1);
}

TEST_CASE("seed-scope withdrawals are a subset of expanded-scope withdrawals") {
    auto [ledger, truth] = synth::gen_fig1a();
    TagTable tags;
    auto mi = build_mi_clusters(ledger, kMaxHeight);
    auto result = evasion_stats(one_group("fig", {"S1", "S2"}), ledger, kMaxHeight, mi, tags,
                                OwPolicy::tag_plus_threshold, 1000);
    REQUIRE(result.stats.size() == 2);
    CHECK(!result.stats[0].expanded_scope);
    CHECK(result.stats[1].expanded_scope);
    CHECK(result.stats[0].total <= result.stats[1].total);
}

TEST_CASE("ten-group fixture: forty percent of groups sit at proportion one") {
    // 4 groups withdraw only through 1-to-n moves (fig1b shape), 6 through one
    // multi-input collection (fig1a shape).
    std::vector<TxRecord> drafts;
    std::map<std::string, SeedSet> groups;
    for (int g = 0; g < 10; ++g) {
        synth::CampaignSpec spec;
        spec.name = "g" + std::to_string(g);
        spec.victims = 4;
        spec.ransom_values = {3'000'000};
        spec.topology = g < 4 ? synth::Topology::aggregated_one_to_n
                              : synth::Topology::direct_multi_input;
        spec.seed_sample_size = 4;
        spec.rng_seed = 100 + static_cast<std::uint64_t>(g);
        auto campaign = synth::gen_campaign_drafts(spec);
        for (auto& draft : campaign.drafts) drafts.push_back(std::move(draft));
        std::vector<SeedEntry> entries;
        for (const auto& seed : campaign.truth.seeds) entries.push_back({seed, spec.name});
        groups.emplace(spec.name, SeedSet::from_entries(std::move(entries)));
    }
    auto ledger = synth::build_ledger(std::move(drafts));
    TagTable tags;
    auto mi = build_mi_clusters(ledger, kMaxHeight);
    auto result = evasion_stats(groups, ledger, kMaxHeight, mi, tags,
                                OwPolicy::tag_plus_threshold, 1000);

    REQUIRE(!result.cdf.empty());
    const auto& last = result.cdf.back();
    CHECK(proportion_equal(last.proportion, {1, 1}));
    CHECK(last.groups_at_or_below == 10);
    CHECK(last.groups_total == 10);
    std::uint64_t below_one =
        result.cdf.size() >= 2 ? result.cdf[result.cdf.size() - 2].groups_at_or_below : 0;
    CHECK(last.groups_at_or_below - below_one == 4); // 40% of the groups at 1.0

    // CDF is non-decreasing and ends at 1.0
    for (std::size_t i = 1; i < result.cdf.size(); ++i) {
        CHECK(result.cdf[i - 1].groups_at_or_below <= result.cdf[i].groups_at_or_below);
        CHECK(proportion_less(result.cdf[i - 1].proportion, result.cdf[i].proportion));
    }
    auto csv = render_evasion_cdf_csv(result);
    CHECK(csv.find("1.000000,1.000000") != std::string::npos);
}
