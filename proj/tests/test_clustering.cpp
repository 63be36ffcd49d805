// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/clustering.hpp>
#include <estima/synth.hpp>

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace estima;
using namespace estima::test;

TEST_CASE("detect_coinjoin equal-output rule") {
    SUBCASE("four inputs, three equal outputs plus change") {
        auto ledger = ledger_of({tx("cj", 1,
                                    {in("A", 11000), in("B", 11000), in("C", 11000), in("D", 11000)},
                                    {out("O1", 10000), out("O2", 10000), out("O3", 10000),
                                     out("O4", 500), out("O5", 700)})});
        auto verdict = detect_coinjoin(ledger.tx(0));
        CHECK(verdict.is_coinjoin);
        CHECK(verdict.participant_count == 3);
        CHECK(verdict.matched_output_value == 10000);
    }
    SUBCASE("no repeated output value") {
        auto ledger = ledger_of({tx("t", 1, {in("A", 11000), in("B", 11000)},
                                    {out("O1", 10000), out("O2", 500)})});
        CHECK(!detect_coinjoin(ledger.tx(0)).is_coinjoin);
    }
    SUBCASE("single-output collection tx is not coinjoin") {
        auto [ledger, truth] = synth::gen_fig1a();
        // the collection tx is the last one
        auto collection = static_cast<std::uint32_t>(ledger.tx_count() - 1);
        CHECK(ledger.tx(collection).inputs.size() == 4);
        CHECK(!detect_coinjoin(ledger.tx(collection)).is_coinjoin);
    }
    SUBCASE("needs a change output beyond the k matched ones") {
        auto ledger = ledger_of({tx("t", 1, {in("A", 10000), in("B", 10000)},
                                    {out("O1", 10000), out("O2", 10000)})});
        CHECK(!detect_coinjoin(ledger.tx(0)).is_coinjoin);
    }
    SUBCASE("needs at least k distinct input addresses") {
        auto ledger = ledger_of({tx("t", 1, {in("A", 15000), in("A", 15000)},
                                    {out("O1", 10000), out("O2", 10000), out("O3", 500)})});
        CHECK(!detect_coinjoin(ledger.tx(0)).is_coinjoin);
    }
}

TEST_CASE("multi-input clustering is transitive") {
    auto ledger = ledger_of({tx("t1", 1, {in("A", 5), in("B", 5)}, {out("X", 10)}),
                             tx("t2", 2, {in("B", 5), in("C", 5)}, {out("Y", 10)})});
    auto sets = membership_sets(build_mi_clusters(ledger, kMaxHeight), ledger);
    std::set<std::set<std::string>> expected{{"A", "B", "C"}, {"X"}, {"Y"}};
    CHECK(sets == expected);
}

TEST_CASE("ledgers with only 1-input txs stay singleton") {
    auto ledger = ledger_of({tx("t1", 1, {in("A", 5)}, {out("X", 5)}),
                             tx("t2", 2, {in("B", 5)}, {out("Y", 5)})});
    auto index = build_mi_clusters(ledger, kMaxHeight);
    CHECK(index.cluster_count() == ledger.address_count());
}

TEST_CASE("fig1 clustering") {
    auto [la, ta] = synth::gen_fig1a();
    auto mi_a = build_mi_clusters(la, kMaxHeight);
    auto s1 = mi_a.entry_of_text(la, "S1");
    CHECK(s1.size == 4);
    CHECK(mi_a.entry_of_text(la, "S2").id == s1.id);
    CHECK(mi_a.entry_of_text(la, "P1").id == s1.id);
    CHECK(mi_a.entry_of_text(la, "P2").id == s1.id);

    auto [lb, tb] = synth::gen_fig1b();
    auto mi_b = build_mi_clusters(lb, kMaxHeight);
    CHECK(mi_b.entry_of_text(lb, "S1").size == 1);
    CHECK(mi_b.entry_of_text(lb, "S2").size == 1);
    CHECK(mi_b.entry_of_text(lb, "S1").id != mi_b.entry_of_text(lb, "S2").id);
}

TEST_CASE("cluster_of basics") {
    auto ledger = ledger_of({tx("t1", 1, {in("A", 5), in("B", 5), in("C", 5)}, {out("X", 15)})});
    auto index = build_mi_clusters(ledger, kMaxHeight);
    auto a = index.entry_of_text(ledger, "A");
    CHECK(a.size == 3);
    CHECK(index.entry_of_text(ledger, "B").id == a.id);
    CHECK(index.entry_of_text(ledger, "C").id == a.id);
    auto unseen = index.entry_of_text(ledger, "Z");
    CHECK(unseen.size == 1);
    CHECK(unseen.id != a.id);
    CHECK(unseen.id >= (1ull << 32));
}

TEST_CASE("identify_change_output freshness rule") {
    SUBCASE("one fresh, one previously used") {
        auto ledger = ledger_of({tx("t1", 1, {in("X", 10)}, {out("U", 10)}),
                                 tx("t2", 2, {in("A", 10)}, {out("F", 4), out("U", 6)})});
        auto change = identify_change_output(ledger, 1);
        REQUIRE(change.has_value());
        CHECK(ledger.address_text(*change) == "F");
    }
    SUBCASE("both outputs fresh") {
        auto ledger = ledger_of({tx("t1", 1, {in("A", 10)}, {out("F1", 4), out("F2", 6)})});
        CHECK(!identify_change_output(ledger, 0).has_value());
    }
    SUBCASE("three output addresses") {
        auto ledger = ledger_of({tx("t1", 1, {in("X", 10)}, {out("U", 10)}),
                                 tx("t2", 2, {in("A", 10)},
                                    {out("F", 4), out("U", 3), out("G", 3)})});
        CHECK(!identify_change_output(ledger, 1).has_value());
    }
    SUBCASE("an input address reused as output is not fresh") {
        auto ledger = ledger_of({tx("t1", 1, {in("X", 10)}, {out("U", 10)}),
                                 tx("t2", 2, {in("A", 10)}, {out("A", 4), out("B", 6)})});
        // A first appears as this tx's input, so only B could be fresh
        auto change = identify_change_output(ledger, 1);
        REQUIRE(change.has_value());
        CHECK(ledger.address_text(*change) == "B");
    }
    SUBCASE("op_return slots do not count toward the two-output shape") {
        auto ledger = ledger_of({tx("t1", 1, {in("X", 10)}, {out("U", 10)}),
                                 tx("t2", 2, {in("A", 10)},
                                    {out("F", 4), out("U", 6), opret("aa")})});
        auto change = identify_change_output(ledger, 1);
        REQUIRE(change.has_value());
        CHECK(ledger.address_text(*change) == "F");
    }
}

TEST_CASE("change-address expansion merges the change into the spender cluster") {
    auto ledger = ledger_of({tx("t1", 1, {in("X", 10)}, {out("U", 10)}),
                             tx("t2", 2, {in("A", 10)}, {out("F", 4), out("U", 6)})});
    auto mica = build_mica_clusters(ledger, kMaxHeight);
    CHECK(mica.entry_of_text(ledger, "A").id == mica.entry_of_text(ledger, "F").id);
    auto mi = build_mi_clusters(ledger, kMaxHeight);
    CHECK(mi.entry_of_text(ledger, "A").id != mi.entry_of_text(ledger, "F").id);
}

TEST_CASE("mica equals mi when no tx qualifies") {
    auto ledger = ledger_of({tx("t1", 1, {in("A", 5), in("B", 5)}, {out("X", 10)}),
                             tx("t2", 2, {in("C", 5)}, {out("Y", 5)})});
    CHECK(membership_sets(build_mica_clusters(ledger, kMaxHeight), ledger) ==
          membership_sets(build_mi_clusters(ledger, kMaxHeight), ledger));
}

TEST_CASE("change-address snowball merges unrelated actors") {
    // Actor 1 pays actor 2's fresh address, reusing its own address as change;
    // the freshness heuristic mistakes the payee for the change. Repeated once
    // more, three actors collapse into one cluster.
    auto ledger = ledger_of({
        tx("fund", 1, {in("X", 100)}, {out("A", 100)}),
        tx("t1", 2, {in("A", 100)}, {out("B1", 40), out("A", 60)}),
        tx("t2", 3, {in("B1", 40)}, {out("C1", 10), out("B1", 30)}),
    });
    auto mica = build_mica_clusters(ledger, kMaxHeight);
    auto a = mica.entry_of_text(ledger, "A");
    CHECK(a.id == mica.entry_of_text(ledger, "B1").id);
    CHECK(a.id == mica.entry_of_text(ledger, "C1").id);
    auto mi = build_mi_clusters(ledger, kMaxHeight);
    CHECK(mi.entry_of_text(ledger, "A").id != mi.entry_of_text(ledger, "B1").id);
}

TEST_CASE("mi equals the naive oracle on random ledgers") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto ledger = synth::build_ledger(synth::gen_random_ledger(seed, 150));
        CAPTURE(seed);
        CHECK(membership_sets(build_mi_clusters(ledger, kMaxHeight), ledger) ==
              synth::oracle_mi(ledger, kMaxHeight));
        // and at a mid height
        std::uint32_t mid = ledger.tx(static_cast<std::uint32_t>(ledger.tx_count() / 2)).height;
        CHECK(membership_sets(build_mi_clusters(ledger, mid), ledger) ==
              synth::oracle_mi(ledger, mid));
    }
}

TEST_CASE("mi partition is independent of same-height file order") {
    auto drafts = synth::gen_random_ledger(23, 100);
    auto ledger = synth::build_ledger(drafts);
    auto baseline = membership_sets(build_mi_clusters(ledger, kMaxHeight), ledger);

    // rotate records inside each height group
    std::map<std::uint32_t, std::vector<TxRecord>> by_height;
    for (auto& draft : drafts) by_height[draft.height].push_back(draft);
    std::vector<TxRecord> permuted;
    for (auto& [height, group] : by_height) {
        std::rotate(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(group.size() / 2),
                    group.end());
        for (auto& draft : group) permuted.push_back(std::move(draft));
    }
    auto shuffled = synth::build_ledger(std::move(permuted));
    CHECK(membership_sets(build_mi_clusters(shuffled, kMaxHeight), shuffled) == baseline);
}

TEST_CASE("rebuilding at the same height is idempotent") {
    auto ledger = synth::build_ledger(synth::gen_random_ledger(5, 100));
    auto a = build_mi_clusters(ledger, kMaxHeight);
    auto b = build_mi_clusters(ledger, kMaxHeight);
    REQUIRE(a.address_count() == b.address_count());
    for (AddrId id = 0; id < a.address_count(); ++id) {
        CHECK(a.entry_of(id).id == b.entry_of(id).id);
        CHECK(a.entry_of(id).size == b.entry_of(id).size);
    }
}

TEST_CASE("every mi cluster sits inside exactly one mi+ca cluster") {
    for (std::uint64_t seed : {3ull, 9ull, 31ull}) {
        auto ledger = synth::build_ledger(synth::gen_random_ledger(seed, 120));
        auto mi = build_mi_clusters(ledger, kMaxHeight);
        auto mica = build_mica_clusters(ledger, kMaxHeight);
        REQUIRE(mi.address_count() == mica.address_count());
        std::map<std::uint64_t, std::uint64_t> mi_to_mica;
        for (AddrId id = 0; id < mi.address_count(); ++id) {
            auto [it, inserted] = mi_to_mica.emplace(mi.entry_of(id).id, mica.entry_of(id).id);
            CHECK(it->second == mica.entry_of(id).id);
        }
    }
}

TEST_CASE("coinjoin-flagged txs contribute nothing to the mi partition") {
    auto drafts = synth::gen_random_ledger(41, 120);
    auto ledger = synth::build_ledger(drafts);
    auto full = membership_sets(build_mi_clusters(ledger, kMaxHeight, true), ledger);

    // drop every coinjoin-flagged tx and compare over the surviving addresses
    std::vector<TxRecord> reduced_drafts;
    {
        auto probe = synth::build_ledger(drafts);
        for (std::uint32_t ti = 0; ti < probe.tx_count(); ++ti) {
            const auto& tx = probe.tx(ti);
            if (!tx.is_coinbase() && detect_coinjoin(tx).is_coinjoin) continue;
            for (const auto& draft : drafts) {
                if (draft.txid == tx.txid) {
                    reduced_drafts.push_back(draft);
                    break;
                }
            }
        }
    }
    auto reduced = synth::build_ledger(std::move(reduced_drafts));
    auto reduced_sets = membership_sets(build_mi_clusters(reduced, kMaxHeight, true), reduced);

    std::set<std::string> surviving;
    for (AddrId id = 0; id < reduced.address_count(); ++id) {
        surviving.insert(reduced.address_text(id));
    }
    std::set<std::set<std::string>> restricted;
    for (const auto& cluster : full) {
        std::set<std::string> kept;
        for (const auto& addr : cluster) {
            if (surviving.contains(addr)) kept.insert(addr);
        }
        if (!kept.empty()) restricted.insert(std::move(kept));
    }
    CHECK(restricted == reduced_sets);
}
