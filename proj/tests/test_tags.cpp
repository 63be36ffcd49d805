// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/tags.hpp>

#include "test_support.hpp"

#include <doctest.h>

using namespace estima;
using namespace estima::test;

namespace {

// chain of multi-input txs forming one cluster of `size` addresses e0..e{n-1}
Ledger cluster_ledger(std::size_t size) {
    std::vector<TxRecord> records;
    for (std::size_t i = 0; i + 1 < size; ++i) {
        records.push_back(tx("t" + std::to_string(i), static_cast<std::uint32_t>(i + 1),
                             {in("e" + std::to_string(i), 5), in("e" + std::to_string(i + 1), 5)},
                             {out("sink" + std::to_string(i), 10)}));
    }
    return ledger_of(std::move(records));
}

} // namespace

TEST_CASE("tag table loading") {
    auto table = TagTable::parse("address,owner,category\nX,btc-e,exchange\n");
    REQUIRE(table.find("X") != nullptr);
    CHECK(table.find("X")->owner == "btc-e");
    CHECK(table.find("X")->category == TagCategory::exchange);
    CHECK(table.find("Y") == nullptr);

    CHECK(TagTable::parse("address,owner,category\n").empty());
    CHECK_THROWS_WITH_AS(TagTable::parse("address,owner,category\nX,a,exchange\nX,b,mixer\n"),
                         "tags: duplicate address X", InputError);
    CHECK_THROWS_AS(TagTable::parse("address,owner,category\nX,a,casino\n"), InputError);
    CHECK_THROWS_AS(TagTable::parse("X,a,exchange\n"), InputError);
}

TEST_CASE("classify_cluster verdicts") {
    auto ledger = cluster_ledger(4); // e0..e3 one cluster
    auto index = build_mi_clusters(ledger, kMaxHeight);
    auto cluster = index.entry_of_text(ledger, "e0");
    REQUIRE(cluster.size == 4);

    SUBCASE("tagged cluster") {
        auto tags = TagTable::from_records({{"e2", "btc-e", TagCategory::exchange}});
        auto verdict = classify_cluster(cluster.id, index, ledger, tags, OwPolicy::tag_only, 1000);
        CHECK(verdict.is_service);
        CHECK(verdict.reason == ServiceReason::tagged);
        REQUIRE(verdict.matched_tags.size() == 1);
        CHECK(verdict.matched_tags[0].owner == "btc-e");
    }
    SUBCASE("size threshold") {
        auto big = cluster_ledger(1200);
        auto big_index = build_mi_clusters(big, kMaxHeight);
        auto big_cluster = big_index.entry_of_text(big, "e0");
        REQUIRE(big_cluster.size == 1200);
        TagTable tags;
        auto verdict = classify_cluster(big_cluster.id, big_index, big, tags,
                                        OwPolicy::tag_plus_threshold, 1000);
        CHECK(verdict.is_service);
        CHECK(verdict.reason == ServiceReason::size_threshold);
        auto tag_only = classify_cluster(big_cluster.id, big_index, big, tags,
                                         OwPolicy::tag_only, 1000);
        CHECK(!tag_only.is_service);
    }
    SUBCASE("small untagged cluster") {
        TagTable tags;
        auto verdict =
            classify_cluster(cluster.id, index, ledger, tags, OwPolicy::tag_plus_threshold, 1000);
        CHECK(!verdict.is_service);
        CHECK(verdict.reason == ServiceReason::none);
        CHECK(verdict.matched_tags.empty());
    }
    SUBCASE("mixer, gambling and service categories all trigger; other does not") {
        for (auto category : {TagCategory::mixer, TagCategory::gambling, TagCategory::service}) {
            auto tags = TagTable::from_records({{"e1", "svc", category}});
            CHECK(classify_cluster(cluster.id, index, ledger, tags, OwPolicy::tag_only, 1000)
                      .is_service);
        }
        auto tags = TagTable::from_records({{"e1", "svc", TagCategory::other}});
        CHECK(!classify_cluster(cluster.id, index, ledger, tags, OwPolicy::tag_only, 1000)
                   .is_service);
    }
    SUBCASE("tags on unseen addresses never match a ledger cluster") {
        auto tags = TagTable::from_records({{"nowhere", "svc", TagCategory::exchange}});
        CHECK(!classify_cluster(cluster.id, index, ledger, tags, OwPolicy::tag_only, 1000)
                   .is_service);
    }
}

TEST_CASE("adding tags never flips a service verdict off") {
    auto ledger = cluster_ledger(6);
    auto index = build_mi_clusters(ledger, kMaxHeight);
    auto cluster = index.entry_of_text(ledger, "e0");

    std::vector<TagRecord> rows;
    bool was_service = false;
    for (int i = 0; i < 6; ++i) {
        rows.push_back({"e" + std::to_string(i), "svc", TagCategory::exchange});
        auto tags = TagTable::from_records(rows);
        auto verdict = classify_cluster(cluster.id, index, ledger, tags, OwPolicy::tag_only, 1000);
        CHECK(verdict.is_service);
        CHECK(verdict.matched_tags.size() == rows.size());
        if (was_service) CHECK(verdict.is_service);
        was_service = verdict.is_service;
    }
}

TEST_CASE("tag_only verdicts are a subset of tag_plus_threshold verdicts") {
    auto ledger = cluster_ledger(50);
    auto index = build_mi_clusters(ledger, kMaxHeight);
    auto tags = TagTable::from_records({{"e7", "svc", TagCategory::mixer}});
    for (std::uint32_t threshold : {2u, 10u, 51u}) {
        for (AddrId id = 0; id < index.address_count(); ++id) {
            auto cid = index.entry_of(id).id;
            auto narrow = classify_cluster(cid, index, ledger, tags, OwPolicy::tag_only, threshold);
            auto wide =
                classify_cluster(cid, index, ledger, tags, OwPolicy::tag_plus_threshold, threshold);
            if (narrow.is_service) CHECK(wide.is_service);
        }
    }
}
