// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/ledger.hpp>
#include <estima/synth.hpp>

#include "test_support.hpp"

#include <doctest.h>

#include <set>

using namespace estima;
using namespace estima::test;

TEST_CASE("single coinbase paying 50 BTC") {
    auto ledger = ledger_of({tx("cb", 1, {}, {out("A", 5'000'000'000)})});
    CHECK(ledger.tx_count() == 1);
    auto deps = deposits(ledger, {"A"});
    REQUIRE(deps.size() == 1);
    CHECK(deps[0].value == 5'000'000'000);
}

TEST_CASE("outputs above inputs rejected with the txid") {
    std::vector<TxRecord> records{tx("bad_tx", 1, {in("A", 10)}, {out("B", 11)})};
    CHECK_THROWS_WITH_AS(ledger_of(std::move(records)), "tx bad_tx: outputs exceed inputs",
                         InputError);
}

TEST_CASE("fig1a fixture shape") {
    auto [ledger, truth] = synth::gen_fig1a();
    CHECK(ledger.tx_count() == 5);
    CHECK(ledger.address_count() == 9);
    CHECK(synth::oracle_revenue(truth) == 12'000'000);
}

TEST_CASE("output slots to the same recipient collapse into one deposit") {
    auto ledger = ledger_of({tx("t", 10, {in("X", 7)}, {out("A", 3), out("A", 4)})});
    auto deps = deposits(ledger, {"A"}, 10);
    REQUIRE(deps.size() == 1);
    CHECK(deps[0].value == 7);
    CHECK(deposits(ledger, {"A"}, 9).empty());
}

TEST_CASE("fig1a deposit and withdrawal queries") {
    auto [ledger, truth] = synth::gen_fig1a();
    CHECK(deposits(ledger, {"S1", "S2"}).size() == 2);
    CHECK(ledger.withdrawals_from({"S1"}, kMaxHeight).size() == 1);
    CHECK(ledger.withdrawals_from({}, kMaxHeight).empty());
    auto [lb, truth_b] = synth::gen_fig1b();
    CHECK(lb.withdrawals_from({"S1", "S2"}, kMaxHeight).size() == 2);
}

TEST_CASE("zero-value outputs never become deposits") {
    auto ledger = ledger_of({tx("t", 1, {in("X", 5)}, {out("A", 0), out("B", 5)})});
    CHECK(deposits(ledger, {"A"}).empty());
    CHECK(deposits(ledger, {"B"}).size() == 1);
}

TEST_CASE("load errors") {
    SUBCASE("malformed line reports the line number") {
        std::string good_line =
            R"({"txid":"a","height":1,"time":"2022-01-01T00:00:00Z","inputs":[],"outputs":[{"addr":"A","value":1}]})";
        CHECK_THROWS_WITH_AS(Ledger::parse(good_line + "\nnot json\n"),
                             doctest::Contains("line 2"), InputError);
    }
    SUBCASE("duplicate txid") {
        CHECK_THROWS_WITH_AS(
            ledger_of({tx("t", 1, {in("A", 1)}, {out("B", 1)}),
                       tx("t", 2, {in("C", 1)}, {out("D", 1)})}),
            "duplicate txid: t", InputError);
    }
    SUBCASE("negative value") {
        CHECK_THROWS_AS(
            Ledger::parse(R"({"txid":"t","height":1,"time":"2022-01-01T00:00:00Z","inputs":[{"addr":"A","value":-1}],"outputs":[{"addr":"B","value":0}]})"),
            InputError);
    }
    SUBCASE("fractional value") {
        CHECK_THROWS_AS(
            Ledger::parse(R"({"txid":"t","height":1,"time":"2022-01-01T00:00:00Z","inputs":[{"addr":"A","value":1.5}],"outputs":[{"addr":"B","value":1}]})"),
            InputError);
    }
    SUBCASE("op_return in inputs") {
        CHECK_THROWS_AS(
            Ledger::parse(R"({"txid":"t","height":1,"time":"2022-01-01T00:00:00Z","inputs":[{"op_return":"aa","value":1}],"outputs":[{"addr":"B","value":1}]})"),
            InputError);
    }
    SUBCASE("whitespace in address") {
        CHECK_THROWS_AS(
            Ledger::parse(R"({"txid":"t","height":1,"time":"2022-01-01T00:00:00Z","inputs":[],"outputs":[{"addr":"a b","value":1}]})"),
            InputError);
    }
    SUBCASE("bad timestamp") {
        std::vector<TxRecord> records{tx("t", 1, {}, {out("A", 1)}, "2022-01-01")};
        CHECK_THROWS_AS(ledger_of(std::move(records)), InputError);
    }
    SUBCASE("no outputs") {
        std::vector<TxRecord> records{tx("t", 1, {in("A", 1)}, {})};
        CHECK_THROWS_AS(ledger_of(std::move(records)), InputError);
    }
}

TEST_CASE("strict validation enforces checksums") {
    auto good = R"({"txid":"t","height":1,"time":"2022-01-01T00:00:00Z","inputs":[],"outputs":[{"addr":"bc1qh6pku7gg2d6pw87z3t4f6d4rk6c48ajvsmfjjl","value":1}]})";
    CHECK_NOTHROW(Ledger::parse(good, true));
    auto bad = R"({"txid":"t","height":1,"time":"2022-01-01T00:00:00Z","inputs":[],"outputs":[{"addr":"S1","value":1}]})";
    CHECK_NOTHROW(Ledger::parse(bad, false));
    CHECK_THROWS_WITH_AS(Ledger::parse(bad, true), "invalid address checksum: S1", InputError);
}

TEST_CASE("op_return payloads are stored") {
    auto ledger = ledger_of({tx("t", 1, {in("K", 5460)}, {out("P", 5460), opret("6f6d6e6901")})});
    const auto& outputs = ledger.tx(0).outputs;
    REQUIRE(outputs.size() == 2);
    CHECK(outputs[1].is_op_return());
    CHECK(to_hex(ledger.payload(outputs[1].payload)) == "6f6d6e6901");
    // OP_RETURN is not an address: no first-appearance entry, no deposits
    CHECK(ledger.address_count() == 2);
}

TEST_CASE("height monotonicity of queries") {
    auto drafts = synth::gen_random_ledger(7, 120);
    auto ledger = synth::build_ledger(std::move(drafts));
    std::vector<std::string> all;
    for (AddrId id = 0; id < ledger.address_count(); ++id) all.push_back(ledger.address_text(id));

    auto key = [&](const Deposit& d) {
        return std::tuple(ledger.tx(d.tx_index).txid, ledger.address_text(d.recipient), d.value);
    };
    std::uint32_t max_height = ledger.tx(static_cast<std::uint32_t>(ledger.tx_count() - 1)).height;
    for (std::uint32_t h1 = 0; h1 <= max_height; h1 += 7) {
        std::uint32_t h2 = h1 + 5;
        std::set<std::tuple<std::string, std::string, Satoshi>> low, high;
        for (const auto& d : deposits(ledger, all, h1)) low.insert(key(d));
        for (const auto& d : deposits(ledger, all, h2)) high.insert(key(d));
        CHECK(std::includes(high.begin(), high.end(), low.begin(), low.end()));

        auto w1 = ledger.withdrawals_from(all, h1);
        auto w2 = ledger.withdrawals_from(all, h2);
        CHECK(std::includes(w2.begin(), w2.end(), w1.begin(), w1.end()));
    }
}

TEST_CASE("loading the same file twice gives identical results") {
    auto drafts = synth::gen_random_ledger(11, 80);
    std::string jsonl = synth::to_jsonl(drafts);
    auto a = Ledger::parse(jsonl);
    auto b = Ledger::parse(jsonl);
    REQUIRE(a.tx_count() == b.tx_count());
    REQUIRE(a.address_count() == b.address_count());
    std::vector<std::string> all;
    for (AddrId id = 0; id < a.address_count(); ++id) {
        CHECK(a.address_text(id) == b.address_text(id));
        all.push_back(a.address_text(id));
    }
    auto da = deposits(a, all);
    auto db = deposits(b, all);
    REQUIRE(da.size() == db.size());
    for (std::size_t i = 0; i < da.size(); ++i) {
        CHECK(a.tx(da[i].tx_index).txid == b.tx(db[i].tx_index).txid);
        CHECK(da[i].value == db[i].value);
    }
}

TEST_CASE("deposit sums are order-independent exact integers") {
    auto drafts = synth::gen_random_ledger(13, 60);
    auto ledger = synth::build_ledger(std::move(drafts));
    std::vector<std::string> all;
    for (AddrId id = 0; id < ledger.address_count(); ++id) all.push_back(ledger.address_text(id));
    auto deps = deposits(ledger, all);
    Satoshi forward = 0, backward = 0;
    for (const auto& d : deps) forward += d.value;
    for (auto it = deps.rbegin(); it != deps.rend(); ++it) backward += it->value;
    CHECK(forward == backward);
}
