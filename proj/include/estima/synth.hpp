// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_SYNTH_HPP
#define ESTIMA_SYNTH_HPP

#include <estima/ledger.hpp>
#include <estima/tags.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace estima::synth {

// Portable fixture RNG (xorshift64*), so fixtures reproduce bit-for-bit
// across implementations. Not for cryptographic use.
struct Xorshift64Star {
    std::uint64_t state;

    explicit Xorshift64Star(std::uint64_t seed)
        : state(seed != 0 ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545f4914f6cdd1dull;
    }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Drafted transactions reuse the wire-level record type; serialization is
// byte-deterministic.
std::string to_jsonl(std::span<const TxRecord> drafts);
void write_jsonl(const std::string& path, std::span<const TxRecord> drafts);
Ledger build_ledger(std::vector<TxRecord> drafts, bool strict_validation = false);

enum class Topology { direct_multi_input, aggregated_one_to_n };

struct CampaignSpec {
    std::string name = "camp";
    std::uint64_t victims = 10;            // paid victims
    double reuse_probability = 0.0;        // payment-address reuse across victims
    std::vector<Satoshi> ransom_values = {3'000'000}; // assigned round-robin
    Topology topology = Topology::direct_multi_input;
    std::uint64_t collect_batch = 0;       // direct_multi_input: addresses per collection (0 = all)
    std::uint32_t service_cluster_size = 0; // 0 = none; else cluster members incl. the hosted seed
    std::uint64_t service_deposit_count = 0; // unrelated deposits into the service cluster
    Satoshi service_deposit_value = 1'000'000;
    bool key_release = false;              // one release tx per victim payment
    std::uint32_t release_address_count = 0;
    Satoshi release_value = 5460;
    std::uint64_t seed_sample_size = 1;    // seeds handed to the estimator
    std::uint64_t rng_seed = 1;
    Day start_day = 19018;                 // 2022-01-26
    Day end_day = 19300;

    static CampaignSpec from_json(std::string_view json_text);
    std::string to_json() const;
};

struct VictimPayment {
    std::string address;
    Satoshi value = 0;
    Day day = 0;
};

struct GroundTruth {
    std::vector<std::string> payment_addresses; // true payment addresses
    std::vector<std::string> owner_addresses;   // payment + aggregation + collector addresses
    std::vector<std::string> seeds;             // the sample handed to the estimator
    std::vector<std::string> release_addresses; // when key release is simulated
    std::vector<VictimPayment> victim_payments;
    Satoshi true_revenue = 0; // sum of victim payments
    Satoshi seed_revenue = 0; // victim payments into the sampled seeds only
    std::vector<TagRecord> tags;

    std::string to_json() const;
    static GroundTruth from_json(std::string_view json_text);
};

struct Campaign {
    std::vector<TxRecord> drafts;
    GroundTruth truth;
};

// Deterministic given the spec (including the rng seed).
Campaign gen_campaign_drafts(const CampaignSpec& spec);
std::pair<Ledger, GroundTruth> gen_campaign(const CampaignSpec& spec);

// The two reference withdrawal topologies: payments to S1,S2,P1,P2 collected
// either through one multi-input tx (a) or through per-address aggregators
// A1..A4 (b), both into collector C. Seeds are {S1, S2}.
Campaign gen_fig1a_drafts();
Campaign gen_fig1b_drafts();
std::pair<Ledger, GroundTruth> gen_fig1a();
std::pair<Ledger, GroundTruth> gen_fig1b();

// Arbitrary small ledgers for property tests: mixed coinbase, generic,
// CoinJoin-shaped, key-release-shaped and OP_RETURN-bearing transactions.
std::vector<TxRecord> gen_random_ledger(std::uint64_t seed, std::size_t max_txs);

// Naive reference MI clustering: repeated pairwise merging until fixpoint.
// Intentionally independent of the union-find implementation. Bounded to
// small ledgers.
std::set<std::set<std::string>> oracle_mi(const Ledger& ledger, std::uint32_t height,
                                          bool exclude_coinjoin = true);

// Revenue read straight from the ground truth, independent of the estimator.
Satoshi oracle_revenue(const GroundTruth& truth);

} // namespace estima::synth

#endif // ESTIMA_SYNTH_HPP
