// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_CLUSTERING_HPP
#define ESTIMA_CLUSTERING_HPP

#include <estima/ledger.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace estima {

struct CoinJoinVerdict {
    bool is_coinjoin = false;
    Satoshi matched_output_value = 0;   // set when is_coinjoin
    std::uint32_t participant_count = 0; // >= 2 when is_coinjoin
};

// Equal-output CoinJoin heuristic: the most frequent output value v appears
// k >= 2 times, the tx has at least k distinct input addresses, and there are
// at least k+1 output slots (change outputs exist). Ties on the frequency are
// resolved to the smallest value, which only affects the reported
// matched_output_value. Callers pass non-coinbase transactions.
CoinJoinVerdict detect_coinjoin(const Transaction& tx);

// Partition of all addresses seen at <= H. Cluster ids are the smallest
// member's first-appearance rank, so they are deterministic given the ledger
// and the build parameters. Immutable and safe for concurrent queries.
class ClusterIndex {
public:
    struct Entry {
        std::uint64_t id = 0;
        std::uint32_t size = 1;
    };

    // Addresses never seen in the ledger at <= H resolve to a fresh singleton
    // id above the 32-bit ledger id range.
    Entry entry_of(AddrId id) const;
    Entry entry_of_text(const Ledger& ledger, std::string_view addr) const;

    std::uint32_t address_count() const { return static_cast<std::uint32_t>(leader_.size()); }
    std::uint64_t cluster_count() const { return cluster_count_; }

    static Entry fresh_singleton(std::string_view addr);

private:
    friend ClusterIndex finalize_union_find(std::vector<AddrId> parent);
    std::vector<AddrId> leader_;   // addr id -> smallest member id
    std::vector<std::uint32_t> size_; // valid at leader positions
    std::uint64_t cluster_count_ = 0;
};

// Multi-input clustering: all distinct input addresses of each non-coinbase
// transaction at <= height share one cluster, transitively. CoinJoin-flagged
// transactions contribute no unions when exclude_coinjoin is set. Addresses
// appearing only in outputs form singleton clusters.
ClusterIndex build_mi_clusters(const Ledger& ledger, std::uint32_t height,
                               bool exclude_coinjoin = true);

// Two-output freshness heuristic: if the tx has exactly two non-OP_RETURN
// output slots with distinct addresses and exactly one of them is fresh
// (first appearance is this tx's output), that fresh address is the change.
std::optional<AddrId> identify_change_output(const Ledger& ledger, std::uint32_t tx_index);

// MI partition further merged by unioning each qualifying tx's change output
// with its input addresses.
ClusterIndex build_mica_clusters(const Ledger& ledger, std::uint32_t height,
                                 bool exclude_coinjoin = true);

// Partition as address-text sets, for oracle comparison and order-independence
// checks (cluster ids are representation details; the sets are not).
std::set<std::set<std::string>> membership_sets(const ClusterIndex& index, const Ledger& ledger);

} // namespace estima

#endif // ESTIMA_CLUSTERING_HPP
