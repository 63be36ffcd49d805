// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/clustering.hpp>

#include <algorithm>
#include <map>

namespace estima {

namespace {

// Union-find with path halving + union by size.
struct UnionFind {
    std::vector<AddrId> parent;
    std::vector<std::uint32_t> size;

    explicit UnionFind(std::uint32_t n) : parent(n), size(n, 1) {
        for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
    }

    AddrId find(AddrId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(AddrId a, AddrId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

CoinJoinVerdict detect_coinjoin(const Transaction& tx) {
    CoinJoinVerdict verdict;
    if (tx.outputs.size() < 3) return verdict; // need k >= 2 matches plus change
    std::vector<Satoshi> values;
    values.reserve(tx.outputs.size());
    for (const auto& slot : tx.outputs) values.push_back(slot.value);
    std::sort(values.begin(), values.end());
    std::uint32_t best_count = 0;
    Satoshi best_value = 0;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        if (j - i > best_count) { // ties keep the smallest value
            best_count = static_cast<std::uint32_t>(j - i);
            best_value = values[i];
        }
        i = j;
    }
    if (best_count < 2) return verdict;
    if (tx.outputs.size() < best_count + 1) return verdict;
    if (distinct_input_addresses(tx).size() < best_count) return verdict;
    verdict.is_coinjoin = true;
    verdict.matched_output_value = best_value;
    verdict.participant_count = best_count;
    return verdict;
}

ClusterIndex finalize_union_find(std::vector<AddrId> parent) {
    std::uint32_t n = static_cast<std::uint32_t>(parent.size());
    ClusterIndex index;
    index.leader_.assign(n, 0);
    index.size_.assign(n, 0);
    // Roots first so every path resolves in one step; the leader is the
    // smallest member id, which is reached before any larger member.
    std::vector<AddrId> leader(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        AddrId root = i;
        while (parent[root] != root) root = parent[root];
        // Compress the walked path.
        AddrId cur = i;
        while (parent[cur] != root) {
            AddrId next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        leader[i] = root;
    }
    // Smallest member id per root: ids are scanned in increasing order, so the
    // first visitor of each root is its smallest member.
    std::vector<AddrId> smallest(n, n);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (smallest[leader[i]] == n) smallest[leader[i]] = i;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        index.leader_[i] = smallest[leader[i]];
        ++index.size_[index.leader_[i]];
    }
    index.cluster_count_ = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (index.leader_[i] == i) ++index.cluster_count_;
    }
    return index;
}

ClusterIndex::Entry ClusterIndex::entry_of(AddrId id) const {
    if (id >= leader_.size()) {
        return {(1ull << 32) + id, 1};
    }
    AddrId leader = leader_[id];
    return {leader, size_[leader]};
}

ClusterIndex::Entry ClusterIndex::fresh_singleton(std::string_view addr) {
    return {(1ull << 32) + (fnv1a64(addr) >> 32), 1};
}

ClusterIndex::Entry ClusterIndex::entry_of_text(const Ledger& ledger,
                                                std::string_view addr) const {
    auto id = ledger.find_address(addr);
    if (!id) return fresh_singleton(addr);
    return entry_of(*id); // ids past the height cutoff resolve to fresh singletons
}

namespace {

UnionFind mi_union_find(const Ledger& ledger, std::uint32_t height, bool exclude_coinjoin) {
    UnionFind uf(ledger.addresses_at(height));
    std::uint32_t tx_limit = ledger.txs_at(height);
    for (std::uint32_t ti = 0; ti < tx_limit; ++ti) {
        const Transaction& tx = ledger.tx(ti);
        if (tx.is_coinbase()) continue;
        if (exclude_coinjoin && detect_coinjoin(tx).is_coinjoin) continue;
        auto ids = distinct_input_addresses(tx);
        for (std::size_t i = 1; i < ids.size(); ++i) uf.unite(ids[0], ids[i]);
    }
    return uf;
}

} // namespace

ClusterIndex build_mi_clusters(const Ledger& ledger, std::uint32_t height,
                               bool exclude_coinjoin) {
    return finalize_union_find(std::move(mi_union_find(ledger, height, exclude_coinjoin).parent));
}

std::optional<AddrId> identify_change_output(const Ledger& ledger, std::uint32_t tx_index) {
    const Transaction& tx = ledger.tx(tx_index);
    AddrId first = kOpReturnAddr, second = kOpReturnAddr;
    std::size_t slots = 0;
    for (const auto& slot : tx.outputs) {
        if (slot.is_op_return()) continue;
        ++slots;
        if (slots == 1) {
            first = slot.addr;
        } else if (slots == 2) {
            second = slot.addr;
        } else {
            return std::nullopt;
        }
    }
    if (slots != 2 || first == second) return std::nullopt;
    bool first_fresh = ledger.is_fresh_output(first, tx_index);
    bool second_fresh = ledger.is_fresh_output(second, tx_index);
    if (first_fresh == second_fresh) return std::nullopt;
    return first_fresh ? first : second;
}

ClusterIndex build_mica_clusters(const Ledger& ledger, std::uint32_t height,
                                 bool exclude_coinjoin) {
    UnionFind uf = mi_union_find(ledger, height, exclude_coinjoin);
    std::uint32_t tx_limit = ledger.txs_at(height);
    for (std::uint32_t ti = 0; ti < tx_limit; ++ti) {
        const Transaction& tx = ledger.tx(ti);
        if (tx.is_coinbase()) continue;
        if (exclude_coinjoin && detect_coinjoin(tx).is_coinjoin) continue;
        if (auto change = identify_change_output(ledger, ti)) {
            uf.unite(tx.inputs.front().addr, *change);
        }
    }
    return finalize_union_find(std::move(uf.parent));
}

std::set<std::set<std::string>> membership_sets(const ClusterIndex& index,
                                                const Ledger& ledger) {
    std::map<std::uint64_t, std::set<std::string>> by_cluster;
    for (std::uint32_t id = 0; id < index.address_count(); ++id) {
        by_cluster[index.entry_of(id).id].insert(ledger.address_text(id));
    }
    std::set<std::set<std::string>> out;
    for (auto& [cid, members] : by_cluster) out.insert(std::move(members));
    return out;
}

} // namespace estima
