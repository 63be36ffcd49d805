// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_LEDGER_HPP
#define ESTIMA_LEDGER_HPP

#include <estima/util.hpp>

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace estima {

// Addresses are interned; ids are assigned in first-appearance order over the
// (height, file order) transaction sequence, inputs before outputs within a
// transaction. The id therefore doubles as the first-appearance rank.
using AddrId = std::uint32_t;
inline constexpr AddrId kOpReturnAddr = std::numeric_limits<AddrId>::max();

inline constexpr std::uint32_t kMaxHeight = 0x7fffffffu;

struct TxSlot {
    AddrId addr = kOpReturnAddr;
    Satoshi value = 0;
    std::int32_t payload = -1; // index into Ledger::payload(); OP_RETURN outputs only

    bool is_op_return() const { return addr == kOpReturnAddr; }
};

struct Transaction {
    std::string txid;
    std::uint32_t height = 0;
    Timestamp timestamp = 0;
    std::vector<TxSlot> inputs; // empty iff coinbase
    std::vector<TxSlot> outputs;

    bool is_coinbase() const { return inputs.empty(); }
};

// Distinct input addresses of a transaction (a tx can use multiple input
// slots for the same address).
std::vector<AddrId> distinct_input_addresses(const Transaction& tx);

// One deposit per (txid, recipient): output slots paying the same recipient
// in one transaction collapse into a single deposit with summed value.
struct Deposit {
    std::uint32_t tx_index = 0;
    AddrId recipient = 0;
    Satoshi value = 0;
};

// Wire-level transaction record, before interning/validation. Produced by the
// JSONL loader and by the synthetic generator.
struct SlotRecord {
    std::string addr;        // empty for OP_RETURN slots
    Satoshi value = 0;
    bool op_return = false;
    std::string payload_hex; // OP_RETURN slots only
};

struct TxRecord {
    std::string txid;
    std::uint32_t height = 0;
    std::string time; // "YYYY-MM-DDTHH:MM:SSZ"
    std::vector<SlotRecord> inputs;
    std::vector<SlotRecord> outputs;
};

// Immutable after construction; all queries are read-only and safe for
// concurrent use. Queries parameterized by a height H consider only
// transactions with height <= H.
class Ledger {
public:
    // One JSON object per line in the transaction wire format:
    // {"txid":"...","height":N,"time":"YYYY-MM-DDTHH:MM:SSZ",
    //  "inputs":[{"addr":"...","value":N}],
    //  "outputs":[{"addr":"...","value":N}|{"op_return":"<hex>","value":N}]}
    static Ledger load(const std::string& path, bool strict_validation = false);
    static Ledger parse(std::string_view jsonl, bool strict_validation = false);
    static Ledger from_records(std::vector<TxRecord> records, bool strict_validation = false);

    std::span<const Transaction> transactions() const { return txs_; }
    const Transaction& tx(std::uint32_t index) const { return txs_[index]; }
    std::size_t tx_count() const { return txs_.size(); }

    std::size_t address_count() const { return addr_text_.size(); }
    const std::string& address_text(AddrId id) const { return addr_text_[id]; }
    std::optional<AddrId> find_address(std::string_view text) const;

    // Number of transactions with height <= height (they form a prefix).
    std::uint32_t txs_at(std::uint32_t height) const;
    // Number of addresses whose first appearance is at height <= height
    // (they are exactly the ids [0, n)).
    std::uint32_t addresses_at(std::uint32_t height) const;

    // Index of the transaction in which the address first appears.
    std::uint32_t first_tx_of(AddrId id) const { return first_tx_[id]; }
    // True when the first appearance was in an input slot (ties within a
    // transaction count the input first).
    bool first_seen_as_input(AddrId id) const { return first_is_input_[id] != 0; }
    // True when the address's first appearance is an output of this exact
    // transaction, i.e. it was never used before ("fresh").
    bool is_fresh_output(AddrId id, std::uint32_t tx_index) const {
        return first_tx_[id] == tx_index && !first_seen_as_input(id);
    }

    const std::vector<std::uint8_t>& payload(std::int32_t index) const {
        return payloads_[static_cast<std::size_t>(index)];
    }

    // Every deposit whose recipient is in `addresses` and tx height <= height,
    // sorted by (height, txid, recipient).
    std::vector<Deposit> deposits_to(const std::vector<std::string>& addresses,
                                     std::uint32_t height) const;
    std::vector<Deposit> deposits_to_ids(std::span<const AddrId> ids,
                                         std::uint32_t height) const;

    // Every tx with height <= height having at least one input slot spending
    // from `addresses`; no duplicates; ordered by (height, file order).
    std::vector<std::uint32_t> withdrawals_from(const std::vector<std::string>& addresses,
                                                std::uint32_t height) const;
    std::vector<std::uint32_t> withdrawals_from_ids(std::span<const AddrId> ids,
                                                    std::uint32_t height) const;

    // Per-address tx index lists (sorted, unique), capped by txs_at(height)
    // via binary search by the caller or the helpers above.
    std::span<const std::uint32_t> deposit_txs(AddrId id) const { return deposit_txs_[id]; }
    std::span<const std::uint32_t> spending_txs(AddrId id) const { return spend_txs_[id]; }

    // Summed output value paid to `recipient` by transaction `tx_index`.
    Satoshi paid_to(std::uint32_t tx_index, AddrId recipient) const;

private:
    std::vector<Transaction> txs_;
    std::deque<std::string> addr_text_; // deque: stable storage for the view keys below
    std::unordered_map<std::string_view, AddrId> addr_ids_;
    std::vector<std::uint32_t> first_tx_;
    std::vector<std::uint8_t> first_is_input_;
    std::vector<std::vector<std::uint8_t>> payloads_;
    std::vector<std::vector<std::uint32_t>> deposit_txs_;
    std::vector<std::vector<std::uint32_t>> spend_txs_;
};

} // namespace estima

#endif // ESTIMA_LEDGER_HPP
