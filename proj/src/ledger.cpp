// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/ledger.hpp>

#include <estima/address.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

namespace estima {

namespace {

using nlohmann::json;

bool has_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

Satoshi slot_value(const json& j, std::size_t line_no) {
    const auto& v = j.at("value");
    if (!v.is_number_integer() || v.is_number_float()) {
        throw InputError("line " + std::to_string(line_no) + ": value must be an integer satoshi count");
    }
    auto value = v.get<std::int64_t>();
    if (value < 0) {
        throw InputError("line " + std::to_string(line_no) + ": negative value");
    }
    return value;
}

SlotRecord parse_slot(const json& j, bool is_input, std::size_t line_no) {
    SlotRecord slot;
    slot.value = slot_value(j, line_no);
    if (j.contains("op_return")) {
        if (is_input) {
            throw InputError("line " + std::to_string(line_no) + ": op_return slot in inputs");
        }
        slot.op_return = true;
        slot.payload_hex = j.at("op_return").get<std::string>();
        return slot;
    }
    slot.addr = j.at("addr").get<std::string>();
    if (slot.addr.empty() || has_whitespace(slot.addr)) {
        throw InputError("line " + std::to_string(line_no) + ": bad address \"" + slot.addr + "\"");
    }
    return slot;
}

TxRecord parse_line(std::string_view line, std::size_t line_no) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw InputError("line " + std::to_string(line_no) + ": malformed JSON");
    }
    try {
        TxRecord rec;
        rec.txid = j.at("txid").get<std::string>();
        if (rec.txid.empty()) {
            throw InputError("line " + std::to_string(line_no) + ": empty txid");
        }
        auto height = j.at("height").get<std::int64_t>();
        if (height < 0 || height > kMaxHeight) {
            throw InputError("line " + std::to_string(line_no) + ": height out of range");
        }
        rec.height = static_cast<std::uint32_t>(height);
        rec.time = j.at("time").get<std::string>();
        for (const auto& in : j.at("inputs")) rec.inputs.push_back(parse_slot(in, true, line_no));
        for (const auto& out : j.at("outputs")) rec.outputs.push_back(parse_slot(out, false, line_no));
        return rec;
    } catch (const json::exception& e) {
        throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
}

} // namespace

std::vector<AddrId> distinct_input_addresses(const Transaction& tx) {
    std::vector<AddrId> ids;
    ids.reserve(tx.inputs.size());
    for (const auto& slot : tx.inputs) ids.push_back(slot.addr);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

Ledger Ledger::load(const std::string& path, bool strict_validation) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open ledger file: " + path);
    std::vector<TxRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        records.push_back(parse_line(line, line_no));
    }
    return from_records(std::move(records), strict_validation);
}

Ledger Ledger::parse(std::string_view jsonl, bool strict_validation) {
    std::vector<TxRecord> records;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= jsonl.size()) {
        std::size_t end = jsonl.find('\n', start);
        std::string_view line = jsonl.substr(
            start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) records.push_back(parse_line(line, line_no));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return from_records(std::move(records), strict_validation);
}

Ledger Ledger::from_records(std::vector<TxRecord> records, bool strict_validation) {
    Ledger ledger;

    // Intra-block ordering is the file order: stable sort by height only.
    std::stable_sort(records.begin(), records.end(),
                     [](const TxRecord& a, const TxRecord& b) { return a.height < b.height; });

    std::unordered_set<std::string> checked; // strict mode: validate each address once

    auto intern = [&](const std::string& text, std::uint32_t tx_index,
                      bool is_input) -> AddrId {
        auto it = ledger.addr_ids_.find(text);
        if (it != ledger.addr_ids_.end()) return it->second;
        if (strict_validation && !checked.contains(text)) {
            if (!validate_btc_address(text)) {
                throw InputError("invalid address checksum: " + text);
            }
            checked.insert(text);
        }
        AddrId id = static_cast<AddrId>(ledger.addr_text_.size());
        ledger.addr_text_.push_back(text);
        ledger.addr_ids_.emplace(ledger.addr_text_.back(), id);
        ledger.first_tx_.push_back(tx_index);
        ledger.first_is_input_.push_back(is_input ? 1 : 0);
        ledger.deposit_txs_.emplace_back();
        ledger.spend_txs_.emplace_back();
        return id;
    };

    ledger.txs_.reserve(records.size());
    for (std::uint32_t ti = 0; ti < records.size(); ++ti) {
        TxRecord& rec = records[ti];
        auto ts = parse_timestamp(rec.time);
        if (!ts) throw InputError("tx " + rec.txid + ": bad timestamp \"" + rec.time + "\"");
        if (rec.outputs.empty()) throw InputError("tx " + rec.txid + ": no outputs");

        Transaction tx;
        tx.txid = std::move(rec.txid);
        tx.height = rec.height;
        tx.timestamp = *ts;

        Satoshi in_sum = 0;
        for (const auto& slot : rec.inputs) {
            TxSlot s;
            s.addr = intern(slot.addr, ti, true);
            s.value = slot.value;
            in_sum += slot.value;
            tx.inputs.push_back(s);
        }
        Satoshi out_sum = 0;
        for (const auto& slot : rec.outputs) {
            TxSlot s;
            s.value = slot.value;
            out_sum += slot.value;
            if (slot.op_return) {
                auto bytes = parse_hex(slot.payload_hex);
                if (!bytes) {
                    throw InputError("tx " + tx.txid + ": bad op_return payload hex");
                }
                s.payload = static_cast<std::int32_t>(ledger.payloads_.size());
                ledger.payloads_.push_back(std::move(*bytes));
            } else {
                s.addr = intern(slot.addr, ti, false);
            }
            tx.outputs.push_back(s);
        }
        if (!tx.is_coinbase() && out_sum > in_sum) {
            throw InputError("tx " + tx.txid + ": outputs exceed inputs");
        }

        for (const auto& slot : tx.inputs) {
            auto& list = ledger.spend_txs_[slot.addr];
            if (list.empty() || list.back() != ti) list.push_back(ti);
        }
        for (const auto& slot : tx.outputs) {
            if (slot.is_op_return()) continue;
            auto& list = ledger.deposit_txs_[slot.addr];
            if (list.empty() || list.back() != ti) list.push_back(ti);
        }
        ledger.txs_.push_back(std::move(tx));
    }

    std::unordered_set<std::string_view> txids;
    txids.reserve(ledger.txs_.size());
    for (const auto& tx : ledger.txs_) {
        if (!txids.insert(tx.txid).second) {
            throw InputError("duplicate txid: " + tx.txid);
        }
    }
    return ledger;
}

std::optional<AddrId> Ledger::find_address(std::string_view text) const {
    auto it = addr_ids_.find(text);
    if (it == addr_ids_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t Ledger::txs_at(std::uint32_t height) const {
    auto it = std::upper_bound(txs_.begin(), txs_.end(), height,
                               [](std::uint32_t h, const Transaction& tx) { return h < tx.height; });
    return static_cast<std::uint32_t>(it - txs_.begin());
}

std::uint32_t Ledger::addresses_at(std::uint32_t height) const {
    std::uint32_t tx_limit = txs_at(height);
    auto it = std::upper_bound(first_tx_.begin(), first_tx_.end(), tx_limit,
                               [](std::uint32_t limit, std::uint32_t first) { return limit <= first; });
    return static_cast<std::uint32_t>(it - first_tx_.begin());
}

std::vector<Deposit> Ledger::deposits_to(const std::vector<std::string>& addresses,
                                         std::uint32_t height) const {
    std::vector<AddrId> ids;
    ids.reserve(addresses.size());
    for (const auto& a : addresses) {
        if (auto id = find_address(a)) ids.push_back(*id);
    }
    return deposits_to_ids(ids, height);
}

Satoshi Ledger::paid_to(std::uint32_t tx_index, AddrId recipient) const {
    Satoshi total = 0;
    for (const auto& slot : txs_[tx_index].outputs) {
        if (!slot.is_op_return() && slot.addr == recipient) total += slot.value;
    }
    return total;
}

std::vector<Deposit> Ledger::deposits_to_ids(std::span<const AddrId> ids,
                                             std::uint32_t height) const {
    std::uint32_t tx_limit = txs_at(height);
    std::vector<Deposit> out;
    for (AddrId id : ids) {
        const auto& list = deposit_txs_[id];
        auto end = std::lower_bound(list.begin(), list.end(), tx_limit);
        for (auto it = list.begin(); it != end; ++it) {
            Satoshi value = paid_to(*it, id);
            if (value > 0) out.push_back({*it, id, value});
        }
    }
    std::sort(out.begin(), out.end(), [this](const Deposit& a, const Deposit& b) {
        const Transaction& ta = txs_[a.tx_index];
        const Transaction& tb = txs_[b.tx_index];
        if (ta.height != tb.height) return ta.height < tb.height;
        if (ta.txid != tb.txid) return ta.txid < tb.txid;
        return address_text(a.recipient) < address_text(b.recipient);
    });
    return out;
}

std::vector<std::uint32_t> Ledger::withdrawals_from(const std::vector<std::string>& addresses,
                                                    std::uint32_t height) const {
    std::vector<AddrId> ids;
    ids.reserve(addresses.size());
    for (const auto& a : addresses) {
        if (auto id = find_address(a)) ids.push_back(*id);
    }
    return withdrawals_from_ids(ids, height);
}

std::vector<std::uint32_t> Ledger::withdrawals_from_ids(std::span<const AddrId> ids,
                                                        std::uint32_t height) const {
    std::uint32_t tx_limit = txs_at(height);
    std::vector<std::uint32_t> out;
    for (AddrId id : ids) {
        const auto& list = spend_txs_[id];
        auto end = std::lower_bound(list.begin(), list.end(), tx_limit);
        out.insert(out.end(), list.begin(), end);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace estima
