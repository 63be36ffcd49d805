// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/deadbolt.hpp>

#include <algorithm>
#include <set>
#include <thread>

namespace estima {

namespace {

bool payload_is_omni(const Ledger& ledger, std::int32_t payload) {
    static const std::uint8_t omni[4] = {'o', 'm', 'n', 'i'};
    const auto& bytes = ledger.payload(payload);
    return bytes.size() >= 4 && std::equal(omni, omni + 4, bytes.begin());
}

} // namespace

std::optional<KeyReleaseMatch> match_key_release(const Ledger& ledger, std::uint32_t tx_index,
                                                 const DeadboltOptions& options) {
    const Transaction& tx = ledger.tx(tx_index);
    if (tx.is_coinbase() || tx.outputs.size() != 3) return std::nullopt;
    auto inputs = distinct_input_addresses(tx);
    if (inputs.size() != 1) return std::nullopt;

    const TxSlot* op_return = nullptr;
    const TxSlot* addr_slots[2] = {nullptr, nullptr};
    std::size_t addr_count = 0;
    for (const auto& slot : tx.outputs) {
        if (slot.is_op_return()) {
            if (op_return) return std::nullopt; // exactly one OP_RETURN slot
            op_return = &slot;
        } else {
            addr_slots[addr_count++] = &slot;
        }
    }
    if (!op_return || addr_count != 2) return std::nullopt;

    AddrId sender = inputs[0];
    const TxSlot* payment = nullptr;
    if (addr_slots[0]->value == options.release_value && addr_slots[1]->addr == sender) {
        payment = addr_slots[0];
    } else if (addr_slots[1]->value == options.release_value && addr_slots[0]->addr == sender) {
        payment = addr_slots[1];
    } else {
        return std::nullopt;
    }
    if (options.omni_filter && payload_is_omni(ledger, op_return->payload)) return std::nullopt;

    KeyReleaseMatch match;
    match.tx_index = tx_index;
    match.key_release_address = sender;
    match.payment_address = payment->addr;
    match.payload = op_return->payload;
    match.multi_slot_input = tx.inputs.size() > 1;
    return match;
}

ScanResult scan_signature(const Ledger& ledger, std::uint32_t from_height,
                          std::uint32_t to_height, const DeadboltOptions& options,
                          unsigned threads) {
    if (from_height > to_height) throw InputError("scan: from-height above to-height");
    std::uint32_t begin = from_height == 0 ? 0 : ledger.txs_at(from_height - 1);
    std::uint32_t end = ledger.txs_at(to_height);

    ScanResult result;
    if (threads <= 1 || end - begin < 1024) {
        for (std::uint32_t ti = begin; ti < end; ++ti) {
            if (auto match = match_key_release(ledger, ti, options)) {
                result.matches.push_back(*match);
            }
        }
    } else {
        unsigned workers = std::min<unsigned>(threads, 64);
        std::vector<std::vector<KeyReleaseMatch>> parts(workers);
        std::vector<std::thread> pool;
        std::uint32_t chunk = (end - begin + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                std::uint32_t lo = std::min(end, begin + w * chunk);
                std::uint32_t hi = std::min(end, lo + chunk);
                for (std::uint32_t ti = lo; ti < hi; ++ti) {
                    if (auto match = match_key_release(ledger, ti, options)) {
                        parts[w].push_back(*match);
                    }
                }
            });
        }
        for (auto& worker : pool) worker.join();
        for (auto& part : parts) {
            result.matches.insert(result.matches.end(), part.begin(), part.end());
        }
    }

    std::set<AddrId> releases;
    for (const auto& match : result.matches) releases.insert(match.key_release_address);
    result.release_addresses.assign(releases.begin(), releases.end());
    return result;
}

KeyReleaseExpansion expand_key_release(const std::vector<std::string>& seeds,
                                       const Ledger& ledger, std::uint32_t height,
                                       const DeadboltOptions& options) {
    std::uint32_t tx_limit = ledger.txs_at(height);
    std::set<std::string> payments(seeds.begin(), seeds.end());
    std::set<AddrId> payment_ids;
    for (const auto& seed : seeds) {
        if (auto id = ledger.find_address(seed)) payment_ids.insert(*id);
    }
    std::set<AddrId> releases;

    // Alternate backward (payment -> release) and forward (release -> payment)
    // steps until neither set grows.
    std::vector<AddrId> fresh_payments(payment_ids.begin(), payment_ids.end());
    while (true) {
        std::vector<AddrId> fresh_releases;
        for (AddrId id : fresh_payments) {
            const auto deposit_txs = ledger.deposit_txs(id);
            auto end = std::lower_bound(deposit_txs.begin(), deposit_txs.end(), tx_limit);
            for (auto it = deposit_txs.begin(); it != end; ++it) {
                auto match = match_key_release(ledger, *it, options);
                if (match && match->payment_address == id &&
                    releases.insert(match->key_release_address).second) {
                    fresh_releases.push_back(match->key_release_address);
                }
            }
        }
        if (fresh_releases.empty()) break;
        fresh_payments.clear();
        for (AddrId release : fresh_releases) {
            const auto spends = ledger.spending_txs(release);
            auto end = std::lower_bound(spends.begin(), spends.end(), tx_limit);
            for (auto it = spends.begin(); it != end; ++it) {
                auto match = match_key_release(ledger, *it, options);
                if (match && payment_ids.insert(match->payment_address).second) {
                    fresh_payments.push_back(match->payment_address);
                }
            }
        }
        if (fresh_payments.empty()) break;
    }

    for (AddrId id : payment_ids) payments.insert(ledger.address_text(id));
    KeyReleaseExpansion out;
    out.payment_addresses.assign(payments.begin(), payments.end());
    for (AddrId id : releases) out.release_addresses.push_back(ledger.address_text(id));
    std::sort(out.release_addresses.begin(), out.release_addresses.end());
    return out;
}

ConversionRateReport conversion_rate(const std::vector<std::string>& payment_addresses,
                                     const Ledger& ledger, std::uint32_t height,
                                     const FilterRanges& ranges) {
    if (payment_addresses.empty()) {
        throw InputError("conversion rate: empty payment address list");
    }
    if (ranges.empty()) throw InputError("conversion rate: empty value ranges");
    std::set<std::string_view> unique(payment_addresses.begin(), payment_addresses.end());

    ConversionRateReport report;
    report.total_addresses = unique.size();
    for (std::string_view addr : unique) {
        auto id = ledger.find_address(addr);
        if (!id) continue;
        std::vector<AddrId> ids{*id};
        std::uint64_t in_range = 0;
        for (const auto& deposit : ledger.deposits_to_ids(ids, height)) {
            Day day = day_of(ledger.tx(deposit.tx_index).timestamp);
            if (ranges.matches(day, deposit.value)) ++in_range;
        }
        if (in_range >= 1) ++report.paid_addresses;
        if (in_range > 1) ++report.multi_payment_addresses;
    }
    return report;
}

} // namespace estima
