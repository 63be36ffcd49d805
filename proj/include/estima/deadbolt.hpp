// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_DEADBOLT_HPP
#define ESTIMA_DEADBOLT_HPP

#include <estima/estimator.hpp>
#include <estima/ledger.hpp>

#include <optional>
#include <string>
#include <vector>

namespace estima {

// Key release transaction signature: one distinct input address and exactly
// three output slots which are, in any order, an OP_RETURN slot carrying the
// key, an address slot of exactly `release_value` satoshis (the payment
// address), and an address slot equal to the sending address (the change).
// The defaults generalize to other signature-style campaigns via the CLI.
struct DeadboltOptions {
    Satoshi release_value = 5460;
    bool omni_filter = true; // drop txs whose decoded payload starts with "omni"
};

struct KeyReleaseMatch {
    std::uint32_t tx_index = 0;
    AddrId key_release_address = 0;
    AddrId payment_address = 0;
    std::int32_t payload = -1;   // OP_RETURN data, index into Ledger::payload()
    bool multi_slot_input = false; // single address spent through several slots
};

std::optional<KeyReleaseMatch> match_key_release(const Ledger& ledger, std::uint32_t tx_index,
                                                 const DeadboltOptions& options = {});

struct ScanResult {
    std::vector<KeyReleaseMatch> matches;    // ordered by (height, file order)
    std::vector<AddrId> release_addresses;   // distinct, id-sorted
};

// Applies the signature to every transaction in [from_height, to_height].
// The range may be partitioned across workers; results merge in order.
ScanResult scan_signature(const Ledger& ledger, std::uint32_t from_height,
                          std::uint32_t to_height, const DeadboltOptions& options = {},
                          unsigned threads = 1);

struct KeyReleaseExpansion {
    std::vector<std::string> payment_addresses; // sorted; includes the seeds
    std::vector<std::string> release_addresses; // sorted
};

// Backward step: deposits of exactly release_value satoshis to a seed whose
// tx matches the signature reveal key release addresses. Forward step: every
// matching withdrawal of a key release address reveals a payment address.
// Repeats until no new addresses are discovered, so the expansion is
// idempotent on its own output.
KeyReleaseExpansion expand_key_release(const std::vector<std::string>& seeds,
                                       const Ledger& ledger, std::uint32_t height,
                                       const DeadboltOptions& options = {});

struct ConversionRateReport {
    std::uint64_t total_addresses = 0;
    std::uint64_t paid_addresses = 0;  // >= 1 deposit inside the value ranges
    std::uint64_t multi_payment_addresses = 0; // > 1 in-range deposit

    double rate() const {
        return total_addresses == 0 ? 0.0
                                    : static_cast<double>(paid_addresses) /
                                          static_cast<double>(total_addresses);
    }
};

// Fraction of payment addresses that received a ransom payment inside the
// expected ranges. Throws InputError on an empty address list.
ConversionRateReport conversion_rate(const std::vector<std::string>& payment_addresses,
                                     const Ledger& ledger, std::uint32_t height,
                                     const FilterRanges& ranges);

} // namespace estima

#endif // ESTIMA_DEADBOLT_HPP
