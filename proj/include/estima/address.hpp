// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_ADDRESS_HPP
#define ESTIMA_ADDRESS_HPP

#include <string_view>

namespace estima {

enum class AddressEncoding {
    invalid,
    base58check, // P2PKH / P2SH, 25-byte payload with double-SHA256 checksum
    bech32,      // segwit v0
    bech32m,     // segwit v1+
};

// Checksum-level validation of a Bitcoin address. Total function.
//
// base58check strings must decode to exactly 25 bytes (version + hash160 +
// 4-byte checksum). bech32/bech32m strings must satisfy the usual structural
// rules (charset, length, no mixed case, valid polymod); for the bc/tb/bcrt
// prefixes the witness version/program constraints are enforced as well,
// including the version/encoding pairing (v0 -> bech32, v1+ -> bech32m).
AddressEncoding classify_address(std::string_view text);

bool validate_btc_address(std::string_view text);

} // namespace estima

#endif // ESTIMA_ADDRESS_HPP
