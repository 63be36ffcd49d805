// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/address.hpp>

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace estima {

namespace {

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t size) {
    std::array<std::uint8_t, 32> out{};
    unsigned len = 0;
    EVP_Digest(data, size, out.data(), &len, EVP_sha256(), nullptr);
    return out;
}

// ---- base58check ----

const char* kBase58Alphabet = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

int base58_digit(char c) {
    const char* p = std::strchr(kBase58Alphabet, c);
    return (p && c != '\0') ? static_cast<int>(p - kBase58Alphabet) : -1;
}

bool is_base58check(std::string_view text) {
    if (text.empty() || text.size() > 90) return false;
    std::vector<std::uint8_t> num; // big-endian byte expansion
    std::size_t leading_ones = 0;
    bool counting = true;
    for (char c : text) {
        int d = base58_digit(c);
        if (d < 0) return false;
        if (counting && c == '1') {
            ++leading_ones;
            continue;
        }
        counting = false;
        int carry = d;
        for (auto it = num.rbegin(); it != num.rend(); ++it) {
            int v = *it * 58 + carry;
            *it = static_cast<std::uint8_t>(v & 0xff);
            carry = v >> 8;
        }
        while (carry > 0) {
            num.insert(num.begin(), static_cast<std::uint8_t>(carry & 0xff));
            carry >>= 8;
        }
    }
    std::vector<std::uint8_t> payload(leading_ones, 0);
    payload.insert(payload.end(), num.begin(), num.end());
    // P2PKH / P2SH: 1 version byte + 20 hash bytes + 4 checksum bytes.
    if (payload.size() != 25) return false;
    auto digest = sha256(payload.data(), 21);
    digest = sha256(digest.data(), digest.size());
    return std::memcmp(digest.data(), payload.data() + 21, 4) == 0;
}

// ---- bech32 / bech32m (BIP-173 / BIP-350) ----

const char* kBech32Charset = "qpzry9x8gf2tvdw0s3jn54khce6mua7l";
constexpr std::uint32_t kBech32Const = 1;
constexpr std::uint32_t kBech32mConst = 0x2bc830a3;

int bech32_digit(char c) {
    const char* p = std::strchr(kBech32Charset, c);
    return (p && c != '\0') ? static_cast<int>(p - kBech32Charset) : -1;
}

std::uint32_t bech32_polymod(const std::vector<std::uint8_t>& values) {
    static const std::uint32_t gen[5] = {0x3b6a57b2, 0x26508e6d, 0x1ea119fa, 0x3d4233dd,
                                         0x2a1462b3};
    std::uint32_t chk = 1;
    for (std::uint8_t v : values) {
        std::uint8_t top = static_cast<std::uint8_t>(chk >> 25);
        chk = (chk & 0x1ffffff) << 5 ^ v;
        for (int i = 0; i < 5; ++i) {
            if (top >> i & 1) chk ^= gen[i];
        }
    }
    return chk;
}

bool convert_5_to_8(const std::vector<std::uint8_t>& in, std::vector<std::uint8_t>& out) {
    std::uint32_t acc = 0;
    int bits = 0;
    for (std::uint8_t v : in) {
        acc = acc << 5 | v;
        bits += 5;
        while (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>(acc >> bits & 0xff));
        }
    }
    // No padding allowed; leftover bits must be zero.
    if (bits >= 5) return false;
    return (acc << (8 - bits) & 0xff) == 0 || bits == 0;
}

AddressEncoding classify_bech32(std::string_view text) {
    if (text.size() < 8 || text.size() > 90) return AddressEncoding::invalid;
    bool lower = false, upper = false;
    std::string s;
    s.reserve(text.size());
    for (char c : text) {
        if (c < 33 || c > 126) return AddressEncoding::invalid;
        if (c >= 'a' && c <= 'z') lower = true;
        if (c >= 'A' && c <= 'Z') upper = true;
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower && upper) return AddressEncoding::invalid;
    auto sep = s.rfind('1');
    if (sep == std::string::npos || sep == 0 || sep + 7 > s.size()) {
        return AddressEncoding::invalid;
    }
    std::string hrp = s.substr(0, sep);
    std::vector<std::uint8_t> values;
    values.reserve(hrp.size() * 2 + 1 + s.size() - sep);
    for (char c : hrp) values.push_back(static_cast<std::uint8_t>(c) >> 5);
    values.push_back(0);
    for (char c : hrp) values.push_back(static_cast<std::uint8_t>(c) & 0x1f);
    std::vector<std::uint8_t> data;
    for (std::size_t i = sep + 1; i < s.size(); ++i) {
        int d = bech32_digit(s[i]);
        if (d < 0) return AddressEncoding::invalid;
        values.push_back(static_cast<std::uint8_t>(d));
        data.push_back(static_cast<std::uint8_t>(d));
    }
    std::uint32_t polymod = bech32_polymod(values);
    AddressEncoding enc;
    if (polymod == kBech32Const) {
        enc = AddressEncoding::bech32;
    } else if (polymod == kBech32mConst) {
        enc = AddressEncoding::bech32m;
    } else {
        return AddressEncoding::invalid;
    }
    if (hrp == "bc" || hrp == "tb" || hrp == "bcrt") {
        // Segwit address: version + program with the BIP-173/350 constraints.
        if (data.size() < 7) return AddressEncoding::invalid; // version + >=1 group + checksum
        std::uint8_t version = data[0];
        if (version > 16) return AddressEncoding::invalid;
        std::vector<std::uint8_t> program;
        std::vector<std::uint8_t> groups(data.begin() + 1, data.end() - 6);
        if (!convert_5_to_8(groups, program)) return AddressEncoding::invalid;
        if (program.size() < 2 || program.size() > 40) return AddressEncoding::invalid;
        if (version == 0 &&
            (enc != AddressEncoding::bech32 ||
             (program.size() != 20 && program.size() != 32))) {
            return AddressEncoding::invalid;
        }
        if (version != 0 && enc != AddressEncoding::bech32m) return AddressEncoding::invalid;
    }
    return enc;
}

} // namespace

AddressEncoding classify_address(std::string_view text) {
    if (text.empty()) return AddressEncoding::invalid;
    AddressEncoding enc = classify_bech32(text);
    if (enc != AddressEncoding::invalid) return enc;
    if (is_base58check(text)) return AddressEncoding::base58check;
    return AddressEncoding::invalid;
}

bool validate_btc_address(std::string_view text) {
    return classify_address(text) != AddressEncoding::invalid;
}

} // namespace estima
