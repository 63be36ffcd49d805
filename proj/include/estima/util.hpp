// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_UTIL_HPP
#define ESTIMA_UTIL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace estima {

// Every amount in the system is an integer count of satoshis.
// BTC appears only when rendering (divide by 10^8, print 8 decimals).
using Satoshi = std::int64_t;
inline constexpr Satoshi kSatoshisPerBtc = 100'000'000;

// USD amounts are integer cents; conversion rates are integer cents per BTC.
using Cents = std::int64_t;

// UTC calendar date as days since 1970-01-01.
using Day = std::int32_t;

// Unix timestamp in seconds (UTC).
using Timestamp = std::int64_t;

// Bad user input: malformed files, inconsistent flags, unusable values.
// The CLI maps this to exit code 1 with a single-line diagnostic.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Day day_of(Timestamp ts);

// "YYYY-MM-DD" -> days since epoch.
std::optional<Day> parse_date(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ" -> unix seconds.
std::optional<Timestamp> parse_timestamp(std::string_view text);

std::string format_date(Day day);
std::string format_timestamp(Timestamp ts);

std::string format_btc(Satoshi sats);   // fixed 8 decimals
std::string format_usd(Cents cents);    // fixed 2 decimals

// Decimal with at most two fractional digits ("36654.00", "120", "99.5")
// -> integer cents. Rejects anything with more precision.
std::optional<Cents> parse_cents(std::string_view text);

// BTC (as parsed from JSON numbers) -> satoshis, rounded to the nearest.
Satoshi btc_to_satoshi(double btc);

std::optional<std::vector<std::uint8_t>> parse_hex(std::string_view text);
std::string to_hex(const std::uint8_t* data, std::size_t size);
std::string to_hex(const std::vector<std::uint8_t>& bytes);

// Plain comma split; none of the formats in this project quote fields.
std::vector<std::string> split_csv(std::string_view line);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace estima

#endif // ESTIMA_UTIL_HPP
