// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_RATES_HPP
#define ESTIMA_RATES_HPP

#include <estima/ledger.hpp>
#include <estima/util.hpp>

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace estima {

// Historical BTC->USD conversion, one rate per UTC calendar date, stored as
// integer cents per BTC. Immutable after load.
class RateTable {
public:
    RateTable() = default;
    // CSV "date,usd_per_btc"; an optional "date,usd_per_btc" header is skipped.
    static RateTable load(const std::string& path);
    static RateTable parse(std::string_view csv);
    static RateTable from_rows(std::vector<std::pair<Day, Cents>> rows);

    std::optional<Cents> rate_on(Day day) const;
    // Nearest strictly-earlier date's rate; used when `day` itself is missing.
    std::optional<Cents> rate_before(Day day) const;
    bool empty() const { return rates_.empty(); }

private:
    std::map<Day, Cents> rates_;
};

enum class RateFallback { strict, previous_day };

// payment_day converts each deposit at its own day's rate; fixed_day uses one
// date for everything.
struct UsdMode {
    bool fixed = false;
    Day fixed_day = 0;

    static UsdMode payment_day() { return {}; }
    static UsdMode fixed_on(Day day) { return {true, day}; }
};

// Banker's rounding of sats * cents_per_btc / 10^8.
Cents usd_cents_for(Satoshi sats, Cents cents_per_btc);

struct Conversion {
    Cents total = 0;
    std::vector<Cents> per_deposit; // parallel to the input deposits
};

// Per deposit: usd = round_half_even(sats * rate / 10^8); the total is the
// exact integer sum of the per-deposit cents. Missing rates raise InputError
// naming the date (strict) or fall back to the nearest earlier date.
Conversion convert(std::span<const Deposit> deposits, const Ledger& ledger,
                   const RateTable& table, UsdMode mode,
                   RateFallback fallback = RateFallback::strict);

} // namespace estima

#endif // ESTIMA_RATES_HPP
