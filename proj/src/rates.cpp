// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/rates.hpp>

namespace estima {

RateTable RateTable::load(const std::string& path) {
    return parse(read_file(path));
}

RateTable RateTable::parse(std::string_view csv) {
    std::vector<std::pair<Day, Cents>> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find('\n', start);
        std::string_view line =
            csv.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (!line.empty() && !(line_no == 1 && line == "date,usd_per_btc")) {
            auto fields = split_csv(line);
            if (fields.size() != 2) {
                throw InputError("rates line " + std::to_string(line_no) + ": malformed row");
            }
            auto day = parse_date(fields[0]);
            if (!day) {
                throw InputError("rates line " + std::to_string(line_no) + ": unparseable date \"" +
                                 fields[0] + "\"");
            }
            auto cents = parse_cents(fields[1]);
            if (!cents || *cents <= 0) {
                throw InputError("rates line " + std::to_string(line_no) + ": non-positive rate \"" +
                                 fields[1] + "\"");
            }
            rows.emplace_back(*day, *cents);
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return from_rows(std::move(rows));
}

RateTable RateTable::from_rows(std::vector<std::pair<Day, Cents>> rows) {
    RateTable table;
    for (const auto& [day, cents] : rows) {
        if (cents <= 0) throw InputError("rates: non-positive rate for " + format_date(day));
        if (!table.rates_.emplace(day, cents).second) {
            throw InputError("rates: duplicate date " + format_date(day));
        }
    }
    return table;
}

std::optional<Cents> RateTable::rate_on(Day day) const {
    auto it = rates_.find(day);
    if (it == rates_.end()) return std::nullopt;
    return it->second;
}

std::optional<Cents> RateTable::rate_before(Day day) const {
    auto it = rates_.lower_bound(day);
    if (it == rates_.begin()) return std::nullopt;
    --it;
    return it->second;
}

Cents usd_cents_for(Satoshi sats, Cents cents_per_btc) {
    using int128 = __int128;
    int128 numerator = static_cast<int128>(sats) * static_cast<int128>(cents_per_btc);
    int128 q = numerator / kSatoshisPerBtc;
    int128 r = numerator % kSatoshisPerBtc;
    int128 twice = r * 2;
    if (twice > kSatoshisPerBtc || (twice == kSatoshisPerBtc && (q & 1))) ++q;
    return static_cast<Cents>(q);
}

namespace {

Cents rate_for(const RateTable& table, Day day, RateFallback fallback) {
    if (auto rate = table.rate_on(day)) return *rate;
    if (fallback == RateFallback::previous_day) {
        if (auto rate = table.rate_before(day)) return *rate;
    }
    throw InputError("no conversion rate for " + format_date(day));
}

} // namespace

Conversion convert(std::span<const Deposit> deposits, const Ledger& ledger,
                   const RateTable& table, UsdMode mode, RateFallback fallback) {
    Conversion result;
    result.per_deposit.reserve(deposits.size());
    std::optional<Cents> fixed_rate;
    if (mode.fixed) fixed_rate = rate_for(table, mode.fixed_day, fallback);
    for (const auto& deposit : deposits) {
        Cents rate = fixed_rate
                         ? *fixed_rate
                         : rate_for(table, day_of(ledger.tx(deposit.tx_index).timestamp), fallback);
        Cents usd = usd_cents_for(deposit.value, rate);
        result.per_deposit.push_back(usd);
        result.total += usd;
    }
    return result;
}

} // namespace estima
