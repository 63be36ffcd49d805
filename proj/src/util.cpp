// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/util.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace estima {

namespace {

bool parse_uint(std::string_view text, unsigned& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::optional<Day> make_day(unsigned y, unsigned m, unsigned d) {
    using namespace std::chrono;
    year_month_day ymd{year{static_cast<int>(y)}, month{m}, day{d}};
    if (!ymd.ok()) return std::nullopt;
    return static_cast<Day>(sys_days{ymd}.time_since_epoch().count());
}

} // namespace

Day day_of(Timestamp ts) {
    // Floor division; timestamps may in principle predate the epoch.
    Timestamp d = ts / 86400;
    if (ts % 86400 < 0) --d;
    return static_cast<Day>(d);
}

std::optional<Day> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    unsigned y, m, d;
    if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
        !parse_uint(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    return make_day(y, m, d);
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
        text[19] != 'Z') {
        return std::nullopt;
    }
    auto day = parse_date(text.substr(0, 10));
    if (!day) return std::nullopt;
    unsigned hh, mm, ss;
    if (!parse_uint(text.substr(11, 2), hh) || !parse_uint(text.substr(14, 2), mm) ||
        !parse_uint(text.substr(17, 2), ss)) {
        return std::nullopt;
    }
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    return static_cast<Timestamp>(*day) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_date(Day day) {
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{day}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(Timestamp ts) {
    Day d = day_of(ts);
    Timestamp rem = ts - static_cast<Timestamp>(d) * 86400;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "T%02u:%02u:%02uZ", static_cast<unsigned>(rem / 3600),
                  static_cast<unsigned>(rem / 60 % 60), static_cast<unsigned>(rem % 60));
    return format_date(d) + buf;
}

std::string format_btc(Satoshi sats) {
    const char* sign = sats < 0 ? "-" : "";
    unsigned long long abs = sats < 0 ? -static_cast<unsigned long long>(sats)
                                      : static_cast<unsigned long long>(sats);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%s%llu.%08llu", sign, abs / kSatoshisPerBtc,
                  abs % kSatoshisPerBtc);
    return buf;
}

std::string format_usd(Cents cents) {
    const char* sign = cents < 0 ? "-" : "";
    unsigned long long abs = cents < 0 ? -static_cast<unsigned long long>(cents)
                                       : static_cast<unsigned long long>(cents);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%s%llu.%02llu", sign, abs / 100, abs % 100);
    return buf;
}

std::optional<Cents> parse_cents(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string_view whole = text;
    std::string_view frac;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        whole = text.substr(0, dot);
        frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 2) return std::nullopt;
    }
    std::uint64_t w = 0;
    if (whole.empty()) return std::nullopt;
    {
        auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
        if (ec != std::errc{} || ptr != whole.data() + whole.size()) return std::nullopt;
    }
    std::uint64_t f = 0;
    if (!frac.empty()) {
        auto [ptr, ec] = std::from_chars(frac.data(), frac.data() + frac.size(), f);
        if (ec != std::errc{} || ptr != frac.data() + frac.size()) return std::nullopt;
        if (frac.size() == 1) f *= 10;
    }
    if (w > (static_cast<std::uint64_t>(INT64_MAX) - 99) / 100) return std::nullopt;
    return static_cast<Cents>(w * 100 + f);
}

Satoshi btc_to_satoshi(double btc) {
    return static_cast<Satoshi>(std::llround(btc * static_cast<double>(kSatoshisPerBtc)));
}

std::optional<std::vector<std::uint8_t>> parse_hex(std::string_view text) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (text.size() % 2 != 0) return std::nullopt;
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        int hi = nibble(text[i]);
        int lo = nibble(text[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string to_hex(const std::uint8_t* data, std::size_t size) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(size * 2);
    for (std::size_t i = 0; i < size; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xf]);
    }
    return out;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    return to_hex(bytes.data(), bytes.size());
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed: " + path);
}

} // namespace estima
