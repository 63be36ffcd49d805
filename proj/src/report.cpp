// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/report.hpp>

#include <json.hpp>

namespace estima {

std::string report_csv_header() {
    return "methodology,group,height,seeds,ow,clusters,addresses,deposits,btc,usd\n";
}

std::string report_csv_row(const EstimationReport& r) {
    std::string row;
    row += r.methodology;
    row += ',';
    row += r.group;
    row += ',';
    row += std::to_string(r.height);
    row += ',';
    row += std::to_string(r.seed_count);
    row += ',';
    row += std::to_string(r.ow_count);
    row += ',';
    row += std::to_string(r.cluster_count);
    row += ',';
    row += std::to_string(r.address_count);
    row += ',';
    row += std::to_string(r.deposit_count);
    row += ',';
    row += format_btc(r.btc_sats);
    row += ',';
    row += format_usd(r.usd_cents);
    row += '\n';
    return row;
}

std::string render_reports_csv(std::span<const EstimationReport> reports) {
    std::string out = report_csv_header();
    for (const auto& report : reports) out += report_csv_row(report);
    return out;
}

std::string deposit_rows_csv_header() {
    return "txid,recipient,height,date,btc,usd\n";
}

std::string render_deposit_rows_csv(const EstimationReport& report) {
    std::string out = deposit_rows_csv_header();
    for (const auto& row : report.rows) {
        out += row.txid;
        out += ',';
        out += row.recipient;
        out += ',';
        out += std::to_string(row.height);
        out += ',';
        out += format_date(row.day);
        out += ',';
        out += format_btc(row.value);
        out += ',';
        out += format_usd(row.usd);
        out += '\n';
    }
    return out;
}

std::string render_reports_json(std::span<const EstimationReport> reports, bool with_rows) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json item;
        item["methodology"] = r.methodology;
        item["group"] = r.group;
        item["height"] = r.height;
        item["seeds"] = r.seed_count;
        item["ow"] = r.ow_count;
        item["clusters"] = r.cluster_count;
        item["addresses"] = r.address_count;
        item["deposits"] = r.deposit_count;
        item["btc"] = format_btc(r.btc_sats);
        item["btc_sats"] = r.btc_sats;
        item["usd"] = format_usd(r.usd_cents);
        item["usd_cents"] = r.usd_cents;
        if (with_rows) {
            auto rows = nlohmann::ordered_json::array();
            for (const auto& row : r.rows) {
                rows.push_back({{"txid", row.txid},
                                {"recipient", row.recipient},
                                {"height", row.height},
                                {"date", format_date(row.day)},
                                {"btc", format_btc(row.value)},
                                {"usd", format_usd(row.usd)}});
            }
            item["rows"] = std::move(rows);
        }
        out.push_back(std::move(item));
    }
    return out.dump(2) + "\n";
}

std::string report_result_fingerprint(const EstimationReport& r) {
    std::string out;
    out += std::to_string(r.height);
    out += ',';
    out += std::to_string(r.seed_count);
    out += ',';
    out += std::to_string(r.cluster_count);
    out += ',';
    out += std::to_string(r.address_count);
    out += ',';
    out += std::to_string(r.deposit_count);
    out += ',';
    out += format_btc(r.btc_sats);
    out += ',';
    out += format_usd(r.usd_cents);
    out += '\n';
    out += render_deposit_rows_csv(r);
    return out;
}

} // namespace estima
