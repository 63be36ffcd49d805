// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_REPORT_HPP
#define ESTIMA_REPORT_HPP

#include <estima/estimator.hpp>

#include <span>
#include <string>

namespace estima {

// CSV / JSON renderings are byte-deterministic: same report, same bytes.

std::string report_csv_header();
std::string report_csv_row(const EstimationReport& report);
std::string render_reports_csv(std::span<const EstimationReport> reports);

std::string deposit_rows_csv_header();
std::string render_deposit_rows_csv(const EstimationReport& report);

std::string render_reports_json(std::span<const EstimationReport> reports, bool with_rows);

// The result block of a report: every column except the methodology name and
// the OW count, plus the per-deposit rows. Two methodologies "match" when
// these bytes are equal.
std::string report_result_fingerprint(const EstimationReport& report);

} // namespace estima

#endif // ESTIMA_REPORT_HPP
