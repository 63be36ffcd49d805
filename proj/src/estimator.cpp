// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/estimator.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>
#include <unordered_set>

namespace estima {

using nlohmann::json;

SeedSet SeedSet::load(const std::string& path) {
    return parse(read_file(path));
}

SeedSet SeedSet::parse(std::string_view csv) {
    std::vector<SeedEntry> entries;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find('\n', start);
        std::string_view line =
            csv.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        bool header = line_no == 1 && (line == "address" || line == "address,group_label");
        if (!line.empty() && !header) {
            auto fields = split_csv(line);
            if (fields.empty() || fields.size() > 2 || fields[0].empty()) {
                throw InputError("seeds line " + std::to_string(line_no) + ": malformed row");
            }
            entries.push_back({std::move(fields[0]), fields.size() == 2 ? std::move(fields[1]) : ""});
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return from_entries(std::move(entries));
}

SeedSet SeedSet::from_entries(std::vector<SeedEntry> entries) {
    std::unordered_set<std::string_view> seen;
    for (const auto& entry : entries) {
        if (!seen.insert(entry.address).second) {
            throw InputError("seeds: duplicate address " + entry.address);
        }
    }
    SeedSet set;
    set.entries_ = std::move(entries);
    return set;
}

std::vector<std::string> SeedSet::addresses() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& entry : entries_) out.push_back(entry.address);
    return out;
}

std::map<std::string, SeedSet> SeedSet::by_group() const {
    std::map<std::string, std::vector<SeedEntry>> grouped;
    for (const auto& entry : entries_) grouped[entry.group].push_back(entry);
    std::map<std::string, SeedSet> out;
    for (auto& [label, entries] : grouped) out.emplace(label, from_entries(std::move(entries)));
    return out;
}

FilterRanges FilterRanges::load(const std::string& path) {
    return parse(read_file(path));
}

FilterRanges FilterRanges::parse(std::string_view json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_array()) {
        throw InputError("ranges: expected a JSON array");
    }
    std::vector<RangeEntry> entries;
    try {
        for (const auto& item : j) {
            RangeEntry entry;
            auto from = parse_date(item.at("from").get<std::string>());
            auto to = parse_date(item.at("to").get<std::string>());
            if (!from || !to) throw InputError("ranges: unparseable date");
            entry.from = *from;
            entry.to = *to;
            if (entry.from > entry.to) throw InputError("ranges: from after to");
            if (item.contains("values_btc")) {
                for (const auto& pair : item.at("values_btc")) {
                    if (!pair.is_array() || pair.size() != 2) {
                        throw InputError("ranges: value interval must be [lo,hi]");
                    }
                    ValueInterval interval{btc_to_satoshi(pair[0].get<double>()),
                                           btc_to_satoshi(pair[1].get<double>())};
                    if (interval.lo > interval.hi) throw InputError("ranges: lo above hi");
                    entry.values.push_back(interval);
                }
            }
            entries.push_back(std::move(entry));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("ranges: ") + e.what());
    }
    return from_entries(std::move(entries));
}

FilterRanges FilterRanges::from_entries(std::vector<RangeEntry> entries) {
    for (const auto& entry : entries) {
        if (entry.from > entry.to) throw InputError("ranges: from after to");
        for (const auto& interval : entry.values) {
            if (interval.lo > interval.hi) throw InputError("ranges: lo above hi");
        }
    }
    FilterRanges ranges;
    ranges.entries_ = std::move(entries);
    return ranges;
}

bool FilterRanges::contains_day(Day day) const {
    for (const auto& entry : entries_) {
        if (day >= entry.from && day <= entry.to) return true;
    }
    return false;
}

bool FilterRanges::matches(Day day, Satoshi value) const {
    for (const auto& entry : entries_) {
        if (day < entry.from || day > entry.to) continue;
        for (const auto& interval : entry.values) {
            if (value >= interval.lo && value <= interval.hi) return true;
        }
    }
    return false;
}

bool ExpandedSet::contains(AddrId id) const {
    return std::binary_search(addresses.begin(), addresses.end(), id);
}

ExpandedSet expand(const SeedSet& seeds, const MethodologySpec& spec, const Ledger& ledger,
                   std::uint32_t height, const ClusterIndex* clusters, const TagTable& tags,
                   OwPolicy ow_policy, std::uint32_t ow_threshold) {
    ExpandedSet out;
    std::uint32_t tx_limit = ledger.txs_at(height);

    std::vector<AddrId> seed_ids;
    std::set<std::uint64_t> seed_clusters;
    std::set<std::uint64_t> expand_clusters; // non-OW seed clusters to pull in

    for (const auto& entry : seeds.entries()) {
        SeedInfo info;
        info.address = entry.address;
        info.group = entry.group;
        auto id = ledger.find_address(entry.address);
        if (id) {
            const auto deposit_txs = ledger.deposit_txs(*id);
            info.has_deposits =
                !deposit_txs.empty() && deposit_txs.front() < tx_limit &&
                [&] {
                    // A deposit needs positive paid value, not just an output slot.
                    auto end = std::lower_bound(deposit_txs.begin(), deposit_txs.end(), tx_limit);
                    for (auto it = deposit_txs.begin(); it != end; ++it) {
                        if (ledger.paid_to(*it, *id) > 0) return true;
                    }
                    return false;
                }();
        }
        if (info.has_deposits) {
            ++out.seed_count;
            seed_ids.push_back(*id);
            if (spec.mi) {
                auto entry_info = clusters->entry_of(*id);
                info.cluster_id = entry_info.id;
                info.cluster_size = entry_info.size;
                seed_clusters.insert(entry_info.id);
                bool service = false;
                if (spec.ow) {
                    auto verdict = classify_cluster(entry_info.id, *clusters, ledger, tags,
                                                    ow_policy, ow_threshold);
                    service = verdict.is_service;
                }
                if (service) {
                    info.online_wallet = true;
                    ++out.ow_count;
                } else {
                    expand_clusters.insert(entry_info.id);
                }
            }
        }
        out.seeds.push_back(std::move(info));
    }

    out.addresses = seed_ids;
    if (spec.mi && !expand_clusters.empty()) {
        std::uint32_t n = clusters->address_count();
        for (AddrId id = 0; id < n; ++id) {
            if (expand_clusters.contains(clusters->entry_of(id).id)) {
                out.addresses.push_back(id);
            }
        }
    }
    std::sort(out.addresses.begin(), out.addresses.end());
    out.addresses.erase(std::unique(out.addresses.begin(), out.addresses.end()),
                        out.addresses.end());

    out.cluster_count = spec.mi ? seed_clusters.size() : out.seed_count;
    return out;
}

std::vector<Deposit> collect(const ExpandedSet& expanded, const Ledger& ledger,
                             std::uint32_t height) {
    return ledger.deposits_to_ids(expanded.addresses, height);
}

std::vector<Deposit> filter_dc(std::vector<Deposit> deposits, const ExpandedSet& expanded,
                               const Ledger& ledger) {
    std::erase_if(deposits, [&](const Deposit& deposit) {
        for (const auto& slot : ledger.tx(deposit.tx_index).inputs) {
            if (expanded.contains(slot.addr)) return true;
        }
        return false;
    });
    return deposits;
}

std::vector<Deposit> filter_tf(std::vector<Deposit> deposits, const FilterRanges& ranges,
                               const Ledger& ledger) {
    std::erase_if(deposits, [&](const Deposit& deposit) {
        return !ranges.contains_day(day_of(ledger.tx(deposit.tx_index).timestamp));
    });
    return deposits;
}

std::vector<Deposit> filter_vf(std::vector<Deposit> deposits, const FilterRanges& ranges,
                               const Ledger& ledger) {
    std::erase_if(deposits, [&](const Deposit& deposit) {
        return !ranges.matches(day_of(ledger.tx(deposit.tx_index).timestamp), deposit.value);
    });
    return deposits;
}

Estimator::Estimator(const Ledger& ledger, std::uint32_t height, const TagTable& tags,
                     const RateTable& rates, EstimatorOptions options)
    : ledger_(ledger), height_(height), tags_(tags), rates_(rates), options_(options) {}

const ClusterIndex& Estimator::mi_clusters() const {
    std::lock_guard lock(mutex_);
    if (!mi_) {
        mi_ = std::make_unique<ClusterIndex>(
            build_mi_clusters(ledger_, height_, options_.exclude_coinjoin));
    }
    return *mi_;
}

const ClusterIndex& Estimator::mica_clusters() const {
    std::lock_guard lock(mutex_);
    if (!mica_) {
        mica_ = std::make_unique<ClusterIndex>(
            build_mica_clusters(ledger_, height_, options_.exclude_coinjoin));
    }
    return *mica_;
}

EstimationReport Estimator::run(const SeedSet& seeds, const MethodologySpec& spec,
                                const FilterRanges* ranges) const {
    if ((spec.vf || spec.tf) && (!ranges || ranges->empty())) {
        throw InputError("methodology " + spec.canonical_name() +
                         " needs value/time ranges (--ranges)");
    }
    const ClusterIndex* clusters = nullptr;
    if (spec.mi) clusters = spec.ca ? &mica_clusters() : &mi_clusters();

    ExpandedSet expanded = expand(seeds, spec, ledger_, height_, clusters, tags_,
                                  options_.ow_policy, options_.ow_threshold);
    std::vector<Deposit> deposits = collect(expanded, ledger_, height_);
    if (spec.dc) deposits = filter_dc(std::move(deposits), expanded, ledger_);
    if (spec.tf) deposits = filter_tf(std::move(deposits), *ranges, ledger_);
    if (spec.vf) deposits = filter_vf(std::move(deposits), *ranges, ledger_);

    EstimationReport report;
    report.methodology = spec.canonical_name();
    report.height = height_;
    report.seed_count = expanded.seed_count;
    report.ow_count = expanded.ow_count;
    report.cluster_count = expanded.cluster_count;
    report.address_count = expanded.addresses.size();
    report.deposit_count = deposits.size();

    Conversion conversion =
        convert(deposits, ledger_, rates_, options_.usd_mode, options_.rate_fallback);
    report.usd_cents = conversion.total;
    report.rows.reserve(deposits.size());
    for (std::size_t i = 0; i < deposits.size(); ++i) {
        const Deposit& deposit = deposits[i];
        const Transaction& tx = ledger_.tx(deposit.tx_index);
        report.btc_sats += deposit.value;
        report.rows.push_back({tx.txid, ledger_.address_text(deposit.recipient), tx.height,
                               day_of(tx.timestamp), deposit.value, conversion.per_deposit[i]});
    }
    return report;
}

std::vector<EstimationReport> Estimator::sweep(const SeedSet& seeds, const FilterRanges* ranges,
                                               unsigned threads) const {
    const auto& specs = selected_methodologies();
    bool any_mi = false, any_ca = false;
    for (const auto& spec : specs) {
        any_mi |= spec.mi;
        any_ca |= spec.ca;
    }
    if (any_mi) mi_clusters();
    if (any_ca) mica_clusters();

    std::vector<EstimationReport> reports(specs.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) reports[i] = run(seeds, specs[i], ranges);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        for (unsigned t = 0; t < std::min<unsigned>(threads, specs.size()); ++t) {
            pool.emplace_back([&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= specs.size()) return;
                    try {
                        reports[i] = run(seeds, specs[i], ranges);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& worker : pool) worker.join();
        if (error) std::rethrow_exception(error);
    }
    std::sort(reports.begin(), reports.end(),
              [](const EstimationReport& a, const EstimationReport& b) {
                  return a.methodology < b.methodology;
              });
    return reports;
}

std::vector<EstimationReport> Estimator::run_grouped(const SeedSet& seeds,
                                                     const MethodologySpec& spec,
                                                     const FilterRanges* ranges) const {
    std::vector<EstimationReport> reports;
    EstimationReport total;
    total.methodology = spec.canonical_name();
    total.group = "Total";
    total.height = height_;
    for (const auto& [label, group_seeds] : seeds.by_group()) {
        EstimationReport report = run(group_seeds, spec, ranges);
        report.group = label;
        total.seed_count += report.seed_count;
        total.ow_count += report.ow_count;
        total.cluster_count += report.cluster_count;
        total.address_count += report.address_count;
        total.deposit_count += report.deposit_count;
        total.btc_sats += report.btc_sats;
        total.usd_cents += report.usd_cents;
        reports.push_back(std::move(report));
    }
    reports.push_back(std::move(total));
    return reports;
}

} // namespace estima
