// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_ESTIMATOR_HPP
#define ESTIMA_ESTIMATOR_HPP

#include <estima/clustering.hpp>
#include <estima/ledger.hpp>
#include <estima/methodology.hpp>
#include <estima/rates.hpp>
#include <estima/tags.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace estima {

struct SeedEntry {
    std::string address;
    std::string group; // optional label
};

// Payment addresses handed to the estimation. Entries whose address has at
// least one deposit at the analysis height are the seeds; entries without
// deposits are retained but contribute nothing.
class SeedSet {
public:
    SeedSet() = default;
    // CSV "address[,group_label]"; an optional "address[,group_label]" header
    // line is skipped.
    static SeedSet load(const std::string& path);
    static SeedSet parse(std::string_view csv);
    static SeedSet from_entries(std::vector<SeedEntry> entries); // rejects duplicates

    std::span<const SeedEntry> entries() const { return entries_; }
    std::vector<std::string> addresses() const;
    bool empty() const { return entries_.empty(); }

    // Split by group label, label-sorted by map order.
    std::map<std::string, SeedSet> by_group() const;

private:
    std::vector<SeedEntry> entries_;
};

struct ValueInterval {
    Satoshi lo = 0;
    Satoshi hi = 0; // closed interval, in satoshis
};

struct RangeEntry {
    Day from = 0;
    Day to = 0; // closed date interval
    std::vector<ValueInterval> values;
};

// Time intervals each carrying the payment-value intervals victims could pay
// in that period. Drives the VF and TF filters.
class FilterRanges {
public:
    FilterRanges() = default;
    // JSON: [{"from":"YYYY-MM-DD","to":"YYYY-MM-DD","values_btc":[[lo,hi],...]}]
    static FilterRanges load(const std::string& path);
    static FilterRanges parse(std::string_view json_text);
    static FilterRanges from_entries(std::vector<RangeEntry> entries);

    bool empty() const { return entries_.empty(); }
    std::span<const RangeEntry> entries() const { return entries_; }

    bool contains_day(Day day) const;
    // Some interval whose dates cover `day` also covers `value`.
    bool matches(Day day, Satoshi value) const;

private:
    std::vector<RangeEntry> entries_;
};

struct SeedInfo {
    std::string address;
    std::string group;
    bool has_deposits = false;      // seed iff true
    bool online_wallet = false;     // OW-restricted: contributes only itself
    std::uint64_t cluster_id = 0;   // under the spec's expansion kind
    std::uint32_t cluster_size = 1;
};

// Seeds plus every address the expansions attribute to the same owners.
struct ExpandedSet {
    std::vector<AddrId> addresses;      // sorted unique ledger ids
    std::vector<SeedInfo> seeds;        // one per entry, in entry order
    std::uint64_t seed_count = 0;       // entries with deposits
    std::uint64_t ow_count = 0;
    std::uint64_t cluster_count = 0;    // distinct clusters among seeds

    bool contains(AddrId id) const;
};

struct EstimatorOptions {
    OwPolicy ow_policy = OwPolicy::tag_plus_threshold;
    std::uint32_t ow_threshold = 1000;
    UsdMode usd_mode = UsdMode::payment_day();
    RateFallback rate_fallback = RateFallback::strict;
    bool exclude_coinjoin = true;
};

// Pipeline steps. `clusters` must be built for the spec's expansion kind when
// the spec uses MI; pass nullptr otherwise.
ExpandedSet expand(const SeedSet& seeds, const MethodologySpec& spec, const Ledger& ledger,
                   std::uint32_t height, const ClusterIndex* clusters, const TagTable& tags,
                   OwPolicy ow_policy, std::uint32_t ow_threshold);

// Union of deposits to the expanded addresses, one per (txid, recipient).
std::vector<Deposit> collect(const ExpandedSet& expanded, const Ledger& ledger,
                             std::uint32_t height);

// Drops deposits whose transaction spends from the expanded set.
std::vector<Deposit> filter_dc(std::vector<Deposit> deposits, const ExpandedSet& expanded,
                               const Ledger& ledger);

// Keeps deposits whose date falls in some time interval.
std::vector<Deposit> filter_tf(std::vector<Deposit> deposits, const FilterRanges& ranges,
                               const Ledger& ledger);

// Keeps deposits whose value falls in some value interval of an entry whose
// dates cover the deposit's day.
std::vector<Deposit> filter_vf(std::vector<Deposit> deposits, const FilterRanges& ranges,
                               const Ledger& ledger);

struct DepositRow {
    std::string txid;
    std::string recipient;
    std::uint32_t height = 0;
    Day day = 0;
    Satoshi value = 0;
    Cents usd = 0;
};

// The row shape of the estimation tables: one row per methodology (and group),
// counts, BTC total in satoshis, USD total in cents.
struct EstimationReport {
    std::string methodology;
    std::string group;
    std::uint32_t height = 0;
    std::uint64_t seed_count = 0;
    std::uint64_t ow_count = 0;
    std::uint64_t cluster_count = 0;
    std::uint64_t address_count = 0;
    std::uint64_t deposit_count = 0;
    Satoshi btc_sats = 0;
    Cents usd_cents = 0;
    std::vector<DepositRow> rows;
};

// Executes methodology pipelines over one immutable ledger at one height.
// Cluster indexes are built once on demand and shared; a finished Estimator
// is safe for concurrent run() calls.
class Estimator {
public:
    Estimator(const Ledger& ledger, std::uint32_t height, const TagTable& tags,
              const RateTable& rates, EstimatorOptions options = {});

    EstimationReport run(const SeedSet& seeds, const MethodologySpec& spec,
                         const FilterRanges* ranges = nullptr) const;

    // One run per selected methodology; rows sorted by canonical name.
    std::vector<EstimationReport> sweep(const SeedSet& seeds, const FilterRanges* ranges,
                                        unsigned threads = 1) const;

    // One run per group label plus a final "Total" row summing the columns.
    std::vector<EstimationReport> run_grouped(const SeedSet& seeds, const MethodologySpec& spec,
                                              const FilterRanges* ranges = nullptr) const;

    const ClusterIndex& mi_clusters() const;
    const ClusterIndex& mica_clusters() const;
    const Ledger& ledger() const { return ledger_; }
    std::uint32_t height() const { return height_; }
    const EstimatorOptions& options() const { return options_; }

private:
    const Ledger& ledger_;
    std::uint32_t height_;
    const TagTable& tags_;
    const RateTable& rates_;
    EstimatorOptions options_;
    mutable std::mutex mutex_;
    mutable std::unique_ptr<ClusterIndex> mi_;
    mutable std::unique_ptr<ClusterIndex> mica_;
};

} // namespace estima

#endif // ESTIMA_ESTIMATOR_HPP
