// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ESTIMA_TAGS_HPP
#define ESTIMA_TAGS_HPP

#include <estima/clustering.hpp>
#include <estima/ledger.hpp>

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace estima {

enum class TagCategory { exchange, mixer, gambling, service, other };

const char* to_string(TagCategory category);
std::optional<TagCategory> parse_tag_category(std::string_view text);

struct TagRecord {
    std::string address;
    std::string owner;
    TagCategory category = TagCategory::other;
};

// Known service addresses: exchanges, mixers, gambling sites. Immutable after
// load; concurrent reads are safe.
class TagTable {
public:
    TagTable() = default;
    // CSV with header "address,owner,category".
    static TagTable load(const std::string& path);
    static TagTable parse(std::string_view csv);
    static TagTable from_records(std::vector<TagRecord> records);

    const TagRecord* find(std::string_view address) const;
    std::span<const TagRecord> records() const { return records_; }
    bool empty() const { return records_.empty(); }

private:
    std::vector<TagRecord> records_;
    std::unordered_map<std::string_view, std::size_t> by_address_;
};

// Stand-in policy for untagged service clusters: any sufficiently large
// cluster is treated as a service under tag_plus_threshold.
enum class OwPolicy { tag_only, tag_plus_threshold };

enum class ServiceReason { none, tagged, size_threshold };

const char* to_string(ServiceReason reason);

struct ServiceVerdict {
    std::uint64_t cluster_id = 0;
    bool is_service = false;
    ServiceReason reason = ServiceReason::none;
    std::vector<TagRecord> matched_tags;
};

// A cluster is a service if any member address carries an exchange, mixer,
// gambling, or service tag; otherwise, under tag_plus_threshold, if its
// member count reaches the threshold. Pure function of the cluster's member
// set and the tag table.
ServiceVerdict classify_cluster(std::uint64_t cluster_id, const ClusterIndex& index,
                                const Ledger& ledger, const TagTable& tags, OwPolicy policy,
                                std::uint32_t threshold);

} // namespace estima

#endif // ESTIMA_TAGS_HPP
