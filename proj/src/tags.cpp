// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/tags.hpp>

#include <estima/util.hpp>

namespace estima {

const char* to_string(TagCategory category) {
    switch (category) {
    case TagCategory::exchange: return "exchange";
    case TagCategory::mixer: return "mixer";
    case TagCategory::gambling: return "gambling";
    case TagCategory::service: return "service";
    case TagCategory::other: return "other";
    }
    return "other";
}

std::optional<TagCategory> parse_tag_category(std::string_view text) {
    if (text == "exchange") return TagCategory::exchange;
    if (text == "mixer") return TagCategory::mixer;
    if (text == "gambling") return TagCategory::gambling;
    if (text == "service") return TagCategory::service;
    if (text == "other") return TagCategory::other;
    return std::nullopt;
}

const char* to_string(ServiceReason reason) {
    switch (reason) {
    case ServiceReason::none: return "none";
    case ServiceReason::tagged: return "tagged";
    case ServiceReason::size_threshold: return "size_threshold";
    }
    return "none";
}

TagTable TagTable::load(const std::string& path) {
    return parse(read_file(path));
}

TagTable TagTable::parse(std::string_view csv) {
    std::vector<TagRecord> records;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool saw_header = false;
    while (start <= csv.size()) {
        std::size_t end = csv.find('\n', start);
        std::string_view line =
            csv.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (!line.empty()) {
            if (!saw_header) {
                if (line != "address,owner,category") {
                    throw InputError("tags: expected header \"address,owner,category\"");
                }
                saw_header = true;
            } else {
                auto fields = split_csv(line);
                if (fields.size() != 3 || fields[0].empty()) {
                    throw InputError("tags line " + std::to_string(line_no) + ": malformed row");
                }
                auto category = parse_tag_category(fields[2]);
                if (!category) {
                    throw InputError("tags line " + std::to_string(line_no) + ": unknown category \"" +
                                     fields[2] + "\"");
                }
                records.push_back({std::move(fields[0]), std::move(fields[1]), *category});
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    if (!saw_header) throw InputError("tags: empty file (header required)");
    return from_records(std::move(records));
}

TagTable TagTable::from_records(std::vector<TagRecord> records) {
    TagTable table;
    table.records_ = std::move(records);
    table.by_address_.reserve(table.records_.size());
    for (std::size_t i = 0; i < table.records_.size(); ++i) {
        if (!table.by_address_.emplace(table.records_[i].address, i).second) {
            throw InputError("tags: duplicate address " + table.records_[i].address);
        }
    }
    return table;
}

const TagRecord* TagTable::find(std::string_view address) const {
    auto it = by_address_.find(address);
    return it == by_address_.end() ? nullptr : &records_[it->second];
}

ServiceVerdict classify_cluster(std::uint64_t cluster_id, const ClusterIndex& index,
                                const Ledger& ledger, const TagTable& tags, OwPolicy policy,
                                std::uint32_t threshold) {
    ServiceVerdict verdict;
    verdict.cluster_id = cluster_id;
    for (const auto& tag : tags.records()) {
        if (tag.category == TagCategory::other) continue;
        if (index.entry_of_text(ledger, tag.address).id == cluster_id) {
            verdict.matched_tags.push_back(tag);
        }
    }
    if (!verdict.matched_tags.empty()) {
        verdict.is_service = true;
        verdict.reason = ServiceReason::tagged;
        return verdict;
    }
    if (policy == OwPolicy::tag_plus_threshold) {
        std::uint32_t size = 1; // fresh singletons
        if (cluster_id < index.address_count()) {
            size = index.entry_of(static_cast<AddrId>(cluster_id)).size;
        }
        if (size >= threshold) {
            verdict.is_service = true;
            verdict.reason = ServiceReason::size_threshold;
        }
    }
    return verdict;
}

} // namespace estima
