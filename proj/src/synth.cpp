// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <estima/synth.hpp>

#include <estima/clustering.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <unordered_map>

namespace estima::synth {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void append_json_string(std::string& out, std::string_view s) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

void append_slot(std::string& out, const SlotRecord& slot) {
    if (slot.op_return) {
        out += "{\"op_return\":";
        append_json_string(out, slot.payload_hex);
    } else {
        out += "{\"addr\":";
        append_json_string(out, slot.addr);
    }
    out += ",\"value\":";
    out += std::to_string(slot.value);
    out += '}';
}

} // namespace

std::string to_jsonl(std::span<const TxRecord> drafts) {
    std::string out;
    out.reserve(drafts.size() * 160);
    for (const auto& tx : drafts) {
        out += "{\"txid\":";
        append_json_string(out, tx.txid);
        out += ",\"height\":";
        out += std::to_string(tx.height);
        out += ",\"time\":";
        append_json_string(out, tx.time);
        out += ",\"inputs\":[";
        for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
            if (i) out += ',';
            append_slot(out, tx.inputs[i]);
        }
        out += "],\"outputs\":[";
        for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
            if (i) out += ',';
            append_slot(out, tx.outputs[i]);
        }
        out += "]}\n";
    }
    return out;
}

void write_jsonl(const std::string& path, std::span<const TxRecord> drafts) {
    write_file(path, to_jsonl(drafts));
}

Ledger build_ledger(std::vector<TxRecord> drafts, bool strict_validation) {
    return Ledger::from_records(std::move(drafts), strict_validation);
}

CampaignSpec CampaignSpec::from_json(std::string_view json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InputError("campaign spec: malformed JSON");
    CampaignSpec spec;
    try {
        spec.name = j.value("name", spec.name);
        spec.victims = j.value("victims", spec.victims);
        spec.reuse_probability = j.value("reuse_probability", spec.reuse_probability);
        if (j.contains("ransom_values_btc")) {
            spec.ransom_values.clear();
            for (const auto& v : j.at("ransom_values_btc")) {
                spec.ransom_values.push_back(btc_to_satoshi(v.get<double>()));
            }
        }
        if (j.contains("topology")) {
            auto t = j.at("topology").get<std::string>();
            if (t == "direct_multi_input") {
                spec.topology = Topology::direct_multi_input;
            } else if (t == "aggregated_one_to_n") {
                spec.topology = Topology::aggregated_one_to_n;
            } else {
                throw InputError("campaign spec: unknown topology \"" + t + "\"");
            }
        }
        spec.collect_batch = j.value("collect_batch", spec.collect_batch);
        spec.service_cluster_size = j.value("service_cluster_size", spec.service_cluster_size);
        spec.service_deposit_count = j.value("service_deposit_count", spec.service_deposit_count);
        if (j.contains("service_deposit_value_btc")) {
            spec.service_deposit_value = btc_to_satoshi(j.at("service_deposit_value_btc").get<double>());
        }
        spec.key_release = j.value("key_release", spec.key_release);
        spec.release_address_count = j.value("release_address_count", spec.release_address_count);
        spec.release_value = j.value("release_value_sats", spec.release_value);
        spec.seed_sample_size = j.value("seed_sample_size", spec.seed_sample_size);
        spec.rng_seed = j.value("rng_seed", spec.rng_seed);
        if (j.contains("start_date")) {
            auto day = parse_date(j.at("start_date").get<std::string>());
            if (!day) throw InputError("campaign spec: bad start_date");
            spec.start_day = *day;
        }
        if (j.contains("end_date")) {
            auto day = parse_date(j.at("end_date").get<std::string>());
            if (!day) throw InputError("campaign spec: bad end_date");
            spec.end_day = *day;
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("campaign spec: ") + e.what());
    }
    return spec;
}

std::string CampaignSpec::to_json() const {
    ordered_json j;
    j["name"] = name;
    j["victims"] = victims;
    j["reuse_probability"] = reuse_probability;
    auto values = ordered_json::array();
    for (Satoshi v : ransom_values) {
        values.push_back(static_cast<double>(v) / static_cast<double>(kSatoshisPerBtc));
    }
    j["ransom_values_btc"] = std::move(values);
    j["topology"] = topology == Topology::direct_multi_input ? "direct_multi_input"
                                                             : "aggregated_one_to_n";
    j["collect_batch"] = collect_batch;
    j["service_cluster_size"] = service_cluster_size;
    j["service_deposit_count"] = service_deposit_count;
    j["service_deposit_value_btc"] =
        static_cast<double>(service_deposit_value) / static_cast<double>(kSatoshisPerBtc);
    j["key_release"] = key_release;
    j["release_address_count"] = release_address_count;
    j["release_value_sats"] = release_value;
    j["seed_sample_size"] = seed_sample_size;
    j["rng_seed"] = rng_seed;
    j["start_date"] = format_date(start_day);
    j["end_date"] = format_date(end_day);
    return j.dump(2) + "\n";
}

std::string GroundTruth::to_json() const {
    ordered_json j;
    j["payment_addresses"] = payment_addresses;
    j["owner_addresses"] = owner_addresses;
    j["seeds"] = seeds;
    j["release_addresses"] = release_addresses;
    auto payments = ordered_json::array();
    for (const auto& p : victim_payments) {
        payments.push_back(
            {{"address", p.address}, {"value_sats", p.value}, {"date", format_date(p.day)}});
    }
    j["victim_payments"] = std::move(payments);
    j["true_revenue_sats"] = true_revenue;
    j["seed_revenue_sats"] = seed_revenue;
    auto tag_rows = ordered_json::array();
    for (const auto& tag : tags) {
        tag_rows.push_back(
            {{"address", tag.address}, {"owner", tag.owner}, {"category", to_string(tag.category)}});
    }
    j["tags"] = std::move(tag_rows);
    return j.dump(2) + "\n";
}

GroundTruth GroundTruth::from_json(std::string_view json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InputError("ground truth: malformed JSON");
    GroundTruth truth;
    try {
        truth.payment_addresses = j.at("payment_addresses").get<std::vector<std::string>>();
        truth.owner_addresses = j.at("owner_addresses").get<std::vector<std::string>>();
        truth.seeds = j.at("seeds").get<std::vector<std::string>>();
        truth.release_addresses = j.at("release_addresses").get<std::vector<std::string>>();
        for (const auto& p : j.at("victim_payments")) {
            auto day = parse_date(p.at("date").get<std::string>());
            if (!day) throw InputError("ground truth: bad date");
            truth.victim_payments.push_back(
                {p.at("address").get<std::string>(), p.at("value_sats").get<Satoshi>(), *day});
        }
        truth.true_revenue = j.at("true_revenue_sats").get<Satoshi>();
        truth.seed_revenue = j.at("seed_revenue_sats").get<Satoshi>();
        for (const auto& t : j.at("tags")) {
            auto category = parse_tag_category(t.at("category").get<std::string>());
            if (!category) throw InputError("ground truth: bad tag category");
            truth.tags.push_back(
                {t.at("address").get<std::string>(), t.at("owner").get<std::string>(), *category});
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("ground truth: ") + e.what());
    }
    return truth;
}

namespace {

struct DraftBuilder {
    std::vector<TxRecord> drafts;
    std::uint64_t tx_seq = 0;

    TxRecord& begin_tx(const std::string& txid) {
        TxRecord tx;
        tx.txid = txid;
        drafts.push_back(std::move(tx));
        return drafts.back();
    }
};

// Heights 1..n in emission order; timestamps evenly spread over the window.
void assign_positions(std::vector<TxRecord>& drafts, Day start_day, Day end_day) {
    Timestamp start = static_cast<Timestamp>(start_day) * 86400;
    Timestamp span = (static_cast<Timestamp>(end_day) - start_day + 1) * 86400 - 1;
    std::size_t n = drafts.size();
    for (std::size_t i = 0; i < n; ++i) {
        drafts[i].height = static_cast<std::uint32_t>(i + 1);
        Timestamp ts = start + (span * static_cast<Timestamp>(i)) / static_cast<Timestamp>(n);
        drafts[i].time = format_timestamp(ts);
    }
}

std::string payload_hex_for(Xorshift64Star& rng) {
    // 16-byte key payload; first byte fixed outside ASCII so it can never
    // collide with the "omni" prefix.
    std::vector<std::uint8_t> bytes{0xae};
    for (int i = 0; i < 15; ++i) bytes.push_back(static_cast<std::uint8_t>(rng.next() & 0xff));
    return to_hex(bytes);
}

} // namespace

Campaign gen_campaign_drafts(const CampaignSpec& spec) {
    if (spec.victims == 0) throw InputError("campaign spec: victims must be >= 1");
    if (spec.reuse_probability < 0.0 || spec.reuse_probability > 1.0) {
        throw InputError("campaign spec: reuse_probability outside [0,1]");
    }
    if (spec.ransom_values.empty()) throw InputError("campaign spec: no ransom values");
    for (Satoshi v : spec.ransom_values) {
        if (v <= 0) throw InputError("campaign spec: ransom values must be positive");
    }
    if (spec.key_release && spec.release_address_count == 0) {
        throw InputError("campaign spec: key_release needs release_address_count >= 1");
    }
    if (spec.service_cluster_size == 1) {
        throw InputError("campaign spec: service_cluster_size must be 0 or >= 2");
    }
    if (spec.start_day > spec.end_day) throw InputError("campaign spec: start_date after end_date");

    Xorshift64Star rng(spec.rng_seed);
    DraftBuilder builder;
    Campaign campaign;
    GroundTruth& truth = campaign.truth;

    const std::string& prefix = spec.name;
    auto addr = [&](const char* kind, std::uint64_t index) {
        return prefix + "_" + kind + std::to_string(index);
    };

    // Payment addresses, possibly reused across victims.
    std::vector<std::string> pays;
    std::vector<Satoshi> received;                    // victim-payment total per address
    std::vector<std::vector<Satoshi>> slots_by_addr;  // one UTXO per victim payment
    struct Payment {
        std::size_t pay_index;
        Satoshi value;
    };
    std::vector<Payment> payments;
    for (std::uint64_t k = 0; k < spec.victims; ++k) {
        std::size_t index;
        if (!pays.empty() && rng.unit() < spec.reuse_probability) {
            index = static_cast<std::size_t>(rng.below(pays.size()));
        } else {
            index = pays.size();
            pays.push_back(addr("pay", pays.size()));
            received.push_back(0);
            slots_by_addr.emplace_back();
        }
        Satoshi value = spec.ransom_values[static_cast<std::size_t>(k % spec.ransom_values.size())];
        payments.push_back({index, value});
        received[index] += value;
        slots_by_addr[index].push_back(value);
        truth.true_revenue += value;
    }
    if (spec.seed_sample_size > pays.size()) {
        throw InputError("campaign spec: seed_sample_size exceeds generated payment addresses");
    }

    // Victim payments, each followed by its key release when simulated.
    std::uint64_t release_seq = 0;
    for (std::uint64_t k = 0; k < spec.victims; ++k) {
        const Payment& payment = payments[static_cast<std::size_t>(k)];
        const std::string& pay = pays[payment.pay_index];
        TxRecord& tx = builder.begin_tx(addr("pay_tx", k));
        tx.inputs.push_back({addr("vic", k), payment.value, false, {}});
        tx.outputs.push_back({pay, payment.value, false, {}});
        truth.victim_payments.push_back({pay, payment.value, 0}); // day filled in below

        if (spec.key_release) {
            std::uint64_t r = release_seq++ % spec.release_address_count;
            std::string release = addr("key", r);
            TxRecord& rel = builder.begin_tx(addr("rel_tx", k));
            rel.inputs.push_back({release, spec.release_value + 10'000, false, {}});
            rel.outputs.push_back({pay, spec.release_value, false, {}});
            rel.outputs.push_back({release, 10'000, false, {}});
            rel.outputs.push_back({"", 0, true, payload_hex_for(rng)});
        }
    }

    // Service cluster: the first payment address is an online wallet; the
    // exchange consolidates it together with its own addresses.
    bool hosted = spec.service_cluster_size > 0;
    if (hosted) {
        std::uint32_t members = spec.service_cluster_size - 1; // exchange-owned addresses
        std::vector<Satoshi> exch_received(members, 0);
        for (std::uint64_t d = 0; d < spec.service_deposit_count; ++d) {
            std::size_t target = static_cast<std::size_t>(d % members);
            TxRecord& tx = builder.begin_tx(addr("svc_tx", d));
            tx.inputs.push_back({addr("cust", d), spec.service_deposit_value, false, {}});
            tx.outputs.push_back({addr("exch", target), spec.service_deposit_value, false, {}});
            exch_received[target] += spec.service_deposit_value;
        }
        TxRecord& consolidation = builder.begin_tx(prefix + "_con_tx");
        Satoshi total = received[0];
        consolidation.inputs.push_back({pays[0], received[0], false, {}});
        for (std::uint32_t m = 0; m < members; ++m) {
            consolidation.inputs.push_back({addr("exch", m), exch_received[m], false, {}});
            total += exch_received[m];
        }
        consolidation.outputs.push_back({addr("exch", 0), total, false, {}});
        truth.tags.push_back({addr("exch", 0), "synthex", TagCategory::exchange});
    }

    // Withdrawals. The hosted online-wallet address is custodied and does not
    // take part in the campaign's own withdrawals.
    std::vector<std::size_t> active;
    for (std::size_t i = hosted ? 1 : 0; i < pays.size(); ++i) active.push_back(i);

    truth.owner_addresses = pays;
    auto slots_for = [&](std::size_t pay_index) {
        std::vector<SlotRecord> slots;
        slots.reserve(slots_by_addr[pay_index].size());
        for (Satoshi value : slots_by_addr[pay_index]) {
            slots.push_back({pays[pay_index], value, false, {}});
        }
        return slots;
    };

    if (!active.empty()) {
        if (spec.topology == Topology::direct_multi_input) {
            std::uint64_t batch = spec.collect_batch == 0 ? active.size() : spec.collect_batch;
            std::uint64_t n_batches = (active.size() + batch - 1) / batch;
            for (std::uint64_t b = 0; b < n_batches; ++b) {
                TxRecord& tx = builder.begin_tx(addr("col_tx", b));
                Satoshi total = 0;
                for (std::uint64_t i = b * batch; i < std::min<std::uint64_t>(active.size(), (b + 1) * batch);
                     ++i) {
                    for (auto& slot : slots_for(active[static_cast<std::size_t>(i)])) {
                        total += slot.value;
                        tx.inputs.push_back(std::move(slot));
                    }
                }
                std::string collector = addr("col", b);
                tx.outputs.push_back({collector, total, false, {}});
                truth.owner_addresses.push_back(collector);
            }
        } else {
            std::vector<std::pair<std::string, Satoshi>> aggregators;
            for (std::size_t i : active) {
                TxRecord& tx = builder.begin_tx(addr("agg_tx", i));
                Satoshi total = 0;
                for (auto& slot : slots_for(i)) {
                    total += slot.value;
                    tx.inputs.push_back(std::move(slot));
                }
                std::string aggregator = addr("agg", i);
                tx.outputs.push_back({aggregator, total, false, {}});
                truth.owner_addresses.push_back(aggregator);
                aggregators.emplace_back(std::move(aggregator), total);
            }
            TxRecord& tx = builder.begin_tx(prefix + "_col_tx");
            Satoshi total = 0;
            for (const auto& [aggregator, value] : aggregators) {
                tx.inputs.push_back({aggregator, value, false, {}});
                total += value;
            }
            std::string collector = addr("col", 0);
            tx.outputs.push_back({collector, total, false, {}});
            truth.owner_addresses.push_back(collector);
        }
    }

    assign_positions(builder.drafts, spec.start_day, spec.end_day);

    // Victim payment days come from the assigned timestamps; payment k is
    // draft k when key release is off, draft 2k otherwise.
    std::size_t stride = spec.key_release ? 2 : 1;
    for (std::uint64_t k = 0; k < spec.victims; ++k) {
        const TxRecord& tx = builder.drafts[static_cast<std::size_t>(k) * stride];
        truth.victim_payments[static_cast<std::size_t>(k)].day = *parse_date(tx.time.substr(0, 10));
    }

    truth.payment_addresses = pays;
    for (std::uint32_t r = 0; r < (spec.key_release ? spec.release_address_count : 0); ++r) {
        truth.release_addresses.push_back(addr("key", r));
    }

    // Seed sample: the hosted online wallet (when present) is always part of
    // the sample; the rest is drawn without replacement.
    std::vector<std::size_t> indices;
    for (std::size_t i = hosted ? 1 : 0; i < pays.size(); ++i) indices.push_back(i);
    std::vector<std::size_t> sampled;
    if (hosted) sampled.push_back(0);
    while (sampled.size() < spec.seed_sample_size && !indices.empty()) {
        std::size_t pick = static_cast<std::size_t>(rng.below(indices.size()));
        sampled.push_back(indices[pick]);
        indices.erase(indices.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::sort(sampled.begin(), sampled.end());
    sampled.resize(std::min<std::size_t>(sampled.size(), spec.seed_sample_size));
    for (std::size_t i : sampled) {
        truth.seeds.push_back(pays[i]);
        truth.seed_revenue += received[i];
    }

    campaign.drafts = std::move(builder.drafts);
    return campaign;
}

std::pair<Ledger, GroundTruth> gen_campaign(const CampaignSpec& spec) {
    Campaign campaign = gen_campaign_drafts(spec);
    return {build_ledger(std::move(campaign.drafts)), std::move(campaign.truth)};
}

namespace {

Campaign gen_fig1(bool aggregated) {
    Campaign campaign;
    GroundTruth& truth = campaign.truth;
    const char* pays[4] = {"S1", "S2", "P1", "P2"};
    const Satoshi ransom = 3'000'000; // 0.03 BTC

    std::vector<TxRecord> drafts;
    for (int i = 0; i < 4; ++i) {
        TxRecord tx;
        tx.txid = std::string("fig1_pay_tx") + std::to_string(i + 1);
        tx.inputs.push_back({"V" + std::to_string(i + 1), ransom, false, {}});
        tx.outputs.push_back({pays[i], ransom, false, {}});
        drafts.push_back(std::move(tx));
        truth.payment_addresses.push_back(pays[i]);
        truth.victim_payments.push_back({pays[i], ransom, 0});
        truth.true_revenue += ransom;
    }
    truth.owner_addresses = truth.payment_addresses;

    if (aggregated) {
        for (int i = 0; i < 4; ++i) {
            TxRecord tx;
            tx.txid = std::string("fig1_agg_tx") + std::to_string(i + 1);
            tx.inputs.push_back({pays[i], ransom, false, {}});
            tx.outputs.push_back({"A" + std::to_string(i + 1), ransom, false, {}});
            drafts.push_back(std::move(tx));
            truth.owner_addresses.push_back("A" + std::to_string(i + 1));
        }
        TxRecord collect;
        collect.txid = "fig1_col_tx";
        for (int i = 0; i < 4; ++i) {
            collect.inputs.push_back({"A" + std::to_string(i + 1), ransom, false, {}});
        }
        collect.outputs.push_back({"C", 4 * ransom, false, {}});
        drafts.push_back(std::move(collect));
    } else {
        TxRecord collect;
        collect.txid = "fig1_col_tx";
        for (int i = 0; i < 4; ++i) collect.inputs.push_back({pays[i], ransom, false, {}});
        collect.outputs.push_back({"C", 4 * ransom, false, {}});
        drafts.push_back(std::move(collect));
    }
    truth.owner_addresses.push_back("C");

    assign_positions(drafts, *parse_date("2022-02-01"), *parse_date("2022-02-28"));
    for (int i = 0; i < 4; ++i) {
        truth.victim_payments[static_cast<std::size_t>(i)].day =
            *parse_date(drafts[static_cast<std::size_t>(i)].time.substr(0, 10));
    }
    truth.seeds = {"S1", "S2"};
    truth.seed_revenue = 2 * ransom;
    campaign.drafts = std::move(drafts);
    return campaign;
}

} // namespace

Campaign gen_fig1a_drafts() {
    return gen_fig1(false);
}

Campaign gen_fig1b_drafts() {
    return gen_fig1(true);
}

std::pair<Ledger, GroundTruth> gen_fig1a() {
    Campaign campaign = gen_fig1a_drafts();
    return {build_ledger(std::move(campaign.drafts)), std::move(campaign.truth)};
}

std::pair<Ledger, GroundTruth> gen_fig1b() {
    Campaign campaign = gen_fig1b_drafts();
    return {build_ledger(std::move(campaign.drafts)), std::move(campaign.truth)};
}

std::vector<TxRecord> gen_random_ledger(std::uint64_t seed, std::size_t max_txs) {
    Xorshift64Star rng(seed);
    std::size_t n = 1 + static_cast<std::size_t>(rng.below(max_txs));
    std::vector<TxRecord> drafts;
    drafts.reserve(n);

    std::vector<std::string> pool;
    auto pick_addr = [&]() -> std::string {
        if (!pool.empty() && rng.unit() < 0.7) {
            return pool[static_cast<std::size_t>(rng.below(pool.size()))];
        }
        pool.push_back("r" + std::to_string(pool.size()));
        return pool.back();
    };
    auto distinct_addrs = [&](std::size_t count) {
        std::vector<std::string> out;
        while (out.size() < count) {
            std::string a = pick_addr();
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
        }
        return out;
    };

    std::uint32_t height = 1;
    Timestamp base = static_cast<Timestamp>(*parse_date("2022-01-01")) * 86400;
    for (std::size_t i = 0; i < n; ++i) {
        TxRecord tx;
        tx.txid = "rtx" + std::to_string(i);
        tx.height = height;
        if (rng.below(3) != 0) ++height; // same-height runs
        tx.time = format_timestamp(base + static_cast<Timestamp>(i) * 600 +
                                   static_cast<Timestamp>(rng.below(600)));

        std::uint64_t kind = rng.below(100);
        if (kind < 5) {
            // coinbase
            std::size_t outs = 1 + rng.below(2);
            for (std::size_t o = 0; o < outs; ++o) {
                tx.outputs.push_back({pick_addr(), static_cast<Satoshi>(rng.below(5'000'000'000)),
                                      false, {}});
            }
        } else if (kind < 15) {
            // CoinJoin-shaped: k equal outputs, k distinct inputs, extra change
            std::size_t k = 2 + rng.below(3);
            Satoshi v = static_cast<Satoshi>(1'000 * (1 + rng.below(100)));
            Satoshi out_total = 0;
            for (std::size_t o = 0; o < k; ++o) {
                tx.outputs.push_back({pick_addr(), v, false, {}});
                out_total += v;
            }
            std::size_t extras = 1 + rng.below(2);
            for (std::size_t o = 0; o < extras; ++o) {
                Satoshi e = static_cast<Satoshi>(1 + rng.below(999));
                tx.outputs.push_back({pick_addr(), e, false, {}});
                out_total += e;
            }
            auto ins = distinct_addrs(k + rng.below(2));
            Satoshi share = out_total / static_cast<Satoshi>(ins.size()) + 1;
            for (auto& a : ins) tx.inputs.push_back({std::move(a), share, false, {}});
        } else if (kind < 18) {
            // key-release-shaped
            std::string sender = pick_addr();
            Satoshi change = static_cast<Satoshi>(rng.below(50'000));
            std::string payload =
                rng.below(10) < 3 ? "6f6d6e69" + to_hex({static_cast<std::uint8_t>(rng.below(256))})
                                  : payload_hex_for(rng);
            tx.inputs.push_back({sender, 5460 + change, false, {}});
            SlotRecord pay{pick_addr(), 5460, false, {}};
            SlotRecord chg{sender, change, false, {}};
            SlotRecord op{"", 0, true, payload};
            std::vector<SlotRecord> outs{std::move(pay), std::move(chg), std::move(op)};
            std::size_t rot = static_cast<std::size_t>(rng.below(3));
            std::rotate(outs.begin(), outs.begin() + static_cast<std::ptrdiff_t>(rot), outs.end());
            tx.outputs = std::move(outs);
        } else {
            // generic spend
            std::size_t outs = 1 + rng.below(3);
            Satoshi out_total = 0;
            for (std::size_t o = 0; o < outs; ++o) {
                if (rng.below(100) < 10) {
                    tx.outputs.push_back({"", 0, true, payload_hex_for(rng)});
                } else {
                    Satoshi v = rng.below(100) < 2 ? 0 : static_cast<Satoshi>(1 + rng.below(1'000'000));
                    tx.outputs.push_back({pick_addr(), v, false, {}});
                    out_total += v;
                }
            }
            auto ins = distinct_addrs(1 + rng.below(4));
            Satoshi fee = static_cast<Satoshi>(rng.below(10'000));
            Satoshi share = (out_total + fee) / static_cast<Satoshi>(ins.size()) + 1;
            for (std::size_t s = 0; s < ins.size(); ++s) {
                tx.inputs.push_back({ins[s], share, false, {}});
                // occasional second slot for the same address
                if (rng.below(100) < 10) tx.inputs.push_back({ins[s], share, false, {}});
            }
        }
        drafts.push_back(std::move(tx));
    }
    return drafts;
}

std::set<std::set<std::string>> oracle_mi(const Ledger& ledger, std::uint32_t height,
                                          bool exclude_coinjoin) {
    if (ledger.tx_count() > 10'000) {
        throw InputError("oracle_mi: ledger exceeds the oracle size bound");
    }
    std::uint32_t n = ledger.addresses_at(height);
    std::vector<std::set<std::string>> clusters;
    std::unordered_map<std::string, std::size_t> where;
    for (AddrId id = 0; id < n; ++id) {
        clusters.push_back({ledger.address_text(id)});
        where[ledger.address_text(id)] = id;
    }

    std::uint32_t tx_limit = ledger.txs_at(height);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t ti = 0; ti < tx_limit; ++ti) {
            const Transaction& tx = ledger.tx(ti);
            if (tx.is_coinbase()) continue;
            if (exclude_coinjoin && detect_coinjoin(tx).is_coinjoin) continue;
            std::set<std::size_t> touched;
            for (const auto& slot : tx.inputs) {
                touched.insert(where[ledger.address_text(slot.addr)]);
            }
            if (touched.size() < 2) continue;
            changed = true;
            std::size_t target = *touched.begin();
            for (auto it = std::next(touched.begin()); it != touched.end(); ++it) {
                for (const auto& member : clusters[*it]) where[member] = target;
                clusters[target].merge(clusters[*it]);
                clusters[*it].clear();
            }
        }
    }

    std::set<std::set<std::string>> out;
    for (auto& cluster : clusters) {
        if (!cluster.empty()) out.insert(std::move(cluster));
    }
    return out;
}

Satoshi oracle_revenue(const GroundTruth& truth) {
    Satoshi total = 0;
    for (const auto& payment : truth.victim_payments) total += payment.value;
    return total;
}

} // namespace estima::synth
