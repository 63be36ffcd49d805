// Copyright (c) 2026 The Estima developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
//
// Command-line front end: revenue estimation, clustering, MI-evasion stats,
// key-release scanning/expansion, and synthetic fixture generation.

#include <estima/address.hpp>
#include <estima/clustering.hpp>
#include <estima/deadbolt.hpp>
#include <estima/estimator.hpp>
#include <estima/evasion.hpp>
#include <estima/ledger.hpp>
#include <estima/manifest.hpp>
#include <estima/methodology.hpp>
#include <estima/rates.hpp>
#include <estima/report.hpp>
#include <estima/synth.hpp>
#include <estima/tags.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

namespace {

using namespace estima;

unsigned thread_count() {
    if (const char* env = std::getenv("ESTIMA_THREADS")) {
        char* end = nullptr;
        long value = std::strtol(env, &end, 10);
        if (end && *end == '\0' && value >= 1 && value <= 256) {
            return static_cast<unsigned>(value);
        }
        throw InputError("ESTIMA_THREADS must be an integer in [1,256]");
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        write_file(path, content);
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::string content = read_file(path);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t end = content.find('\n', start);
        std::string line =
            content.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return lines;
}

std::string quote_command(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        std::string_view arg = argv[i];
        if (arg.find(' ') != std::string_view::npos) {
            out += '"';
            out += arg;
            out += '"';
        } else {
            out += arg;
        }
    }
    return out;
}

struct EstimateArgs {
    std::string ledger_path;
    std::string seeds_path;
    std::string rates_path;
    std::string ranges_path;
    std::string tags_path;
    std::string method = "DD";
    bool sweep = false;
    std::string group_by;
    std::uint32_t height = 0;
    std::string ow_policy = "tag-threshold";
    std::uint32_t ow_threshold = 1000;
    std::string usd_mode = "payment-day";
    std::string rate_fallback = "strict";
    bool strict_addresses = false;
    std::string out;
    std::string json_out;
    std::string deposits_out;
    std::string manifest_out;
};

OwPolicy parse_ow_policy(const std::string& text) {
    if (text == "tag-only") return OwPolicy::tag_only;
    if (text == "tag-threshold") return OwPolicy::tag_plus_threshold;
    throw InputError("--ow-policy must be tag-only or tag-threshold");
}

UsdMode parse_usd_mode(const std::string& text) {
    if (text == "payment-day") return UsdMode::payment_day();
    if (text.rfind("fixed:", 0) == 0) {
        auto day = parse_date(text.substr(6));
        if (!day) throw InputError("--usd-mode fixed: bad date");
        return UsdMode::fixed_on(*day);
    }
    throw InputError("--usd-mode must be payment-day or fixed:YYYY-MM-DD");
}

RateFallback parse_fallback(const std::string& text) {
    if (text == "strict") return RateFallback::strict;
    if (text == "previous-day") return RateFallback::previous_day;
    throw InputError("--rate-fallback must be strict or previous-day");
}

int run_estimate(const EstimateArgs& args, const std::string& command) {
    Ledger ledger = Ledger::load(args.ledger_path, args.strict_addresses);
    SeedSet seeds = SeedSet::load(args.seeds_path);
    RateTable rates = RateTable::load(args.rates_path);
    TagTable tags;
    if (!args.tags_path.empty()) tags = TagTable::load(args.tags_path);
    FilterRanges ranges;
    if (!args.ranges_path.empty()) ranges = FilterRanges::load(args.ranges_path);

    EstimatorOptions options;
    options.ow_policy = parse_ow_policy(args.ow_policy);
    options.ow_threshold = args.ow_threshold;
    options.usd_mode = parse_usd_mode(args.usd_mode);
    options.rate_fallback = parse_fallback(args.rate_fallback);
    Estimator estimator(ledger, args.height, tags, rates, options);

    const FilterRanges* ranges_ptr = ranges.empty() ? nullptr : &ranges;
    std::vector<EstimationReport> reports;
    std::string methodology_label;
    if (args.sweep) {
        if (!args.group_by.empty()) throw InputError("--sweep and --group-by are exclusive");
        reports = estimator.sweep(seeds, ranges_ptr, thread_count());
        methodology_label = "sweep";
    } else {
        MethodologySpec spec = parse_methodology(args.method);
        methodology_label = spec.canonical_name();
        if (!args.group_by.empty()) {
            if (args.group_by != "label") throw InputError("--group-by supports only \"label\"");
            reports = estimator.run_grouped(seeds, spec, ranges_ptr);
        } else {
            reports.push_back(estimator.run(seeds, spec, ranges_ptr));
        }
    }

    emit(args.out, render_reports_csv(reports));
    if (!args.json_out.empty()) emit(args.json_out, render_reports_json(reports, false));
    if (!args.deposits_out.empty()) {
        std::string rows = deposit_rows_csv_header();
        for (const auto& report : reports) {
            rows += render_deposit_rows_csv(report).substr(deposit_rows_csv_header().size());
        }
        emit(args.deposits_out, rows);
    }
    // Report files are always accompanied by a manifest; stdout reports only
    // get one when asked.
    std::string manifest_path = args.manifest_out;
    if (manifest_path.empty() && !args.out.empty() && args.out != "-") {
        manifest_path = args.out + ".manifest.json";
    }
    if (!manifest_path.empty()) {
        RunManifest manifest;
        manifest.command = command;
        manifest.version = ESTIMA_VERSION;
        manifest.height = args.height;
        manifest.methodology = methodology_label;
        manifest.input_digests[args.ledger_path] = file_digest(args.ledger_path);
        manifest.input_digests[args.seeds_path] = file_digest(args.seeds_path);
        manifest.input_digests[args.rates_path] = file_digest(args.rates_path);
        if (!args.tags_path.empty()) {
            manifest.input_digests[args.tags_path] = file_digest(args.tags_path);
        }
        manifest.ranges_digest = args.ranges_path.empty() ? "-" : file_digest(args.ranges_path);
        if (!args.ranges_path.empty()) {
            manifest.input_digests[args.ranges_path] = manifest.ranges_digest;
        }
        emit(manifest_path, manifest.to_json());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cybercrime bitcoin revenue estimation toolkit"};
    app.require_subcommand(1);

    std::string command = quote_command(argc, argv);

    // estimate
    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "run a methodology over seeds");
    estimate->add_option("--ledger", est.ledger_path, "ledger JSONL file")->required();
    estimate->add_option("--seeds", est.seeds_path, "seeds CSV (address[,group_label])")->required();
    estimate->add_option("--height", est.height, "block height of the estimation")->required();
    estimate->add_option("--rates", est.rates_path, "rates CSV (date,usd_per_btc)")->required();
    estimate->add_option("--method", est.method, "methodology string, e.g. DD-OW+MI-DC");
    estimate->add_flag("--sweep", est.sweep, "run the 15 selected methodologies");
    estimate->add_option("--ranges", est.ranges_path, "value/time ranges JSON");
    estimate->add_option("--tags", est.tags_path, "tag database CSV");
    estimate->add_option("--group-by", est.group_by, "per-group estimation (value: label)");
    estimate->add_option("--ow-policy", est.ow_policy, "tag-only | tag-threshold");
    estimate->add_option("--ow-threshold", est.ow_threshold, "cluster size threshold");
    estimate->add_option("--usd-mode", est.usd_mode, "payment-day | fixed:YYYY-MM-DD");
    estimate->add_option("--rate-fallback", est.rate_fallback, "strict | previous-day");
    estimate->add_flag("--strict-addresses", est.strict_addresses, "verify address checksums");
    estimate->add_option("--out", est.out, "report CSV path (default stdout)");
    estimate->add_option("--json", est.json_out, "report JSON path");
    estimate->add_option("--deposits-out", est.deposits_out, "per-deposit rows CSV path");
    estimate->add_option("--manifest", est.manifest_out, "run manifest JSON path");

    // cluster
    struct {
        std::string ledger_path, kind = "mi", out;
        std::uint32_t height = 0;
        bool include_coinjoin = false, strict_addresses = false;
    } clu;
    auto* cluster = app.add_subcommand("cluster", "emit address,cluster_id,cluster_size CSV");
    cluster->add_option("--ledger", clu.ledger_path)->required();
    cluster->add_option("--height", clu.height)->required();
    cluster->add_option("--kind", clu.kind, "mi | mica");
    cluster->add_flag("--include-coinjoin", clu.include_coinjoin,
                      "keep CoinJoin transactions in the clustering");
    cluster->add_flag("--strict-addresses", clu.strict_addresses);
    cluster->add_option("--out", clu.out);

    // evasion
    struct {
        std::string ledger_path, seeds_path, tags_path, ow_policy = "tag-threshold";
        std::string stats_out, cdf_out;
        std::uint32_t height = 0, ow_threshold = 1000;
        bool strict_addresses = false;
    } eva;
    auto* evasion = app.add_subcommand("evasion", "1-to-n withdrawal statistics per group");
    evasion->add_option("--ledger", eva.ledger_path)->required();
    evasion->add_option("--seeds", eva.seeds_path)->required();
    evasion->add_option("--height", eva.height)->required();
    evasion->add_option("--tags", eva.tags_path);
    evasion->add_option("--ow-policy", eva.ow_policy);
    evasion->add_option("--ow-threshold", eva.ow_threshold);
    evasion->add_flag("--strict-addresses", eva.strict_addresses);
    evasion->add_option("--stats-out", eva.stats_out, "per-group stats CSV (default stdout)");
    evasion->add_option("--cdf-out", eva.cdf_out, "CDF CSV (default stdout)");

    // scan-deadbolt
    struct {
        std::string ledger_path, out;
        std::uint32_t from_height = 0, to_height = kMaxHeight;
        Satoshi release_value = 5460;
        bool omni_filter = true, strict_addresses = false;
    } scan;
    auto* scan_cmd = app.add_subcommand("scan-deadbolt", "full-ledger key-release signature scan");
    scan_cmd->add_option("--ledger", scan.ledger_path)->required();
    scan_cmd->add_option("--from-height", scan.from_height)->required();
    scan_cmd->add_option("--to-height", scan.to_height)->required();
    scan_cmd->add_option("--release-value", scan.release_value, "payment slot value in satoshis");
    scan_cmd->add_flag("--omni-filter,!--no-omni-filter", scan.omni_filter,
                       "drop payloads starting with \"omni\"");
    scan_cmd->add_flag("--strict-addresses", scan.strict_addresses);
    scan_cmd->add_option("--out", scan.out, "matches CSV (default stdout)");

    // deadbolt-expand
    struct {
        std::string ledger_path, seeds_path, out, releases_out;
        std::uint32_t height = kMaxHeight;
        Satoshi release_value = 5460;
        bool omni_filter = true, strict_addresses = false;
    } dbx;
    auto* expand_cmd =
        app.add_subcommand("deadbolt-expand", "backward+forward key-release exploration");
    expand_cmd->add_option("--ledger", dbx.ledger_path)->required();
    expand_cmd->add_option("--seeds", dbx.seeds_path)->required();
    expand_cmd->add_option("--height", dbx.height)->required();
    expand_cmd->add_option("--release-value", dbx.release_value);
    expand_cmd->add_flag("--omni-filter,!--no-omni-filter", dbx.omni_filter);
    expand_cmd->add_flag("--strict-addresses", dbx.strict_addresses);
    expand_cmd->add_option("--out", dbx.out, "payment address list (default stdout)");
    expand_cmd->add_option("--releases-out", dbx.releases_out, "key release address list");

    // deadbolt-rate
    struct {
        std::string ledger_path, addresses_path, ranges_path, out;
        std::uint32_t height = kMaxHeight;
        bool strict_addresses = false;
    } dbr;
    auto* rate_cmd = app.add_subcommand("deadbolt-rate", "fraction of victims that paid");
    rate_cmd->add_option("--ledger", dbr.ledger_path)->required();
    rate_cmd->add_option("--addresses", dbr.addresses_path, "payment addresses, one per line")
        ->required();
    rate_cmd->add_option("--ranges", dbr.ranges_path, "expected value ranges JSON")->required();
    rate_cmd->add_option("--height", dbr.height)->required();
    rate_cmd->add_flag("--strict-addresses", dbr.strict_addresses);
    rate_cmd->add_option("--out", dbr.out);

    // synth
    struct {
        std::string spec_path, fig, out, truth_out, rates_out, seeds_out, tags_out;
    } syn;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic ledger fixture");
    synth_cmd->add_option("--spec", syn.spec_path, "campaign spec JSON");
    synth_cmd->add_option("--fig", syn.fig, "1a | 1b reference fixture");
    synth_cmd->add_option("--out", syn.out, "ledger JSONL path")->required();
    synth_cmd->add_option("--truth", syn.truth_out, "ground truth JSON path");
    synth_cmd->add_option("--rates-out", syn.rates_out,
                          "deterministic rates CSV covering the window");
    synth_cmd->add_option("--seeds-out", syn.seeds_out, "seeds CSV from the ground truth");
    synth_cmd->add_option("--tags-out", syn.tags_out, "tags CSV from the ground truth");

    // validate-address
    struct {
        std::string address;
    } val;
    auto* validate = app.add_subcommand("validate-address", "checksum-validate one address");
    validate->add_option("address", val.address, "address text")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << ESTIMA_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (*estimate) return run_estimate(est, command);

        if (*cluster) {
            Ledger ledger = Ledger::load(clu.ledger_path, clu.strict_addresses);
            ClusterIndex index;
            if (clu.kind == "mi") {
                index = build_mi_clusters(ledger, clu.height, !clu.include_coinjoin);
            } else if (clu.kind == "mica") {
                index = build_mica_clusters(ledger, clu.height, !clu.include_coinjoin);
            } else {
                throw InputError("--kind must be mi or mica");
            }
            std::vector<AddrId> ids(index.address_count());
            for (AddrId id = 0; id < index.address_count(); ++id) ids[id] = id;
            std::sort(ids.begin(), ids.end(), [&](AddrId a, AddrId b) {
                return ledger.address_text(a) < ledger.address_text(b);
            });
            std::string csv = "address,cluster_id,cluster_size\n";
            for (AddrId id : ids) {
                auto entry = index.entry_of(id);
                csv += ledger.address_text(id);
                csv += ',';
                csv += std::to_string(entry.id);
                csv += ',';
                csv += std::to_string(entry.size);
                csv += '\n';
            }
            emit(clu.out, csv);
            return 0;
        }

        if (*evasion) {
            Ledger ledger = Ledger::load(eva.ledger_path, eva.strict_addresses);
            SeedSet seeds = SeedSet::load(eva.seeds_path);
            TagTable tags;
            if (!eva.tags_path.empty()) tags = TagTable::load(eva.tags_path);
            ClusterIndex mi = build_mi_clusters(ledger, eva.height, true);
            EvasionResult result = evasion_stats(seeds.by_group(), ledger, eva.height, mi, tags,
                                                 parse_ow_policy(eva.ow_policy), eva.ow_threshold);
            emit(eva.stats_out, render_evasion_stats_csv(result));
            emit(eva.cdf_out, render_evasion_cdf_csv(result));
            return 0;
        }

        if (*scan_cmd) {
            Ledger ledger = Ledger::load(scan.ledger_path, scan.strict_addresses);
            DeadboltOptions options{scan.release_value, scan.omni_filter};
            ScanResult result =
                scan_signature(ledger, scan.from_height, scan.to_height, options, thread_count());
            std::string csv = "txid,release_addr,payment_addr,height,payload_hex\n";
            for (const auto& match : result.matches) {
                const Transaction& tx = ledger.tx(match.tx_index);
                csv += tx.txid;
                csv += ',';
                csv += ledger.address_text(match.key_release_address);
                csv += ',';
                csv += ledger.address_text(match.payment_address);
                csv += ',';
                csv += std::to_string(tx.height);
                csv += ',';
                csv += to_hex(ledger.payload(match.payload));
                csv += '\n';
            }
            emit(scan.out, csv);
            return 0;
        }

        if (*expand_cmd) {
            Ledger ledger = Ledger::load(dbx.ledger_path, dbx.strict_addresses);
            SeedSet seeds = SeedSet::load(dbx.seeds_path);
            DeadboltOptions options{dbx.release_value, dbx.omni_filter};
            KeyReleaseExpansion expansion =
                expand_key_release(seeds.addresses(), ledger, dbx.height, options);
            std::string out;
            for (const auto& address : expansion.payment_addresses) {
                out += address;
                out += '\n';
            }
            emit(dbx.out, out);
            if (!dbx.releases_out.empty()) {
                std::string releases;
                for (const auto& address : expansion.release_addresses) {
                    releases += address;
                    releases += '\n';
                }
                emit(dbx.releases_out, releases);
            }
            return 0;
        }

        if (*rate_cmd) {
            Ledger ledger = Ledger::load(dbr.ledger_path, dbr.strict_addresses);
            FilterRanges ranges = FilterRanges::load(dbr.ranges_path);
            std::vector<std::string> addresses = read_lines(dbr.addresses_path);
            ConversionRateReport report = conversion_rate(addresses, ledger, dbr.height, ranges);
            nlohmann::ordered_json j;
            j["total_addresses"] = report.total_addresses;
            j["paid_addresses"] = report.paid_addresses;
            j["multi_payment_addresses"] = report.multi_payment_addresses;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", report.rate());
            j["rate"] = buf;
            emit(dbr.out, j.dump(2) + "\n");
            return 0;
        }

        if (*synth_cmd) {
            if (syn.spec_path.empty() == syn.fig.empty()) {
                throw InputError("synth: pass exactly one of --spec and --fig");
            }
            synth::Campaign campaign;
            std::string group;
            if (!syn.fig.empty()) {
                if (syn.fig == "1a") {
                    campaign = synth::gen_fig1a_drafts();
                } else if (syn.fig == "1b") {
                    campaign = synth::gen_fig1b_drafts();
                } else {
                    throw InputError("--fig must be 1a or 1b");
                }
                group = "fig" + syn.fig;
            } else {
                auto spec = synth::CampaignSpec::from_json(read_file(syn.spec_path));
                campaign = synth::gen_campaign_drafts(spec);
                group = spec.name;
            }
            synth::write_jsonl(syn.out, campaign.drafts);
            if (!syn.truth_out.empty()) write_file(syn.truth_out, campaign.truth.to_json());
            if (!syn.seeds_out.empty()) {
                std::string csv = "address,group_label\n";
                for (const auto& seed : campaign.truth.seeds) {
                    csv += seed;
                    csv += ',';
                    csv += group;
                    csv += '\n';
                }
                write_file(syn.seeds_out, csv);
            }
            if (!syn.tags_out.empty()) {
                std::string csv = "address,owner,category\n";
                for (const auto& tag : campaign.truth.tags) {
                    csv += tag.address;
                    csv += ',';
                    csv += tag.owner;
                    csv += ',';
                    csv += to_string(tag.category);
                    csv += '\n';
                }
                write_file(syn.tags_out, csv);
            }
            if (!syn.rates_out.empty()) {
                Day lo = 0, hi = 0;
                bool first = true;
                for (const auto& tx : campaign.drafts) {
                    Day day = *parse_date(tx.time.substr(0, 10));
                    if (first || day < lo) lo = day;
                    if (first || day > hi) hi = day;
                    first = false;
                }
                std::string csv = "date,usd_per_btc\n";
                for (Day day = lo - 30; day <= hi + 30; ++day) {
                    Cents cents = 2'000'000 + 10'000 * ((day - lo + 30) % 100);
                    csv += format_date(day);
                    csv += ',';
                    csv += format_usd(cents);
                    csv += '\n';
                }
                write_file(syn.rates_out, csv);
            }
            return 0;
        }

        if (*validate) {
            std::cout << (validate_btc_address(val.address) ? "valid" : "invalid") << "\n";
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
