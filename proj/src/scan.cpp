#include "ecdsalab/scan.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "ecdsalab/errors.hpp"

namespace ecdsalab {

using ordered_json = nlohmann::ordered_json;

namespace {

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

Corpus parse_lines(std::istream& in, std::string source, bool lenient) {
    Corpus corpus;
    corpus.source = std::move(source);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        try {
            corpus.records.push_back(record_from_line(line));
            corpus.line_numbers.push_back(line_no);
        } catch (const Error& e) {
            if (!lenient)
                raise(Errc::parse_error, corpus.source + ":" + std::to_string(line_no) +
                                             ": " + e.what());
            corpus.skipped.push_back({line_no, e.what()});
        }
    }
    return corpus;
}

} // namespace

Corpus load_corpus(const std::string& path, bool lenient) {
    std::ifstream in(path);
    if (!in) raise(Errc::parse_error, "cannot open corpus file: " + path);
    return parse_lines(in, path, lenient);
}

Corpus corpus_from_string(const std::string& text, std::string source, bool lenient) {
    std::istringstream in(text);
    return parse_lines(in, std::move(source), lenient);
}

namespace {

// Pairs cross-key groups that cover the same (curve, pub pair) into
// quadruples, greedily in group order: the first unpaired group supplies
// roles 1,2 and the next one roles 3,4. Within a group, each public key is
// represented by its earliest record; pub pairs are ordered by encoding.
std::vector<CrossKeyQuadruple> pair_quadruples(const std::vector<SignedMessage>& records,
                                               const std::vector<DuplicateGroup>& groups) {
    struct Pending {
        std::size_t idx_a;
        std::size_t idx_b;
    };
    std::map<std::string, std::vector<Pending>> waiting;
    std::vector<CrossKeyQuadruple> out;

    for (const DuplicateGroup& g : groups) {
        if (g.kind != DuplicateKind::cross_key_shared_r) continue;
        const CurveParams& c = registry_get(g.curve_id);

        std::map<std::string, std::size_t> first_by_pub; // pub hex -> first index
        for (std::size_t i : g.indices)
            first_by_pub.emplace(point_to_hex(records[i].pub, c), i);

        std::vector<std::pair<std::string, std::size_t>> pubs(first_by_pub.begin(),
                                                              first_by_pub.end());
        for (std::size_t a = 0; a < pubs.size(); ++a) {
            for (std::size_t b = a + 1; b < pubs.size(); ++b) {
                std::string key = g.curve_id + '|' + pubs[a].first + '|' + pubs[b].first;
                auto& fifo = waiting[key];
                if (fifo.empty()) {
                    fifo.push_back({pubs[a].second, pubs[b].second});
                } else {
                    Pending p = fifo.front();
                    fifo.erase(fifo.begin());
                    out.push_back(
                        {g.curve_id, {p.idx_a, p.idx_b, pubs[a].second, pubs[b].second}});
                }
            }
        }
    }
    return out;
}

std::vector<ExploitOutcome> run_exploits(const std::vector<SignedMessage>& records,
                                         const std::vector<DuplicateGroup>& groups,
                                         const std::vector<CrossKeyQuadruple>& quads) {
    std::vector<ExploitOutcome> out;

    for (const DuplicateGroup& g : groups) {
        if (g.kind != DuplicateKind::same_key_reuse) continue;
        const CurveParams& c = registry_get(g.curve_id);
        std::size_t first = g.indices.front();
        std::size_t other = first;
        for (std::size_t i : g.indices) {
            if (records[i].h != records[first].h) {
                other = i;
                break;
            }
        }
        ExploitOutcome o;
        o.attack = "nonce_reuse";
        o.curve_id = g.curve_id;
        o.pub_hex = point_to_hex(records[first].pub, c);
        o.evidence = {first, other};
        try {
            RecoveryResult rec = recover_from_nonce_reuse(records[first], records[other]);
            o.recovered_d = rec.d;
            o.recovered_k = rec.k;
        } catch (const Error& e) {
            o.error = errc_name(e.code());
        }
        out.push_back(std::move(o));
    }

    for (const CrossKeyQuadruple& q : quads) {
        const CurveParams& c = registry_get(q.curve_id);
        std::vector<std::size_t> evidence(q.indices.begin(), q.indices.end());
        try {
            TwoKeyRecovery rec = recover_two_keys_shared_nonces(
                records[q.indices[0]], records[q.indices[1]], records[q.indices[2]],
                records[q.indices[3]]);
            ExploitOutcome first;
            first.attack = "two_keys_shared_nonces";
            first.curve_id = q.curve_id;
            first.pub_hex = point_to_hex(records[q.indices[0]].pub, c);
            first.recovered_d = rec.x1;
            first.evidence = evidence;
            out.push_back(std::move(first));

            ExploitOutcome second;
            second.attack = "two_keys_shared_nonces";
            second.curve_id = q.curve_id;
            second.pub_hex = point_to_hex(records[q.indices[1]].pub, c);
            second.recovered_d = rec.x2;
            second.evidence = evidence;
            out.push_back(std::move(second));
        } catch (const Error& e) {
            ExploitOutcome failed;
            failed.attack = "two_keys_shared_nonces";
            failed.curve_id = q.curve_id;
            failed.pub_hex = point_to_hex(records[q.indices[0]].pub, c);
            failed.evidence = evidence;
            failed.error = errc_name(e.code());
            out.push_back(std::move(failed));
        }
    }
    return out;
}

} // namespace

ScanReport scan_corpus(const Corpus& corpus, const ScanOptions& opts) {
    ScanReport report;
    report.record_count = corpus.records.size();
    report.skipped = corpus.skipped;
    report.groups = opts.parallel ? detect_duplicate_r_parallel(corpus.records)
                                  : detect_duplicate_r(corpus.records);
    report.quadruples = pair_quadruples(corpus.records, report.groups);
    if (opts.exploit)
        report.exploits = run_exploits(corpus.records, report.groups, report.quadruples);
    return report;
}

std::string report_to_json(const ScanReport& report) {
    ordered_json j;
    j["records"] = report.record_count;

    j["skipped"] = ordered_json::array();
    for (const SkippedLine& s : report.skipped)
        j["skipped"].push_back({{"line", s.line_no}, {"reason", s.reason}});

    std::size_t reuse = 0, cross = 0, dups = 0;
    for (const DuplicateGroup& g : report.groups) {
        if (g.kind == DuplicateKind::same_key_reuse) ++reuse;
        if (g.kind == DuplicateKind::cross_key_shared_r) ++cross;
        if (g.kind == DuplicateKind::exact_duplicate) ++dups;
    }
    std::size_t recovered = 0;
    for (const ExploitOutcome& o : report.exploits)
        if (o.recovered_d) ++recovered;
    j["counts"] = {{"same_key_reuse", reuse},
                   {"cross_key_shared_r", cross},
                   {"exact_duplicate", dups},
                   {"quadruples", report.quadruples.size()},
                   {"recovered_keys", recovered}};

    j["groups"] = ordered_json::array();
    for (const DuplicateGroup& g : report.groups) {
        const CurveParams& c = registry_get(g.curve_id);
        ordered_json row;
        row["kind"] = duplicate_kind_name(g.kind);
        row["curve"] = g.curve_id;
        row["r"] = to_hex_fixed(c.order.reduce(g.r), c.scalar_bytes());
        row["indices"] = g.indices;
        j["groups"].push_back(std::move(row));
    }

    j["quadruples"] = ordered_json::array();
    for (const CrossKeyQuadruple& q : report.quadruples)
        j["quadruples"].push_back({{"curve", q.curve_id}, {"indices", q.indices}});

    j["exploits"] = ordered_json::array();
    for (const ExploitOutcome& o : report.exploits) {
        const CurveParams& c = registry_get(o.curve_id);
        ordered_json row;
        row["attack"] = o.attack;
        row["curve"] = o.curve_id;
        row["pub"] = o.pub_hex;
        if (o.recovered_d) row["recovered_d"] = to_hex_fixed(*o.recovered_d, c.scalar_bytes());
        if (o.recovered_k) row["recovered_k"] = to_hex_fixed(*o.recovered_k, c.scalar_bytes());
        if (o.error) row["error"] = *o.error;
        row["evidence"] = o.evidence;
        j["exploits"].push_back(std::move(row));
    }

    return j.dump(2) + "\n";
}

} // namespace ecdsalab
