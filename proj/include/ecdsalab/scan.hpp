#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ecdsalab/attacks.hpp"

namespace ecdsalab {

struct SkippedLine {
    std::size_t line_no = 0; // 1-based line in the source file
    std::string reason;

    bool operator==(const SkippedLine&) const = default;
};

// JSONL corpus: one signature record per line, blank lines ignored.
struct Corpus {
    std::string source;                    // path, or a label for in-memory input
    std::vector<SignedMessage> records;    // parse order preserved
    std::vector<std::size_t> line_numbers; // records[i] came from this 1-based line
    std::vector<SkippedLine> skipped;      // only populated in lenient mode
};

// lenient = true records parse failures and keeps going; lenient = false
// throws parse_error at the first bad line, citing source and line number.
Corpus load_corpus(const std::string& path, bool lenient);
Corpus corpus_from_string(const std::string& text, std::string source, bool lenient);

// A two-key attack candidate assembled from two cross-key r-collision
// groups over the same pair of public keys. indices play the attack's
// roles 1..4: 1,3 under the first key, 2,4 under the second; 1,2 share one
// r value and 3,4 the other.
struct CrossKeyQuadruple {
    std::string curve_id;
    std::array<std::size_t, 4> indices{};

    bool operator==(const CrossKeyQuadruple&) const = default;
};

// One attempted recovery. Success carries recovered_d (and recovered_k for
// nonce reuse); failure carries the error name instead.
struct ExploitOutcome {
    std::string attack; // "nonce_reuse" or "two_keys_shared_nonces"
    std::string curve_id;
    std::string pub_hex;
    std::optional<Int> recovered_d;
    std::optional<Int> recovered_k;
    std::vector<std::size_t> evidence; // record positions used
    std::optional<std::string> error;
};

struct ScanOptions {
    bool exploit = false; // run recoveries on the findings
    bool parallel = true; // use the OpenMP grouping kernel (same output as serial)
};

struct ScanReport {
    std::size_t record_count = 0;
    std::vector<SkippedLine> skipped;
    std::vector<DuplicateGroup> groups;
    std::vector<CrossKeyQuadruple> quadruples;
    std::vector<ExploitOutcome> exploits; // empty unless ScanOptions::exploit
};

// Groups r-collisions, pairs cross-key groups into two-key quadruple
// candidates, and (optionally) runs the matching recoveries. Output is a
// pure function of the corpus records.
ScanReport scan_corpus(const Corpus& corpus, const ScanOptions& opts);

// Deterministic rendering: identical corpus bytes give identical report
// bytes. Single JSON object, two-space indent, trailing newline.
std::string report_to_json(const ScanReport& report);

} // namespace ecdsalab
