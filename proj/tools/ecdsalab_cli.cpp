// ecdsalab — command-line surface of the workbench: key generation, signing
// under configurable nonce policies, verification, corpus scanning, the five
// key-recovery attacks, and deterministic end-to-end demos.
//
// Exit codes: 0 success/accept, 1 verify-reject, 2 usage/parse error,
// 3 attack not applicable (recovery preconditions unmet or nothing found).

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ecdsalab/attacks.hpp"
#include "ecdsalab/ecdsa.hpp"
#include "ecdsalab/lattice.hpp"
#include "ecdsalab/scan.hpp"

using namespace ecdsalab;
using ordered_json = nlohmann::ordered_json;

namespace {

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::wrong_nonce:
    case Errc::not_found:
    case Errc::validation_failed:
    case Errc::precondition_failed:
    case Errc::singular_system:
    case Errc::not_invertible:
    case Errc::degenerate_signature:
    case Errc::bad_bound:
    case Errc::dependent_rows:
        return 3; // the attack/operation does not apply to these inputs
    default:
        return 2; // malformed input: parse errors, unknown curves, bad points
    }
}

std::unique_ptr<Rng> make_rng(const std::optional<std::uint64_t>& seed) {
    if (seed) return std::make_unique<SeededRng>(*seed);
    return std::make_unique<SystemRng>();
}

std::string read_stream(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Strict JSONL read; path "-" means stdin.
std::vector<SignedMessage> read_records(const std::string& path) {
    Corpus corpus = (path == "-") ? corpus_from_string(read_stream(std::cin), "<stdin>", false)
                                  : load_corpus(path, false);
    return std::move(corpus.records);
}

struct Keyfile {
    const CurveParams* curve;
    KeyPair kp;
};

Keyfile load_keyfile(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::parse_error, "cannot open key file: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(read_stream(in));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::parse_error, path + ": " + e.what());
    }
    for (const char* field : {"curve", "d", "pub"})
        if (!j.contains(field) || !j[field].is_string())
            raise(Errc::parse_error, path + ": missing or non-string field \"" +
                                         std::string(field) + "\"");
    const CurveParams& c = registry_get(j["curve"].get<std::string>());
    Keyfile kf{&c, {from_hex(j["d"].get<std::string>()),
                    point_from_hex(j["pub"].get<std::string>(), c)}};
    return kf;
}

std::string keyfile_json(const CurveParams& c, const KeyPair& kp) {
    ordered_json j;
    j["curve"] = c.id;
    j["d"] = to_hex_fixed(kp.d, c.scalar_bytes());
    j["pub"] = point_to_hex(kp.pub, c);
    return j.dump(2) + "\n";
}

NoncePolicy parse_policy(const std::string& text) {
    if (text == "uniform") return NoncePolicy::uniform();
    if (text == "fault") return NoncePolicy::fault();
    if (text.starts_with("fixed:")) return NoncePolicy::fixed(from_hex(text.substr(6)));
    if (text.starts_with("reuse:")) {
        std::string tag = text.substr(6);
        if (tag.empty()) raise(Errc::parse_error, "reuse policy needs a tag: reuse:<tag>");
        return NoncePolicy::reuse(std::move(tag));
    }
    if (text.starts_with("biased:")) {
        unsigned bits = 0;
        try {
            bits = static_cast<unsigned>(std::stoul(text.substr(7)));
        } catch (const std::exception&) {
            raise(Errc::parse_error, "biased policy needs a bit count: biased:<B>");
        }
        return NoncePolicy::biased(bits);
    }
    raise(Errc::parse_error,
          "unknown nonce policy \"" + text +
              "\" (uniform, fixed:<hex>, reuse:<tag>, biased:<B>, fault)");
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) raise(Errc::parse_error, "cannot open output file: " + out_path);
    out << text;
}

ordered_json recovery_json(const std::string& attack, const std::string& curve_id,
                           const std::string& pub_hex, const Int& d,
                           const std::optional<Int>& k,
                           const std::vector<std::size_t>& evidence) {
    const CurveParams& c = registry_get(curve_id);
    ordered_json j;
    j["attack"] = attack;
    j["curve"] = curve_id;
    j["pub"] = pub_hex;
    j["recovered_d"] = to_hex_fixed(d, c.scalar_bytes());
    if (k) j["recovered_k"] = to_hex_fixed(*k, c.scalar_bytes());
    j["evidence"] = evidence;
    return j;
}

void require_records(const std::vector<SignedMessage>& records, std::size_t want,
                     const char* what) {
    if (records.size() < want)
        raise(Errc::precondition_failed, std::string(what) + " needs at least " +
                                             std::to_string(want) + " records, got " +
                                             std::to_string(records.size()));
}

// ---- demo ------------------------------------------------------------

struct DemoEnv {
    const CurveParams& c;
    SeededRng rng;
    KeyPair kp;

    DemoEnv(const CurveParams& curve, std::uint64_t seed)
        : c(curve), rng(seed), kp(keygen(curve, rng)) {}
};

void demo_header(const DemoEnv& env, const char* scenario, std::uint64_t seed) {
    std::cout << "# scenario: " << scenario << "\n";
    std::cout << "curve: " << env.c.id << "\n";
    std::cout << "seed: " << seed << "\n";
    std::cout << "pub: " << point_to_hex(env.kp.pub, env.c) << "\n";
    std::cout << "planted d: " << to_hex_fixed(env.kp.d, env.c.scalar_bytes()) << "\n";
}

void demo_recovered(const DemoEnv& env, const Int& d) {
    if (d != env.kp.d) raise(Errc::validation_failed, "demo recovery mismatch");
    std::cout << "RECOVERED " << to_hex_fixed(d, env.c.scalar_bytes()) << "\n";
}

void demo_revealed_nonce(DemoEnv& env) {
    Signer signer(env.c, env.kp, env.rng);
    std::vector<std::uint8_t> msg = {'d', 'e', 'm', 'o', ' ', '1'};
    SignedMessage sm = signer.sign(msg, NoncePolicy::uniform(), /*leak_nonce=*/true);
    std::cout << "record: " << record_to_line(sm) << "\n";
    std::cout << "leaked k: " << to_hex_fixed(*sm.leaked_k, env.c.scalar_bytes()) << "\n";
    std::cout << "d = r^-1 (s k - h) mod n\n";
    RecoveryResult rec = recover_from_revealed_nonce(sm, *sm.leaked_k);
    demo_recovered(env, rec.d);
}

void demo_reuse(DemoEnv& env) {
    Signer signer(env.c, env.kp, env.rng);
    SignedMessage a = signer.sign_hash(env.rng.scalar(env.c.n), NoncePolicy::reuse("demo"));
    SignedMessage b = signer.sign_hash(env.rng.scalar(env.c.n), NoncePolicy::reuse("demo"));
    std::cout << "record 1: " << record_to_line(a) << "\n";
    std::cout << "record 2: " << record_to_line(b) << "\n";
    std::cout << "shared r: " << to_hex_fixed(a.sig.r, env.c.scalar_bytes()) << "\n";
    std::cout << "k = (h1 - h2) / (s1 - s2) mod n, then d = r^-1 (s1 k - h1) mod n\n";
    RecoveryResult rec = recover_from_nonce_reuse(a, b);
    std::cout << "recovered k: " << to_hex_fixed(*rec.k, env.c.scalar_bytes()) << "\n";
    demo_recovered(env, rec.d);
}

void demo_two_key(DemoEnv& env) {
    KeyPair second = keygen(env.c, env.rng);
    Signer s1(env.c, env.kp, env.rng);
    Signer s2(env.c, second, env.rng);
    Int k1 = env.rng.scalar(env.c.n);
    Int k2 = env.rng.scalar(env.c.n);
    SignedMessage m1 = s1.sign_hash(env.rng.scalar(env.c.n), NoncePolicy::fixed(k1));
    SignedMessage m2 = s2.sign_hash(env.rng.scalar(env.c.n), NoncePolicy::fixed(k1));
    SignedMessage m3 = s1.sign_hash(env.rng.scalar(env.c.n), NoncePolicy::fixed(k2));
    SignedMessage m4 = s2.sign_hash(env.rng.scalar(env.c.n), NoncePolicy::fixed(k2));
    std::cout << "pub 2: " << point_to_hex(second.pub, env.c) << "\n";
    std::cout << "planted x2: " << to_hex_fixed(second.d, env.c.scalar_bytes()) << "\n";
    const SignedMessage* records[] = {&m1, &m2, &m3, &m4};
    for (int i = 0; i < 4; ++i)
        std::cout << "record " << (i + 1) << ": " << record_to_line(*records[i]) << "\n";
    std::cout << "r shared by records 1,2: " << to_hex_fixed(m1.sig.r, env.c.scalar_bytes())
              << "\n";
    std::cout << "r shared by records 3,4: " << to_hex_fixed(m3.sig.r, env.c.scalar_bytes())
              << "\n";
    std::cout << "solving s_i k - r x = h_i for (k1, k2, x1, x2) over Z_n\n";
    TwoKeyRecovery rec = recover_two_keys_shared_nonces(m1, m2, m3, m4);
    if (rec.x1 != env.kp.d || rec.x2 != second.d)
        raise(Errc::validation_failed, "demo recovery mismatch");
    std::cout << "RECOVERED x1=" << to_hex_fixed(rec.x1, env.c.scalar_bytes()) << "\n";
    std::cout << "RECOVERED x2=" << to_hex_fixed(rec.x2, env.c.scalar_bytes()) << "\n";
}

void demo_fault(DemoEnv& env) {
    Signer signer(env.c, env.kp, env.rng);
    FaultPair pair = signer.sign_fault_pair_hash(env.rng.scalar(env.c.n));
    std::cout << "valid record:  " << record_to_line(pair.valid) << "\n";
    std::cout << "faulty record: " << record_to_line(pair.faulty) << "\n";
    std::cout << "r:   " << to_hex_fixed(pair.valid.sig.r, env.c.scalar_bytes()) << "\n";
    std::cout << "r_f: " << to_hex_fixed(pair.faulty.sig.r, env.c.scalar_bytes()) << "\n";
    std::cout << "d = h (s - s_f) (s_f r - s r_f)^-1 mod n\n";
    RecoveryResult rec = recover_from_fault(pair.valid, pair.faulty);
    std::cout << "recovered k: " << to_hex_fixed(*rec.k, env.c.scalar_bytes()) << "\n";
    demo_recovered(env, rec.d);
}

void demo_biased(DemoEnv& env) {
    unsigned nbits = static_cast<unsigned>(env.c.order.bits());
    unsigned bias = nbits >= 256 ? 128 : 8;
    std::size_t count = nbits >= 256 ? 4 : 12;
    Signer signer(env.c, env.kp, env.rng);
    std::vector<SignedMessage> corpus;
    std::cout << "bias: " << bias << " zero top bits, " << count << " signatures\n";
    for (std::size_t i = 0; i < count; ++i) {
        corpus.push_back(signer.sign_hash(env.rng.scalar(env.c.n), NoncePolicy::biased(bias)));
        std::cout << "record " << (i + 1) << ": " << record_to_line(corpus.back()) << "\n";
    }

    const ModCtx& ord = env.c.order;
    HnpInstance inst;
    inst.n = env.c.n;
    inst.L = nbits - bias;
    for (const SignedMessage& sm : corpus) {
        Int sinv = ord.inv(sm.sig.s);
        inst.pairs.emplace_back(ord.mul(sm.sig.r, sinv), ord.mul(sm.h, sinv));
    }
    LatticeBasis basis = build_hnp_lattice(inst);
    std::cout << "hnp lattice basis:\n" << basis_to_string(basis);
    std::cout << "reduced basis:\n" << basis_to_string(lll_reduce(basis));

    RecoveryResult rec = recover_from_biased_nonces(corpus, bias);
    demo_recovered(env, rec.d);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ECDSA nonce-misuse cryptanalysis workbench"};
    app.require_subcommand(1);
    bool json_mode = false; // diagnostics as JSON on stdout

    int rc = 0;

    // keygen ------------------------------------------------------------
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
    std::string kg_curve = "secp256k1";
    std::string kg_out;
    std::optional<std::uint64_t> kg_seed;
    keygen_cmd->add_option("--curve", kg_curve, "Curve id")->envname("ECDSALAB_CURVE");
    keygen_cmd->add_option("--out", kg_out, "Write the key file here instead of stdout");
    keygen_cmd->add_option("--seed", kg_seed,
                           "Deterministic PRNG seed (default: OS entropy)");
    keygen_cmd->add_flag("--json", json_mode, "JSON output (already the default)");
    keygen_cmd->callback([&] {
        json_mode = true;
        const CurveParams& c = registry_get(kg_curve);
        auto rng = make_rng(kg_seed);
        KeyPair kp = keygen(c, *rng);
        write_output(keyfile_json(c, kp), kg_out);
    });

    // sign ---------------------------------------------------------------
    auto* sign_cmd = app.add_subcommand("sign", "Sign messages under a nonce policy");
    std::string sg_key, sg_policy = "uniform", sg_out;
    std::vector<std::string> sg_msgs, sg_msg_hex, sg_hashes;
    bool sg_leak = false;
    std::optional<std::uint64_t> sg_seed;
    sign_cmd->add_option("--key", sg_key, "Key file from keygen")->required();
    sign_cmd->add_option("--msg", sg_msgs, "Message as UTF-8 text (repeatable)");
    sign_cmd->add_option("--msg-hex", sg_msg_hex, "Message as hex bytes (repeatable)");
    sign_cmd->add_option("--hash", sg_hashes, "Digest scalar as hex (repeatable)");
    sign_cmd->add_option("--policy", sg_policy,
                         "uniform | fixed:<hex> | reuse:<tag> | biased:<B> | fault");
    sign_cmd->add_flag("--leak-nonce", sg_leak, "Embed the signing nonce in the record");
    sign_cmd->add_option("--seed", sg_seed, "Deterministic PRNG seed");
    sign_cmd->add_option("--out", sg_out, "Write JSONL here instead of stdout");
    sign_cmd->add_flag("--json", json_mode, "JSON output (already the default)");
    sign_cmd->callback([&] {
        json_mode = true;
        if (sg_msgs.empty() && sg_msg_hex.empty() && sg_hashes.empty())
            raise(Errc::parse_error, "nothing to sign: pass --msg, --msg-hex or --hash");
        Keyfile kf = load_keyfile(sg_key);
        auto rng = make_rng(sg_seed);
        Signer signer(*kf.curve, kf.kp, *rng);
        NoncePolicy policy = parse_policy(sg_policy);

        std::string lines;
        auto emit = [&](const SignedMessage& sm) { lines += record_to_line(sm) + "\n"; };
        auto sign_bytes = [&](const std::vector<std::uint8_t>& bytes) {
            if (policy.kind == NoncePolicy::Kind::fault_on_r) {
                FaultPair pair = signer.sign_fault_pair(bytes, sg_leak);
                emit(pair.valid);
                emit(pair.faulty);
            } else {
                emit(signer.sign(bytes, policy, sg_leak));
            }
        };
        for (const std::string& m : sg_msgs)
            sign_bytes(std::vector<std::uint8_t>(m.begin(), m.end()));
        for (const std::string& m : sg_msg_hex) sign_bytes(hex_to_bytes(m));
        for (const std::string& h : sg_hashes) {
            Int digest = kf.curve->order.reduce(from_hex(h));
            if (policy.kind == NoncePolicy::Kind::fault_on_r) {
                FaultPair pair = signer.sign_fault_pair_hash(digest, sg_leak);
                emit(pair.valid);
                emit(pair.faulty);
            } else {
                emit(signer.sign_hash(digest, policy, sg_leak));
            }
        }
        write_output(lines, sg_out);
    });

    // verify ---------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "Verify signature records");
    std::string vf_in = "-", vf_record;
    bool vf_json = false;
    verify_cmd->add_option("--in", vf_in, "JSONL file of records (\"-\" = stdin)");
    verify_cmd->add_option("--record", vf_record, "Verify a single record given inline");
    verify_cmd->add_flag("--json", vf_json, "JSON output");
    verify_cmd->callback([&] {
        json_mode = vf_json;
        std::vector<SignedMessage> records;
        if (!vf_record.empty())
            records.push_back(record_from_line(vf_record));
        else
            records = read_records(vf_in);
        if (records.empty()) raise(Errc::parse_error, "no records to verify");
        bool all_ok = true;
        ordered_json results = ordered_json::array();
        for (const SignedMessage& sm : records) {
            bool ok = verify(sm, registry_get(sm.curve_id));
            all_ok = all_ok && ok;
            if (vf_json)
                results.push_back(ok);
            else
                std::cout << (ok ? "accept" : "reject") << "\n";
        }
        if (vf_json) {
            ordered_json j;
            j["results"] = results;
            j["accept"] = all_ok;
            std::cout << j.dump(2) << "\n";
        }
        rc = all_ok ? 0 : 1;
    });

    // scan ---------------------------------------------------------------
    auto* scan_cmd = app.add_subcommand("scan", "Scan a JSONL corpus for r collisions");
    std::string sc_path;
    bool sc_exploit = false, sc_lenient = false, sc_serial = false;
    scan_cmd->add_option("corpus", sc_path, "Corpus path (\"-\" = stdin)")->required();
    scan_cmd->add_flag("--exploit", sc_exploit, "Run recoveries on the findings");
    scan_cmd->add_flag("--lenient", sc_lenient, "Skip malformed lines instead of failing");
    scan_cmd->add_flag("--serial", sc_serial, "Use the serial reference grouping");
    scan_cmd->add_flag("--json", json_mode, "JSON output (already the default)");
    scan_cmd->callback([&] {
        json_mode = true;
        Corpus corpus = (sc_path == "-")
                            ? corpus_from_string(read_stream(std::cin), "<stdin>", sc_lenient)
                            : load_corpus(sc_path, sc_lenient);
        ScanOptions opts;
        opts.exploit = sc_exploit;
        opts.parallel = !sc_serial;
        std::cout << report_to_json(scan_corpus(corpus, opts));
    });

    // attack ---------------------------------------------------------------
    auto* attack_cmd = app.add_subcommand("attack", "Run a key-recovery attack");
    attack_cmd->require_subcommand(1);

    auto* atk_revealed = attack_cmd->add_subcommand(
        "revealed-nonce", "Recover d from one signature with a known nonce");
    std::string arv_in = "-", arv_nonce;
    atk_revealed->add_option("--in", arv_in, "JSONL input (\"-\" = stdin), first record");
    atk_revealed->add_option("--nonce", arv_nonce,
                             "Nonce as hex (default: the record's leaked k)");
    atk_revealed->add_flag("--json", json_mode, "JSON output (already the default)");
    atk_revealed->callback([&] {
        json_mode = true;
        std::vector<SignedMessage> records = read_records(arv_in);
        require_records(records, 1, "revealed-nonce");
        const SignedMessage& sm = records[0];
        Int k;
        if (!arv_nonce.empty())
            k = from_hex(arv_nonce);
        else if (sm.leaked_k)
            k = *sm.leaked_k;
        else
            raise(Errc::precondition_failed,
                  "no nonce available: pass --nonce or a record with a leaked k");
        RecoveryResult rec = recover_from_revealed_nonce(sm, k);
        const CurveParams& c = registry_get(sm.curve_id);
        std::cout << recovery_json("revealed_nonce", sm.curve_id, point_to_hex(sm.pub, c),
                                   rec.d, rec.k, {0})
                         .dump(2)
                  << "\n";
    });

    auto* atk_reuse = attack_cmd->add_subcommand(
        "reuse", "Recover d and k from two signatures sharing a nonce");
    std::string aru_in = "-";
    atk_reuse->add_option("--in", aru_in, "JSONL input (\"-\" = stdin), first two records");
    atk_reuse->add_flag("--json", json_mode, "JSON output (already the default)");
    atk_reuse->callback([&] {
        json_mode = true;
        std::vector<SignedMessage> records = read_records(aru_in);
        require_records(records, 2, "reuse");
        RecoveryResult rec = recover_from_nonce_reuse(records[0], records[1]);
        const CurveParams& c = registry_get(records[0].curve_id);
        std::cout << recovery_json("nonce_reuse", records[0].curve_id,
                                   point_to_hex(records[0].pub, c), rec.d, rec.k, {0, 1})
                         .dump(2)
                  << "\n";
    });

    auto* atk_two_key = attack_cmd->add_subcommand(
        "two-key", "Recover two keys from four signatures sharing two nonces");
    std::string atk_in = "-";
    atk_two_key->add_option("--in", atk_in, "JSONL input (\"-\" = stdin), first four records");
    atk_two_key->add_flag("--json", json_mode, "JSON output (already the default)");
    atk_two_key->callback([&] {
        json_mode = true;
        std::vector<SignedMessage> records = read_records(atk_in);
        require_records(records, 4, "two-key");
        TwoKeyRecovery rec =
            recover_two_keys_shared_nonces(records[0], records[1], records[2], records[3]);
        const CurveParams& c = registry_get(records[0].curve_id);
        ordered_json out = ordered_json::array();
        out.push_back(recovery_json("two_keys_shared_nonces", records[0].curve_id,
                                    point_to_hex(records[0].pub, c), rec.x1, std::nullopt,
                                    {0, 1, 2, 3}));
        out.push_back(recovery_json("two_keys_shared_nonces", records[1].curve_id,
                                    point_to_hex(records[1].pub, c), rec.x2, std::nullopt,
                                    {0, 1, 2, 3}));
        std::cout << out.dump(2) << "\n";
    });

    auto* atk_fault = attack_cmd->add_subcommand(
        "fault", "Recover d from a valid/faulty signature pair");
    std::string afl_in = "-";
    atk_fault->add_option("--in", afl_in,
                          "JSONL input (\"-\" = stdin), records: valid then faulty");
    atk_fault->add_flag("--json", json_mode, "JSON output (already the default)");
    atk_fault->callback([&] {
        json_mode = true;
        std::vector<SignedMessage> records = read_records(afl_in);
        require_records(records, 2, "fault");
        RecoveryResult rec = recover_from_fault(records[0], records[1]);
        const CurveParams& c = registry_get(records[0].curve_id);
        std::cout << recovery_json("fault", records[0].curve_id,
                                   point_to_hex(records[0].pub, c), rec.d, rec.k, {0, 1})
                         .dump(2)
                  << "\n";
    });

    auto* atk_biased = attack_cmd->add_subcommand(
        "biased", "Recover d from signatures with biased nonces (lattice attack)");
    std::string abi_in = "-";
    unsigned abi_bias = 0;
    bool abi_dump = false;
    atk_biased->add_option("--in", abi_in, "JSONL input (\"-\" = stdin), all records");
    atk_biased->add_option("--bias", abi_bias, "Zero top bits forced in every nonce")
        ->required();
    atk_biased->add_flag("--dump-lattice", abi_dump,
                         "Dump the HNP basis and its reduction to stderr");
    atk_biased->add_flag("--json", json_mode, "JSON output (already the default)");
    atk_biased->callback([&] {
        json_mode = true;
        std::vector<SignedMessage> records = read_records(abi_in);
        require_records(records, 2, "biased");
        if (abi_dump) {
            const CurveParams& c = registry_get(records[0].curve_id);
            const ModCtx& ord = c.order;
            if (abi_bias > 0 && abi_bias < ord.bits()) {
                HnpInstance inst;
                inst.n = c.n;
                inst.L = static_cast<unsigned>(ord.bits()) - abi_bias;
                for (const SignedMessage& sm : records) {
                    Int sinv = ord.inv(sm.sig.s);
                    inst.pairs.emplace_back(ord.mul(sm.sig.r, sinv), ord.mul(sm.h, sinv));
                }
                LatticeBasis basis = build_hnp_lattice(inst);
                std::cerr << "hnp lattice basis:\n" << basis_to_string(basis);
                std::cerr << "reduced basis:\n" << basis_to_string(lll_reduce(basis));
            }
        }
        RecoveryResult rec = recover_from_biased_nonces(records, abi_bias);
        const CurveParams& c = registry_get(records[0].curve_id);
        std::vector<std::size_t> evidence(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) evidence[i] = i;
        std::cout << recovery_json("biased_nonces", records[0].curve_id,
                                   point_to_hex(records[0].pub, c), rec.d, rec.k, evidence)
                         .dump(2)
                  << "\n";
    });

    // demo ---------------------------------------------------------------
    auto* demo_cmd = app.add_subcommand("demo", "Deterministic end-to-end attack walkthrough");
    std::string dm_scenario, dm_curve = "secp256k1";
    std::uint64_t dm_seed = 1;
    demo_cmd
        ->add_option("scenario", dm_scenario,
                     "revealed-nonce | reuse | two-key | fault | biased")
        ->required();
    demo_cmd->add_option("--curve", dm_curve, "Curve id")->envname("ECDSALAB_CURVE");
    demo_cmd->add_option("--seed", dm_seed, "PRNG seed (default 1)");
    demo_cmd->add_flag("--json", json_mode, "(accepted for symmetry; transcript is text)");
    demo_cmd->callback([&] {
        const CurveParams& c = registry_get(dm_curve);
        DemoEnv env(c, dm_seed);
        demo_header(env, dm_scenario.c_str(), dm_seed);
        if (dm_scenario == "revealed-nonce")
            demo_revealed_nonce(env);
        else if (dm_scenario == "reuse")
            demo_reuse(env);
        else if (dm_scenario == "two-key")
            demo_two_key(env);
        else if (dm_scenario == "fault")
            demo_fault(env);
        else if (dm_scenario == "biased")
            demo_biased(env);
        else
            raise(Errc::parse_error, "unknown scenario: " + dm_scenario);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        if (json_mode) {
            ordered_json j;
            j["error"] = errc_name(e.code());
            j["detail"] = e.what();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
