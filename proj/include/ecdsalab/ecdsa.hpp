#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecdsalab/curve.hpp"
#include "ecdsalab/rng.hpp"

namespace ecdsalab {

struct KeyPair {
    Int d;     // private scalar, 1 <= d < n
    Point pub; // d * G
};

struct Signature {
    Int r;
    Int s;
};

/// One signature record: the unit of the JSONL corpus format.
/// `leaked_k` is present only when the signer deliberately revealed the nonce.
struct SignedMessage {
    std::string curve_id;
    Point pub;
    Int h; // message digest as a scalar mod n
    Signature sig;
    std::optional<std::vector<std::uint8_t>> msg;
    std::optional<Int> leaked_k;
};

/// How the signing nonce k is produced. Every variant still guarantees
/// 1 <= k < n; the non-uniform variants exist to plant vulnerable scenarios.
struct NoncePolicy {
    enum class Kind { uniform, fixed, reuse_tag, biased_top_zero, fault_on_r };

    Kind kind = Kind::uniform;
    Int fixed_k;          // Kind::fixed
    std::string tag;      // Kind::reuse_tag: same k for same tag within a session
    unsigned biased_bits = 0; // Kind::biased_top_zero: k < 2^(bitlen(n) - biased_bits)

    static NoncePolicy uniform() { return {}; }
    static NoncePolicy fixed(Int k) { return {Kind::fixed, std::move(k), {}, 0}; }
    static NoncePolicy reuse(std::string tag) { return {Kind::reuse_tag, {}, std::move(tag), 0}; }
    static NoncePolicy biased(unsigned zero_top_bits) {
        return {Kind::biased_top_zero, {}, {}, zero_top_bits};
    }
    static NoncePolicy fault() { return {Kind::fault_on_r, {}, {}, 0}; }
};

/// Output of FaultOnR signing: a valid signature plus a second one computed
/// with the same nonce and digest but a corrupted r.
struct FaultPair {
    SignedMessage valid;
    SignedMessage faulty;
};

/// d uniform in [1, n-1], pub = d*G.
KeyPair keygen(const CurveParams& c, Rng& rng);

/// SHA-256, truncated to the leftmost bitlen(n) bits, reduced mod n.
Int hash_to_scalar(std::span<const std::uint8_t> message, const CurveParams& c);

/// Signing session. Holds the per-tag nonce state used by the reuse policy,
/// so a session must be confined to one thread of control at a time.
class Signer {
public:
    Signer(const CurveParams& c, KeyPair kp, Rng& rng);

    /// r = (k*G).x mod n, s = k^-1 (h + d*r) mod n.
    /// Uniform/biased policies resample k when r or s comes out zero;
    /// deterministic policies raise Error(degenerate_signature) instead.
    /// The fault policy is served by sign_fault_pair, not here.
    SignedMessage sign(std::span<const std::uint8_t> message, const NoncePolicy& policy,
                       bool leak_nonce = false);
    SignedMessage sign_hash(const Int& h, const NoncePolicy& policy, bool leak_nonce = false);

    /// FaultOnR: one k, one h; the faulty half has r_f = corrupt(r) (one
    /// random bit of r flipped, reduced mod n) and s_f = k^-1 (h + d*r_f).
    FaultPair sign_fault_pair(std::span<const std::uint8_t> message, bool leak_nonce = false);
    FaultPair sign_fault_pair_hash(const Int& h, bool leak_nonce = false);

    const KeyPair& key() const { return kp_; }
    const CurveParams& curve() const { return curve_; }

private:
    Int pick_nonce(const NoncePolicy& policy);
    SignedMessage sign_with_nonce(const Int& h, const Int& k,
                                  const std::optional<std::vector<std::uint8_t>>& msg,
                                  bool leak_nonce);

    const CurveParams& curve_;
    KeyPair kp_;
    Rng& rng_;
    std::map<std::string, Int> reuse_nonces_;
};

/// Total verification: any malformed input (range-invalid r or s, foreign
/// public key) yields reject, never an error.
bool verify(const SignedMessage& sm, const CurveParams& c);

/// JSONL record encoding:
///   {"curve": id, "pub": hexpoint, "h": hex, "r": hex, "s": hex,
///    "msg": hex?, "k": hex?}
/// Scalars are fixed-width lowercase hex sized by the curve order.
std::string record_to_line(const SignedMessage& sm);

/// Parses and validates one record line: known curve, point on curve, and
/// h consistent with msg when msg is present.
SignedMessage record_from_line(std::string_view line);

std::string bytes_to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> hex_to_bytes(std::string_view hex);

} // namespace ecdsalab
