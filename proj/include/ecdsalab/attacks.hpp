#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecdsalab/bigmod.hpp"
#include "ecdsalab/ecdsa.hpp"

namespace ecdsalab {

// Outcome of a single-key recovery. Every attack validates d against the
// victim public key (d*G == Q) before returning, so a RecoveryResult always
// holds the real key; inconsistent inputs surface as errors instead.
struct RecoveryResult {
    Int d;                               // recovered private key
    std::optional<Int> k;                // recovered nonce, when derivable
    std::vector<SignedMessage> evidence; // the signatures that were used
};

// Outcome of the four-signature / two-key attack. x1 belongs to the public
// key behind signatures 1 and 3, x2 to the one behind signatures 2 and 4;
// k1 and k2 are the shared nonces recovered by the same linear solve.
struct TwoKeyRecovery {
    Int x1;
    Int x2;
    Int k1;
    Int k2;
    std::vector<SignedMessage> evidence; // the four signatures, in order
};

enum class DuplicateKind {
    same_key_reuse,     // one public key, one r, at least two distinct h
    cross_key_shared_r, // one r shared by two or more public keys
    exact_duplicate,    // same (pub, r, h): h1 - h2 = 0, not attackable
};

const char* duplicate_kind_name(DuplicateKind kind);

// A cluster of corpus positions sharing an r value, classified by kind.
// Indices are ascending positions into the scanned record list.
struct DuplicateGroup {
    DuplicateKind kind{};
    std::string curve_id;
    Int r;
    std::vector<std::size_t> indices;

    bool operator==(const DuplicateGroup&) const = default;
};

// d = r^-1 (s*k - h) mod n for a signature whose nonce k leaked.
// Throws wrong_nonce when the supplied k was not the signing nonce
// (detected by the public-key check), not_invertible when r has no inverse.
RecoveryResult recover_from_revealed_nonce(const SignedMessage& sm, const Int& k);

// Groups signatures whose r values collide: same-key groups with differing
// h (nonce reuse, directly attackable), cross-key shared-r groups (raw
// material for the two-key attack), and same-(pub, r, h) duplicates, which
// are reported but excluded from attackable groups. Ordering is
// deterministic: by first corpus occurrence, then by kind.
std::vector<DuplicateGroup> detect_duplicate_r(const std::vector<SignedMessage>& corpus);

// OpenMP variant of detect_duplicate_r: the corpus is partitioned across
// threads and per-chunk clusters are merged in chunk order, so the output
// is identical to the serial reference on any thread count.
std::vector<DuplicateGroup> detect_duplicate_r_parallel(const std::vector<SignedMessage>& corpus);

// Two signatures under one key with the same r: k = (h1-h2)/(s1-s2), then
// d = r^-1 (s1*k - h1). The equivalent direct quotient
// d = (s2*h1 - s1*h2) / (r*(s1-s2)) is evaluated as an internal
// cross-check. Throws precondition_failed on r/pub mismatch, h1 = h2, or
// s1 = +/-s2 (the degenerate routes), validation_failed if the recovered
// pair fails the public-key check.
RecoveryResult recover_from_nonce_reuse(const SignedMessage& sm1, const SignedMessage& sm2);

// Four signatures, two keys, two shared nonces: signatures 1 and 3 are
// under the first key, 2 and 4 under the second; 1,2 share one nonce
// (r1 = r2) and 3,4 the other (r3 = r4). Solves
//   s1*k1 - r*x1 = h1,  s2*k1 - r*x2 = h2,
//   s3*k2 - r'*x1 = h3, s4*k2 - r'*x2 = h4
// over Z_n by Gaussian elimination. Throws precondition_failed when the
// r-pattern or key pattern is absent, singular_system when no invertible
// pivot exists, validation_failed if a recovered key fails its public-key
// check.
TwoKeyRecovery recover_two_keys_shared_nonces(const SignedMessage& m1,
                                              const SignedMessage& m2,
                                              const SignedMessage& m3,
                                              const SignedMessage& m4);

// Closed-form candidates for (x1, x2) of the four-signature system,
// evaluated verbatim from the direct elimination formulas:
//   x1 = (h1 r' s2 s3 - h2 r' s1 s3 - h3 r s1 s4 + h4 r s1 s3)
//        / (r r' (s1 s4 - s2 s3))
//   x2 = (h1 r' s2 s4 - h2 r' s1 s4 - h3 r s2 s4 + h4 r s2 s3)
//        / (r r' (s2 s3 - s1 s4))
// where r = r1 = r2 and r' = r3 = r4. Kept strictly as a cross-check
// target for the Gaussian solver — never used for recovery. The x2 form
// carries a sign error in its denominator ordering and evaluates to
// -x2 mod n; the test suite records that verdict.
std::pair<Int, Int> two_key_closed_forms(const SignedMessage& m1,
                                         const SignedMessage& m2,
                                         const SignedMessage& m3,
                                         const SignedMessage& m4);

// One correct and one faulted signature over the same message and nonce:
// d = h (s - sf) (sf*r - s*rf)^-1, then k = d (r - rf) (s - sf)^-1, with
// s = k^-1 (h + r*d) re-checked. The algebra is symmetric in the two
// records, so they may arrive in either order. A pair that does not fit
// the fault model (different message, different key, different nonce)
// fails the public-key check and throws validation_failed.
RecoveryResult recover_from_fault(const SignedMessage& valid, const SignedMessage& faulty);

// Corpus of signatures under one key whose nonces all have B zero top
// bits: builds the hidden-number-problem lattice, LLL-reduces it, and
// checks every candidate row (both signs) against the public key. Throws
// precondition_failed on mixed public keys, not_found when no candidate
// validates (including B = 0, which carries no information).
RecoveryResult recover_from_biased_nonces(const std::vector<SignedMessage>& corpus, unsigned B);

} // namespace ecdsalab
