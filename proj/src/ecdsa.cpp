#include "ecdsalab/ecdsa.hpp"

#include <json.hpp>

#include "ecdsalab/sha256.hpp"

namespace ecdsalab {

using ordered_json = nlohmann::ordered_json;

KeyPair keygen(const CurveParams& c, Rng& rng) {
    Int d = rng.scalar(c.n); // [1, n-1], zero excluded by construction
    return KeyPair{d, scalar_mul(d, c.g, c)};
}

Int hash_to_scalar(std::span<const std::uint8_t> message, const CurveParams& c) {
    auto digest = sha256(message);
    Int e = from_bytes(digest);
    std::size_t nbits = c.order.bits();
    if (nbits < 256) e >>= (256 - nbits); // keep the leftmost bitlen(n) bits
    return c.order.reduce(e);
}

Signer::Signer(const CurveParams& c, KeyPair kp, Rng& rng) : curve_(c), kp_(std::move(kp)), rng_(rng) {
    if (kp_.d < 1 || kp_.d >= c.n)
        raise(Errc::precondition_failed, "private scalar out of range");
    require_on_curve(kp_.pub, c);
    if (scalar_mul(kp_.d, c.g, c) != kp_.pub)
        raise(Errc::precondition_failed, "public key does not match private scalar");
}

Int Signer::pick_nonce(const NoncePolicy& policy) {
    switch (policy.kind) {
        case NoncePolicy::Kind::uniform:
            return rng_.scalar(curve_.n);
        case NoncePolicy::Kind::fixed:
            if (policy.fixed_k < 1 || policy.fixed_k >= curve_.n)
                raise(Errc::precondition_failed, "fixed nonce out of range");
            return policy.fixed_k;
        case NoncePolicy::Kind::reuse_tag: {
            auto it = reuse_nonces_.find(policy.tag);
            if (it != reuse_nonces_.end()) return it->second;
            Int k = rng_.scalar(curve_.n);
            reuse_nonces_.emplace(policy.tag, k);
            return k;
        }
        case NoncePolicy::Kind::biased_top_zero: {
            std::size_t nbits = curve_.order.bits();
            if (policy.biased_bits >= nbits)
                raise(Errc::precondition_failed, "bias leaves no nonce bits");
            Int bound = Int(1) << (nbits - policy.biased_bits);
            while (true) {
                Int k = rng_.below(bound);
                if (k >= 1 && k < curve_.n) return k;
            }
        }
        case NoncePolicy::Kind::fault_on_r:
            raise(Errc::precondition_failed, "fault policy must go through sign_fault_pair");
    }
    raise(Errc::precondition_failed, "unreachable nonce policy");
}

SignedMessage Signer::sign_with_nonce(const Int& h, const Int& k,
                                      const std::optional<std::vector<std::uint8_t>>& msg,
                                      bool leak_nonce) {
    const ModCtx& ord = curve_.order;
    Point kg = scalar_mul(k, curve_.g, curve_);
    Int r = ord.reduce(kg.x);
    if (r == 0) raise(Errc::degenerate_signature, "r = 0");
    Int s = ord.mul(ord.inv(k), ord.add(h, ord.mul(kp_.d, r)));
    if (s == 0) raise(Errc::degenerate_signature, "s = 0");
    SignedMessage sm;
    sm.curve_id = curve_.id;
    sm.pub = kp_.pub;
    sm.h = h;
    sm.sig = Signature{std::move(r), std::move(s)};
    sm.msg = msg;
    if (leak_nonce) sm.leaked_k = k;
    return sm;
}

SignedMessage Signer::sign(std::span<const std::uint8_t> message, const NoncePolicy& policy,
                           bool leak_nonce) {
    Int h = hash_to_scalar(message, curve_);
    std::vector<std::uint8_t> bytes(message.begin(), message.end());
    bool resample = policy.kind == NoncePolicy::Kind::uniform ||
                    policy.kind == NoncePolicy::Kind::biased_top_zero;
    while (true) {
        Int k = pick_nonce(policy);
        try {
            return sign_with_nonce(h, k, bytes, leak_nonce);
        } catch (const Error& e) {
            if (e.code() == Errc::degenerate_signature && resample) continue;
            throw;
        }
    }
}

SignedMessage Signer::sign_hash(const Int& h, const NoncePolicy& policy, bool leak_nonce) {
    Int hr = curve_.order.reduce(h);
    bool resample = policy.kind == NoncePolicy::Kind::uniform ||
                    policy.kind == NoncePolicy::Kind::biased_top_zero;
    while (true) {
        Int k = pick_nonce(policy);
        try {
            return sign_with_nonce(hr, k, std::nullopt, leak_nonce);
        } catch (const Error& e) {
            if (e.code() == Errc::degenerate_signature && resample) continue;
            throw;
        }
    }
}

FaultPair Signer::sign_fault_pair_hash(const Int& h, bool leak_nonce) {
    Int hr = curve_.order.reduce(h);
    const ModCtx& ord = curve_.order;
    while (true) {
        Int k = rng_.scalar(curve_.n);
        SignedMessage valid;
        try {
            valid = sign_with_nonce(hr, k, std::nullopt, leak_nonce);
        } catch (const Error& e) {
            if (e.code() == Errc::degenerate_signature) continue;
            throw;
        }
        // corrupt r after the point multiplication: flip one random bit,
        // reduce mod n, retry if the corruption is a fixed point or zero
        while (true) {
            Int rf = valid.sig.r;
            unsigned long bit = static_cast<unsigned long>(rng_.below(Int(ord.bits())).get_ui());
            mpz_combit(rf.get_mpz_t(), bit);
            rf = ord.reduce(rf);
            if (rf == 0 || rf == valid.sig.r) continue;
            Int sf = ord.mul(ord.inv(k), ord.add(hr, ord.mul(kp_.d, rf)));
            if (sf == 0) continue;
            SignedMessage faulty = valid;
            faulty.sig = Signature{std::move(rf), std::move(sf)};
            return FaultPair{std::move(valid), std::move(faulty)};
        }
    }
}

FaultPair Signer::sign_fault_pair(std::span<const std::uint8_t> message, bool leak_nonce) {
    Int h = hash_to_scalar(message, curve_);
    FaultPair pair = sign_fault_pair_hash(h, leak_nonce);
    std::vector<std::uint8_t> bytes(message.begin(), message.end());
    pair.valid.msg = bytes;
    pair.faulty.msg = bytes;
    return pair;
}

bool verify(const SignedMessage& sm, const CurveParams& c) {
    try {
        const ModCtx& ord = c.order;
        const Int& r = sm.sig.r;
        const Int& s = sm.sig.s;
        if (r < 1 || r >= c.n || s < 1 || s >= c.n) return false;
        if (sm.pub.infinity || !on_curve(sm.pub, c)) return false;
        Int w = ord.inv(s);
        Int u1 = ord.mul(ord.reduce(sm.h), w);
        Int u2 = ord.mul(r, w);
        Point x = point_add(scalar_mul(u1, c.g, c), scalar_mul(u2, sm.pub, c), c);
        if (x.infinity) return false;
        return ord.reduce(x.x) == r;
    } catch (const Error&) {
        return false; // verification is total: all failures are rejections
    }
}

std::string bytes_to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * bytes.size());
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::vector<std::uint8_t> hex_to_bytes(std::string_view hex) {
    if (hex.size() % 2 != 0) raise(Errc::parse_error, "odd-length byte string");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) raise(Errc::parse_error, "invalid hex digit in byte string");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::string record_to_line(const SignedMessage& sm) {
    const CurveParams& c = registry_get(sm.curve_id);
    std::size_t w = c.scalar_bytes();
    ordered_json j;
    j["curve"] = sm.curve_id;
    j["pub"] = point_to_hex(sm.pub, c);
    j["h"] = to_hex_fixed(c.order.reduce(sm.h), w);
    j["r"] = to_hex_fixed(sm.sig.r, w);
    j["s"] = to_hex_fixed(sm.sig.s, w);
    if (sm.msg) j["msg"] = bytes_to_hex(*sm.msg);
    if (sm.leaked_k) j["k"] = to_hex_fixed(*sm.leaked_k, w);
    return j.dump();
}

SignedMessage record_from_line(std::string_view line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::parse_error, e.what());
    }
    if (!j.is_object()) raise(Errc::parse_error, "record is not a JSON object");
    for (const char* field : {"curve", "pub", "h", "r", "s"})
        if (!j.contains(field) || !j[field].is_string())
            raise(Errc::parse_error, std::string("missing or non-string field \"") + field + "\"");

    SignedMessage sm;
    sm.curve_id = j["curve"].get<std::string>();
    const CurveParams& c = registry_get(sm.curve_id);
    sm.pub = point_from_hex(j["pub"].get<std::string>(), c);
    sm.h = from_hex(j["h"].get<std::string>());
    sm.sig.r = from_hex(j["r"].get<std::string>());
    sm.sig.s = from_hex(j["s"].get<std::string>());
    if (j.contains("msg")) {
        if (!j["msg"].is_string()) raise(Errc::parse_error, "non-string \"msg\"");
        sm.msg = hex_to_bytes(j["msg"].get<std::string>());
        if (hash_to_scalar(*sm.msg, c) != c.order.reduce(sm.h))
            raise(Errc::parse_error, "digest does not match message");
    }
    if (j.contains("k")) {
        if (!j["k"].is_string()) raise(Errc::parse_error, "non-string \"k\"");
        sm.leaked_k = from_hex(j["k"].get<std::string>());
    }
    return sm;
}

} // namespace ecdsalab
