#include "ecdsalab/attacks.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_map>
#include <utility>

#include "ecdsalab/errors.hpp"
#include "ecdsalab/lattice.hpp"

namespace ecdsalab {

namespace {

bool key_matches(const CurveParams& c, const Int& d, const Point& pub) {
    if (d <= 0 || d >= c.n) return false;
    return scalar_mul(d, c.g, c) == pub;
}

bool nonce_matches(const CurveParams& c, const Int& k, const Int& r) {
    if (k <= 0 || k >= c.n) return false;
    Point kg = scalar_mul(k, c.g, c);
    return !kg.infinity && c.order.reduce(kg.x) == c.order.reduce(r);
}

const CurveParams& common_curve(std::initializer_list<const SignedMessage*> sms,
                                Errc mismatch) {
    const SignedMessage* first = *sms.begin();
    for (const SignedMessage* sm : sms)
        if (sm->curve_id != first->curve_id)
            raise(mismatch, "signatures reference different curves");
    return registry_get(first->curve_id);
}

} // namespace

const char* duplicate_kind_name(DuplicateKind kind) {
    switch (kind) {
    case DuplicateKind::same_key_reuse: return "same_key_reuse";
    case DuplicateKind::cross_key_shared_r: return "cross_key_shared_r";
    case DuplicateKind::exact_duplicate: return "exact_duplicate";
    }
    return "unknown";
}

RecoveryResult recover_from_revealed_nonce(const SignedMessage& sm, const Int& k) {
    const CurveParams& c = registry_get(sm.curve_id);
    const ModCtx& ord = c.order;
    if (k <= 0 || k >= c.n)
        raise(Errc::wrong_nonce, "supplied nonce lies outside [1, n)");

    Int rinv = ord.inv(sm.sig.r);
    Int d = ord.mul(rinv, ord.sub(ord.mul(sm.sig.s, k), sm.h));
    if (!key_matches(c, d, sm.pub))
        raise(Errc::wrong_nonce, "candidate key fails the public-key check");
    if (!nonce_matches(c, k, sm.sig.r))
        raise(Errc::wrong_nonce, "supplied nonce does not reproduce the signature r");
    return {d, k, {sm}};
}

RecoveryResult recover_from_nonce_reuse(const SignedMessage& sm1, const SignedMessage& sm2) {
    const CurveParams& c = common_curve({&sm1, &sm2}, Errc::precondition_failed);
    const ModCtx& ord = c.order;
    if (sm1.pub != sm2.pub)
        raise(Errc::precondition_failed, "signatures are under different public keys");
    if (ord.reduce(sm1.sig.r) != ord.reduce(sm2.sig.r))
        raise(Errc::precondition_failed, "r values differ: no shared nonce to exploit");
    if (ord.reduce(sm1.h) == ord.reduce(sm2.h))
        raise(Errc::precondition_failed, "equal digests: the nonce cancels out of the system");
    Int sdiff = ord.sub(sm1.sig.s, sm2.sig.s);
    if (sdiff == 0 || ord.add(sm1.sig.s, sm2.sig.s) == 0)
        raise(Errc::precondition_failed, "s1 = +/-s2 makes the recovery route degenerate");

    Int k = ord.mul(ord.sub(sm1.h, sm2.h), ord.inv(sdiff));
    Int rinv = ord.inv(sm1.sig.r);
    Int d = ord.mul(rinv, ord.sub(ord.mul(sm1.sig.s, k), sm1.h));

    // Same key through the direct quotient d = (s2 h1 - s1 h2) / (r (s1 - s2));
    // algebraically identical to the k-first route, evaluated independently.
    Int quotient = ord.mul(
        ord.sub(ord.mul(sm2.sig.s, sm1.h), ord.mul(sm1.sig.s, sm2.h)),
        ord.inv(ord.mul(sm1.sig.r, sdiff)));
    if (quotient != d)
        raise(Errc::validation_failed, "direct-quotient cross-check diverged");

    if (!key_matches(c, d, sm1.pub))
        raise(Errc::validation_failed, "recovered key fails the public-key check");
    if (!nonce_matches(c, k, sm1.sig.r))
        raise(Errc::validation_failed, "recovered nonce does not reproduce r");
    return {d, k, {sm1, sm2}};
}

namespace {

// Gauss-Jordan over Z_n on a 4x5 augmented matrix. Column pivots must be
// invertible mod n; a column with no invertible nonzero entry below the
// diagonal means the system cannot be solved this way.
std::array<Int, 4> solve_4x4(const ModCtx& ord, std::array<std::array<Int, 5>, 4> m) {
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t sel = 4;
        Int pivot_inv;
        for (std::size_t row = col; row < 4 && sel == 4; ++row) {
            if (m[row][col] == 0) continue;
            try {
                pivot_inv = ord.inv(m[row][col]);
                sel = row;
            } catch (const Error& e) {
                if (e.code() != Errc::not_invertible) throw;
            }
        }
        if (sel == 4)
            raise(Errc::singular_system,
                  "no invertible pivot in column " + std::to_string(col));
        std::swap(m[col], m[sel]);
        for (std::size_t j = col; j < 5; ++j) m[col][j] = ord.mul(m[col][j], pivot_inv);
        for (std::size_t row = 0; row < 4; ++row) {
            if (row == col || m[row][col] == 0) continue;
            Int f = m[row][col];
            for (std::size_t j = col; j < 5; ++j)
                m[row][j] = ord.sub(m[row][j], ord.mul(f, m[col][j]));
        }
    }
    return {m[0][4], m[1][4], m[2][4], m[3][4]};
}

void check_two_key_shape(const ModCtx& ord, const SignedMessage& m1,
                         const SignedMessage& m2, const SignedMessage& m3,
                         const SignedMessage& m4) {
    if (m1.pub != m3.pub || m2.pub != m4.pub)
        raise(Errc::precondition_failed,
              "expected signatures 1,3 under one key and 2,4 under the other");
    if (ord.reduce(m1.sig.r) != ord.reduce(m2.sig.r) ||
        ord.reduce(m3.sig.r) != ord.reduce(m4.sig.r))
        raise(Errc::precondition_failed, "r-pattern absent: need r1 = r2 and r3 = r4");
}

} // namespace

TwoKeyRecovery recover_two_keys_shared_nonces(const SignedMessage& m1,
                                              const SignedMessage& m2,
                                              const SignedMessage& m3,
                                              const SignedMessage& m4) {
    const CurveParams& c = common_curve({&m1, &m2, &m3, &m4}, Errc::precondition_failed);
    const ModCtx& ord = c.order;
    check_two_key_shape(ord, m1, m2, m3, m4);

    // Unknown order (k1, k2, x1, x2):
    //   s1 k1          - r x1        = h1
    //   s2 k1                 - r x2 = h2
    //        s3 k2     - r' x1       = h3
    //        s4 k2            - r'x2 = h4
    Int nr12 = ord.neg(m1.sig.r);
    Int nr34 = ord.neg(m3.sig.r);
    std::array<std::array<Int, 5>, 4> sys{{
        {ord.reduce(m1.sig.s), 0, nr12, 0, ord.reduce(m1.h)},
        {ord.reduce(m2.sig.s), 0, 0, nr12, ord.reduce(m2.h)},
        {0, ord.reduce(m3.sig.s), nr34, 0, ord.reduce(m3.h)},
        {0, ord.reduce(m4.sig.s), 0, nr34, ord.reduce(m4.h)},
    }};
    auto [k1, k2, x1, x2] = solve_4x4(ord, std::move(sys));

    if (!key_matches(c, x1, m1.pub))
        raise(Errc::validation_failed, "x1 fails the public-key check");
    if (!key_matches(c, x2, m2.pub))
        raise(Errc::validation_failed, "x2 fails the public-key check");
    return {x1, x2, k1, k2, {m1, m2, m3, m4}};
}

std::pair<Int, Int> two_key_closed_forms(const SignedMessage& m1,
                                         const SignedMessage& m2,
                                         const SignedMessage& m3,
                                         const SignedMessage& m4) {
    const CurveParams& c = common_curve({&m1, &m2, &m3, &m4}, Errc::precondition_failed);
    const ModCtx& ord = c.order;
    check_two_key_shape(ord, m1, m2, m3, m4);

    const Int& r = m1.sig.r;   // shared by signatures 1, 2
    const Int& rp = m3.sig.r;  // shared by signatures 3, 4
    const Int& s1 = m1.sig.s;
    const Int& s2 = m2.sig.s;
    const Int& s3 = m3.sig.s;
    const Int& s4 = m4.sig.s;
    const Int& h1 = m1.h;
    const Int& h2 = m2.h;
    const Int& h3 = m3.h;
    const Int& h4 = m4.h;

    auto prod3 = [&](const Int& a, const Int& b, const Int& e) {
        return ord.mul(ord.mul(a, b), e);
    };
    Int s1s4 = ord.mul(s1, s4);
    Int s2s3 = ord.mul(s2, s3);

    // x1 = (h1 r' s2 s3 - h2 r' s1 s3 - h3 r s1 s4 + h4 r s1 s3)
    //      / (r r' (s1 s4 - s2 s3))
    Int num1 = ord.sub(ord.mul(h1, prod3(rp, s2, s3)), ord.mul(h2, prod3(rp, s1, s3)));
    num1 = ord.sub(num1, ord.mul(h3, prod3(r, s1, s4)));
    num1 = ord.add(num1, ord.mul(h4, prod3(r, s1, s3)));
    Int den1 = prod3(r, rp, ord.sub(s1s4, s2s3));

    // x2 = (h1 r' s2 s4 - h2 r' s1 s4 - h3 r s2 s4 + h4 r s2 s3)
    //      / (r r' (s2 s3 - s1 s4))
    Int num2 = ord.sub(ord.mul(h1, prod3(rp, s2, s4)), ord.mul(h2, prod3(rp, s1, s4)));
    num2 = ord.sub(num2, ord.mul(h3, prod3(r, s2, s4)));
    num2 = ord.add(num2, ord.mul(h4, prod3(r, s2, s3)));
    Int den2 = prod3(r, rp, ord.sub(s2s3, s1s4));

    return {ord.mul(num1, ord.inv(den1)), ord.mul(num2, ord.inv(den2))};
}

RecoveryResult recover_from_fault(const SignedMessage& valid, const SignedMessage& faulty) {
    const CurveParams& c = common_curve({&valid, &faulty}, Errc::validation_failed);
    const ModCtx& ord = c.order;
    const Int& h = valid.h;
    const Int& r = valid.sig.r;
    const Int& s = valid.sig.s;
    const Int& rf = faulty.sig.r;
    const Int& sf = faulty.sig.s;

    Int den = ord.sub(ord.mul(sf, r), ord.mul(s, rf));
    Int d = ord.mul(ord.mul(h, ord.sub(s, sf)), ord.inv(den));
    if (!key_matches(c, d, valid.pub))
        raise(Errc::validation_failed,
              "pair does not fit the fault model: public-key check failed");

    Int k = ord.mul(ord.mul(d, ord.sub(r, rf)), ord.inv(ord.sub(s, sf)));
    if (k == 0)
        raise(Errc::validation_failed, "pair does not fit the fault model: zero nonce");
    if (ord.mul(ord.inv(k), ord.add(h, ord.mul(r, d))) != ord.reduce(s))
        raise(Errc::validation_failed, "recovered nonce does not reproduce s");
    // the genuine r may sit in either record; the corrupted one never matches
    if (!nonce_matches(c, k, r) && !nonce_matches(c, k, rf))
        raise(Errc::validation_failed, "recovered nonce reproduces neither r value");
    return {d, k, {valid, faulty}};
}

RecoveryResult recover_from_biased_nonces(const std::vector<SignedMessage>& corpus,
                                          unsigned B) {
    if (corpus.size() < 2)
        raise(Errc::not_found, "too few signatures to build a lattice");
    for (const SignedMessage& sm : corpus)
        if (sm.curve_id != corpus[0].curve_id || sm.pub != corpus[0].pub)
            raise(Errc::precondition_failed, "mixed public keys in corpus");
    const CurveParams& c = registry_get(corpus[0].curve_id);
    const ModCtx& ord = c.order;
    if (B == 0)
        raise(Errc::not_found, "zero bias carries no information");
    if (B >= ord.bits())
        raise(Errc::validation_failed, "bias exceeds the scalar width");

    HnpInstance inst;
    inst.n = c.n;
    inst.L = static_cast<unsigned>(ord.bits()) - B;
    inst.pairs.reserve(corpus.size());
    for (const SignedMessage& sm : corpus) {
        Int sinv = ord.inv(sm.sig.s);
        inst.pairs.emplace_back(ord.mul(sm.sig.r, sinv), ord.mul(sm.h, sinv));
    }

    LatticeBasis reduced = lll_reduce(build_hnp_lattice(inst));
    for (const Int& cand : extract_candidates(reduced, inst))
        if (key_matches(c, cand, corpus[0].pub))
            return {cand, std::nullopt, corpus};
    raise(Errc::not_found, "no reduced vector yields the key");
}

namespace {

// Clusters record positions by the three collision keys the scanner cares
// about. Map values stay in ascending index order because collection walks
// a contiguous index range and merges preserve chunk order.
struct ClusterMaps {
    std::unordered_map<std::string, std::vector<std::size_t>> same_key; // curve|r|pub
    std::unordered_map<std::string, std::vector<std::size_t>> shared_r; // curve|r
    std::unordered_map<std::string, std::vector<std::size_t>> dup;      // curve|r|pub|h
};

void collect_clusters(const std::vector<SignedMessage>& corpus, std::size_t begin,
                      std::size_t end, ClusterMaps& out) {
    for (std::size_t i = begin; i < end; ++i) {
        const SignedMessage& sm = corpus[i];
        const CurveParams& c = registry_get(sm.curve_id);
        std::string key_r = sm.curve_id;
        key_r += '|';
        key_r += to_hex_fixed(c.order.reduce(sm.sig.r), c.scalar_bytes());
        std::string key_pub = key_r;
        key_pub += '|';
        key_pub += point_to_hex(sm.pub, c);
        std::string key_h = key_pub;
        key_h += '|';
        key_h += to_hex_fixed(c.order.reduce(sm.h), c.scalar_bytes());
        out.shared_r[key_r].push_back(i);
        out.same_key[std::move(key_pub)].push_back(i);
        out.dup[std::move(key_h)].push_back(i);
    }
}

void merge_clusters(ClusterMaps& into, ClusterMaps& part) {
    auto merge_one = [](auto& dst, auto& src) {
        for (auto& [key, idxs] : src) {
            auto& dest = dst[key];
            dest.insert(dest.end(), idxs.begin(), idxs.end());
        }
    };
    merge_one(into.same_key, part.same_key);
    merge_one(into.shared_r, part.shared_r);
    merge_one(into.dup, part.dup);
}

std::vector<DuplicateGroup> groups_from_clusters(const std::vector<SignedMessage>& corpus,
                                                 const ClusterMaps& maps) {
    std::vector<DuplicateGroup> out;
    for (const auto& [key, idxs] : maps.same_key) {
        if (idxs.size() < 2) continue;
        std::set<Int> digests;
        for (std::size_t i : idxs) digests.insert(corpus[i].h);
        if (digests.size() < 2) continue; // only duplicates: nothing attackable
        out.push_back({DuplicateKind::same_key_reuse, corpus[idxs[0]].curve_id,
                       corpus[idxs[0]].sig.r, idxs});
    }
    for (const auto& [key, idxs] : maps.shared_r) {
        if (idxs.size() < 2) continue;
        std::set<std::pair<Int, Int>> pubs;
        for (std::size_t i : idxs) {
            const Point& q = corpus[i].pub;
            pubs.emplace(q.infinity ? Int(-1) : q.x, q.infinity ? Int(-1) : q.y);
        }
        if (pubs.size() < 2) continue;
        out.push_back({DuplicateKind::cross_key_shared_r, corpus[idxs[0]].curve_id,
                       corpus[idxs[0]].sig.r, idxs});
    }
    for (const auto& [key, idxs] : maps.dup) {
        if (idxs.size() < 2) continue;
        out.push_back({DuplicateKind::exact_duplicate, corpus[idxs[0]].curve_id,
                       corpus[idxs[0]].sig.r, idxs});
    }

    // (first occurrence, kind) is a total order: a record keys into exactly
    // one cluster of each kind, so two groups of one kind never share a
    // leading index.
    std::sort(out.begin(), out.end(), [](const DuplicateGroup& a, const DuplicateGroup& b) {
        if (a.indices.front() != b.indices.front())
            return a.indices.front() < b.indices.front();
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return out;
}

} // namespace

std::vector<DuplicateGroup> detect_duplicate_r(const std::vector<SignedMessage>& corpus) {
    ClusterMaps maps;
    collect_clusters(corpus, 0, corpus.size(), maps);
    return groups_from_clusters(corpus, maps);
}

std::vector<DuplicateGroup> detect_duplicate_r_parallel(const std::vector<SignedMessage>& corpus) {
    // Chunk boundaries depend only on corpus size, and chunks are merged in
    // index order, so the result matches the serial reference on any thread
    // count (including one).
    constexpr std::size_t chunk_size = 2048;
    const std::size_t n_chunks = std::max<std::size_t>(1, (corpus.size() + chunk_size - 1) / chunk_size);
    std::vector<ClusterMaps> parts(n_chunks);

#pragma omp parallel for schedule(static)
    for (long long chunk = 0; chunk < static_cast<long long>(n_chunks); ++chunk) {
        std::size_t begin = static_cast<std::size_t>(chunk) * chunk_size;
        std::size_t end = std::min(corpus.size(), begin + chunk_size);
        collect_clusters(corpus, begin, end, parts[static_cast<std::size_t>(chunk)]);
    }

    ClusterMaps merged;
    for (ClusterMaps& part : parts) merge_clusters(merged, part);
    return groups_from_clusters(corpus, merged);
}

} // namespace ecdsalab
