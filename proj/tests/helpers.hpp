// Shared test utilities: independent oracles implemented from first
// principles, deliberately avoiding the code paths under test (GMP's
// mpz_invert, the library's point arithmetic, the LLL reducer).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ecdsalab/bigmod.hpp"
#include "ecdsalab/curve.hpp"
#include "ecdsalab/lattice.hpp"

namespace testutil {

using ecdsalab::Int;
using ecdsalab::LatticeBasis;

// -------- big-integer oracles ------------------------------------------

// Schoolbook multiplication over base-2^16 digit vectors; exercises none of
// GMP's multiplication code beyond small-word primitives.
inline Int schoolbook_mul(const Int& a, const Int& b) {
    auto digits = [](const Int& x) {
        std::vector<std::uint32_t> out;
        Int t = x;
        while (t > 0) {
            out.push_back(static_cast<std::uint32_t>(mpz_fdiv_ui(t.get_mpz_t(), 65536)));
            t >>= 16;
        }
        return out;
    };
    std::vector<std::uint32_t> da = digits(a), db = digits(b);
    std::vector<std::uint64_t> acc(da.size() + db.size() + 1, 0);
    for (std::size_t i = 0; i < da.size(); ++i)
        for (std::size_t j = 0; j < db.size(); ++j) {
            acc[i + j] += std::uint64_t(da[i]) * db[j];
            // carry early so the accumulator never overflows
            acc[i + j + 1] += acc[i + j] >> 16;
            acc[i + j] &= 0xffff;
        }
    Int out = 0;
    for (std::size_t i = acc.size(); i-- > 0;) {
        out <<= 16;
        out += static_cast<unsigned long>(acc[i]);
    }
    return out;
}

// Binary extended GCD (no division anywhere): returns x^-1 mod m for odd m,
// or nullopt when gcd(x, m) != 1.
inline std::optional<Int> binary_inverse(const Int& x_in, const Int& m) {
    Int x = x_in % m;
    if (x < 0) x += m;
    if (x == 0) return std::nullopt;
    // classic binary inversion for odd modulus
    Int u = x, v = m, a = 1, c = 0;
    while (u != 0) {
        while (mpz_even_p(u.get_mpz_t())) {
            u >>= 1;
            if (mpz_odd_p(a.get_mpz_t())) a += m;
            a >>= 1;
        }
        while (mpz_even_p(v.get_mpz_t())) {
            v >>= 1;
            if (mpz_odd_p(c.get_mpz_t())) c += m;
            c >>= 1;
        }
        if (u >= v) {
            u -= v;
            a -= c;
            if (a < 0) a += m;
        } else {
            v -= u;
            c -= a;
            if (c < 0) c += m;
        }
    }
    if (v != 1) return std::nullopt;
    return c % m;
}

// -------- affine curve oracle -------------------------------------------

// Textbook chord-tangent addition written directly from the formulas, using
// plain mpz arithmetic (mpz_invert for field division). Independent of the
// library's Point/ModCtx layers.
struct OraclePoint {
    bool inf = true;
    Int x{}, y{};
};

inline Int omod(const Int& v, const Int& p) {
    Int t = v % p;
    if (t < 0) t += p;
    return t;
}

inline Int oinv(const Int& v, const Int& p) {
    Int out;
    Int vv = omod(v, p);
    if (mpz_invert(out.get_mpz_t(), vv.get_mpz_t(), p.get_mpz_t()) == 0)
        throw std::runtime_error("oracle: no inverse");
    return out;
}

inline OraclePoint oracle_add(const OraclePoint& P, const OraclePoint& Q, const Int& p,
                              const Int& a) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    if (P.x == Q.x && omod(P.y + Q.y, p) == 0) return {};
    Int lam;
    if (P.x == Q.x && P.y == Q.y)
        lam = omod((3 * P.x * P.x + a) * oinv(2 * P.y, p), p);
    else
        lam = omod((Q.y - P.y) * oinv(Q.x - P.x, p), p);
    Int x3 = omod(lam * lam - P.x - Q.x, p);
    Int y3 = omod(lam * (P.x - x3) - P.y, p);
    return {false, x3, y3};
}

inline OraclePoint oracle_mul(Int d, OraclePoint P, const Int& p, const Int& a) {
    OraclePoint acc;
    while (d > 0) {
        if (mpz_odd_p(d.get_mpz_t())) acc = oracle_add(acc, P, p, a);
        P = oracle_add(P, P, p, a);
        d >>= 1;
    }
    return acc;
}

// Enumerates every affine point of y^2 = x^3 + ax + b over F_p by a full
// x-sweep against a precomputed square table. Only viable for tiny p.
inline std::vector<std::pair<Int, Int>> enumerate_curve(const Int& p, const Int& a,
                                                        const Int& b) {
    unsigned long pl = mpz_get_ui(p.get_mpz_t());
    std::multimap<unsigned long, unsigned long> sqrt_of; // y^2 -> y
    for (unsigned long y = 0; y < pl; ++y)
        sqrt_of.emplace(static_cast<unsigned long>(Int(Int(y) * y % p).get_ui()), y);
    std::vector<std::pair<Int, Int>> pts;
    for (unsigned long x = 0; x < pl; ++x) {
        Int rhs = omod(Int(x) * x * x + a * x + b, p);
        auto [lo, hi] = sqrt_of.equal_range(rhs.get_ui());
        for (auto it = lo; it != hi; ++it) pts.emplace_back(x, it->second);
    }
    return pts;
}

// -------- lattice oracles -------------------------------------------------

inline Int norm2(const std::vector<Int>& v) {
    Int acc = 0;
    for (const Int& x : v) acc += x * x;
    return acc;
}

inline Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Lagrange-Gauss reduction: exact shortest-vector norm^2 of a rank-2 lattice.
inline Int gauss_min_norm2(std::vector<Int> b1, std::vector<Int> b2) {
    while (true) {
        if (norm2(b1) > norm2(b2)) std::swap(b1, b2);
        Int n1 = norm2(b1);
        if (n1 == 0) throw std::runtime_error("oracle: rank-deficient 2D lattice");
        // m = round(<b1,b2> / <b1,b1>) via floor((2*dot + n1) / (2*n1))
        Int m;
        Int num = 2 * dot(b1, b2) + n1;
        Int den = 2 * n1;
        mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (m == 0) return norm2(b1) <= norm2(b2) ? norm2(b1) : norm2(b2);
        for (std::size_t i = 0; i < b2.size(); ++i) b2[i] -= m * b1[i];
    }
}

// Exact shortest nonzero vector norm^2 by depth-first enumeration over the
// Gram-Schmidt decomposition (Fincke-Pohst). All bounds are exact rationals;
// feed it an already-reduced basis so the search tree stays small.
class SvpOracle {
public:
    explicit SvpOracle(const LatticeBasis& basis) {
        std::size_t d = basis.dim();
        mu_.assign(d, std::vector<mpq_class>(d, 0));
        B_.assign(d, 0);
        std::vector<std::vector<mpq_class>> gs(d, std::vector<mpq_class>(basis.cols()));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t c = 0; c < basis.cols(); ++c) gs[i][c] = mpq_class(basis.rows[i][c]);
            for (std::size_t j = 0; j < i; ++j) {
                mpq_class num = 0;
                for (std::size_t c = 0; c < basis.cols(); ++c)
                    num += mpq_class(basis.rows[i][c]) * gs[j][c];
                mu_[i][j] = num / B_[j];
                for (std::size_t c = 0; c < basis.cols(); ++c) gs[i][c] -= mu_[i][j] * gs[j][c];
            }
            B_[i] = 0;
            for (std::size_t c = 0; c < basis.cols(); ++c) B_[i] += gs[i][c] * gs[i][c];
            if (B_[i] == 0) throw std::runtime_error("oracle: dependent rows");
        }
        best_ = mpq_class(norm2(basis.rows[0]));
        for (std::size_t i = 1; i < d; ++i) {
            mpq_class cand(norm2(basis.rows[i]));
            if (cand < best_) best_ = cand;
        }
        coeffs_.assign(d, 0);
        search(d, d, 0);
    }

    Int min_norm2() const {
        // best_ is a sum of integer-vector norms, always integral
        return Int(best_.get_num() / best_.get_den());
    }

private:
    // enumerate c_{level-1}..c_{d-1} fixed, extending downward; "used" is the
    // squared norm contributed by levels >= level.
    void search(std::size_t level, std::size_t d, const mpq_class& used) {
        if (level == 0) {
            bool zero = true;
            for (std::size_t i = 0; i < d; ++i)
                if (coeffs_[i] != 0) zero = false;
            if (!zero && used < best_) best_ = used;
            return;
        }
        std::size_t i = level - 1;
        // center = sum_{j > i} c_j * mu_j_i
        mpq_class center = 0;
        for (std::size_t j = i + 1; j < d; ++j) center += mpq_class(coeffs_[j]) * mu_[j][i];
        // |c_i + center|^2 * B_i <= best - used
        mpq_class budget = best_ - used;
        if (budget < 0) return;
        mpq_class radius2 = budget / B_[i];
        // integer window: c in [ceil(-center - sqrt(radius2)), floor(-center + sqrt(radius2))]
        Int lo = floor_q(-center - isqrt_ceil(radius2));
        Int hi = ceil_q(-center + isqrt_ceil(radius2));
        for (Int c = lo; c <= hi; ++c) {
            mpq_class off = mpq_class(c) + center;
            mpq_class add = off * off * B_[i];
            if (used + add > best_) continue;
            coeffs_[i] = c;
            search(level - 1, d, used + add);
        }
        coeffs_[i] = 0;
    }

    static Int floor_q(const mpq_class& q) {
        Int out;
        mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        return out;
    }
    static Int ceil_q(const mpq_class& q) {
        Int out;
        mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        return out;
    }
    // smallest integer >= sqrt(q), for non-negative rational q
    static Int isqrt_ceil(const mpq_class& q) {
        if (q <= 0) return 0;
        Int num_root, den_root;
        mpz_sqrt(num_root.get_mpz_t(), q.get_num_mpz_t()); // floor sqrt
        mpz_sqrt(den_root.get_mpz_t(), q.get_den_mpz_t());
        // ceil(sqrt(n/d)) <= floor(sqrt(n)) / floor(sqrt(d)) + 2 — walk down
        Int guess = num_root / (den_root > 0 ? den_root : 1) + 2;
        while (guess > 0 && mpq_class(guess - 1) * (guess - 1) >= q) --guess;
        return guess;
    }

    std::vector<std::vector<mpq_class>> mu_;
    std::vector<mpq_class> B_;
    std::vector<Int> coeffs_;
    mpq_class best_;
};

// Exact Gram-matrix determinant via Bareiss (fraction-free) elimination.
inline Int gram_det(const LatticeBasis& basis) {
    std::size_t d = basis.dim();
    std::vector<std::vector<Int>> g(d, std::vector<Int>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g[i][j] = dot(basis.rows[i], basis.rows[j]);
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        // the Schur complements of a PSD Gram matrix stay PSD, so a zero
        // pivot forces the whole row to zero: the rows are dependent
        if (g[k][k] == 0) return 0;
        for (std::size_t i = k + 1; i < d; ++i)
            for (std::size_t j = k + 1; j < d; ++j)
                g[i][j] = (g[i][j] * g[k][k] - g[i][k] * g[k][j]) / prev;
        prev = g[k][k];
    }
    return g[d - 1][d - 1];
}

// Exact Gram-Schmidt data of a basis, for size-reduction / Lovász checks.
struct GramSchmidt {
    std::vector<std::vector<mpq_class>> mu;
    std::vector<mpq_class> B; // squared GS norms

    explicit GramSchmidt(const LatticeBasis& basis) {
        std::size_t d = basis.dim();
        mu.assign(d, std::vector<mpq_class>(d, 0));
        B.assign(d, 0);
        std::vector<std::vector<mpq_class>> gs(d, std::vector<mpq_class>(basis.cols()));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t c = 0; c < basis.cols(); ++c) gs[i][c] = mpq_class(basis.rows[i][c]);
            for (std::size_t j = 0; j < i; ++j) {
                mpq_class num = 0;
                for (std::size_t c = 0; c < basis.cols(); ++c)
                    num += mpq_class(basis.rows[i][c]) * gs[j][c];
                mu[i][j] = num / B[j];
                for (std::size_t c = 0; c < basis.cols(); ++c) gs[i][c] -= mu[i][j] * gs[j][c];
            }
            B[i] = 0;
            for (std::size_t c = 0; c < basis.cols(); ++c) B[i] += gs[i][c] * gs[i][c];
        }
    }

    bool size_reduced() const {
        for (std::size_t i = 0; i < mu.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (2 * abs(mu[i][j]) > 1) return false;
        return true;
    }

    bool lovasz(const mpq_class& delta) const {
        for (std::size_t k = 1; k < B.size(); ++k)
            if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) return false;
        return true;
    }
};

// Solves y = sum c_i rows_i exactly over Q (Gaussian elimination on an
// augmented rational matrix); returns the coefficients or nullopt when y is
// outside the row span. Requires a square, full-rank basis for uniqueness.
inline std::optional<std::vector<mpq_class>> express_in_rows(const LatticeBasis& basis,
                                                             const std::vector<Int>& y) {
    std::size_t d = basis.dim(), w = basis.cols();
    // transpose: columns are the basis rows; solve A c = y
    std::vector<std::vector<mpq_class>> m(w, std::vector<mpq_class>(d + 1));
    for (std::size_t r = 0; r < w; ++r) {
        for (std::size_t c = 0; c < d; ++c) m[r][c] = mpq_class(basis.rows[c][r]);
        m[r][d] = mpq_class(y[r]);
    }
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < d && rank < w; ++col) {
        std::size_t piv = rank;
        while (piv < w && m[piv][col] == 0) ++piv;
        if (piv == w) continue;
        std::swap(m[piv], m[rank]);
        mpq_class inv = 1 / m[rank][col];
        for (std::size_t j = col; j <= d; ++j) m[rank][j] *= inv;
        for (std::size_t r = 0; r < w; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            mpq_class f = m[r][col];
            for (std::size_t j = col; j <= d; ++j) m[r][j] -= f * m[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < w; ++r)
        if (m[r][d] != 0) return std::nullopt; // inconsistent: y not in span
    std::vector<mpq_class> coeffs(d, 0);
    for (std::size_t r = 0; r < rank; ++r) coeffs[pivot_col[r]] = m[r][d];
    return coeffs;
}

// True when every coefficient expressing y in the basis rows is an integer.
inline bool integer_member(const LatticeBasis& basis, const std::vector<Int>& y) {
    auto coeffs = express_in_rows(basis, y);
    if (!coeffs) return false;
    for (const mpq_class& c : *coeffs)
        if (c.get_den() != 1) return false;
    return true;
}

} // namespace testutil
