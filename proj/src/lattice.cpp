#include "ecdsalab/lattice.hpp"

#include <cstddef>
#include <sstream>

#include "ecdsalab/errors.hpp"

namespace ecdsalab {

namespace {

Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Nearest integer to an exact rational; halves round up.
Int round_nearest(const mpq_class& q) {
    mpq_class shifted = q + mpq_class(1, 2);
    Int out;
    mpz_fdiv_q(out.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    return out;
}

void check_rectangular(const LatticeBasis& basis) {
    if (basis.rows.empty()) raise(Errc::validation_failed, "empty basis");
    std::size_t width = basis.rows[0].size();
    if (width == 0) raise(Errc::validation_failed, "zero-width basis rows");
    for (const auto& row : basis.rows)
        if (row.size() != width)
            raise(Errc::validation_failed, "basis rows differ in length");
}

} // namespace

LatticeBasis lll_reduce(const LatticeBasis& basis, const mpq_class& delta) {
    check_rectangular(basis);
    if (delta <= mpq_class(1, 4) || delta >= 1)
        raise(Errc::validation_failed, "LLL delta must lie in (1/4, 1)");

    LatticeBasis out = basis; // reduction happens on an isolated copy
    auto& b = out.rows;
    const std::size_t dim = b.size();

    // Exact rational Gram-Schmidt state: mu[i][j] for j < i, and
    // B[i] = |b*_i|^2. Rows are incorporated incrementally (kmax tracks the
    // frontier) so swaps only retouch coefficients already computed.
    std::vector<std::vector<mpq_class>> mu(dim, std::vector<mpq_class>(dim, 0));
    std::vector<mpq_class> B(dim, 0);

    auto reduce_row = [&](std::size_t k, std::size_t l) {
        // Size-reduce b_k against b_l: subtract the nearest-integer multiple.
        mpq_class two_mu = 2 * mu[k][l];
        if (two_mu > 1 || two_mu < -1) {
            Int q = round_nearest(mu[k][l]);
            for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[l][c];
            mu[k][l] -= q;
            for (std::size_t i = 0; i < l; ++i) mu[k][i] -= q * mu[l][i];
        }
    };

    std::size_t k = 1;
    std::size_t kmax = 0;
    B[0] = mpq_class(dot(b[0], b[0]));
    if (B[0] == 0) raise(Errc::dependent_rows, "zero row in basis");

    while (k < dim) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 0; j < k; ++j) {
                mpq_class num = mpq_class(dot(b[k], b[j]));
                for (std::size_t i = 0; i < j; ++i) num -= mu[j][i] * mu[k][i] * B[i];
                mu[k][j] = num / B[j];
            }
            mpq_class norm = mpq_class(dot(b[k], b[k]));
            for (std::size_t j = 0; j < k; ++j) norm -= mu[k][j] * mu[k][j] * B[j];
            B[k] = norm;
            if (B[k] == 0)
                raise(Errc::dependent_rows, "linearly dependent basis rows");
        }

        reduce_row(k, k - 1);

        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            // Lovasz condition fails: swap b_k with b_{k-1} and patch the
            // Gram-Schmidt state in place.
            std::swap(b[k], b[k - 1]);
            for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);

            mpq_class m = mu[k][k - 1];
            mpq_class Bnew = B[k] + m * m * B[k - 1];
            mpq_class t = B[k - 1] / Bnew;
            mu[k][k - 1] = m * t;
            B[k] = B[k] * t;
            B[k - 1] = Bnew;
            for (std::size_t i = k + 1; i <= kmax; ++i) {
                mpq_class old = mu[i][k];
                mu[i][k] = mu[i][k - 1] - m * old;
                mu[i][k - 1] = old + mu[k][k - 1] * mu[i][k];
            }

            k = (k > 1) ? k - 1 : 1;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) reduce_row(k, l);
            ++k;
        }
    }

    return out;
}

LatticeBasis build_hnp_lattice(const HnpInstance& inst) {
    if (inst.n < 2) raise(Errc::validation_failed, "group order must be >= 2");
    const std::size_t t = inst.pairs.size();
    if (t < 2) raise(Errc::precondition_failed, "need at least 2 HNP pairs");
    if (inst.L >= bit_length(inst.n))
        raise(Errc::bad_bound, "nonce bound must be below the group order size");
    for (const auto& [ti, ui] : inst.pairs)
        if (ti < 0 || ti >= inst.n || ui < 0 || ui >= inst.n)
            raise(Errc::validation_failed, "HNP pair outside [0, n)");

    const Int& n = inst.n;
    Int n2 = n * n;
    Int pow2 = Int(1) << inst.L;

    LatticeBasis basis;
    basis.rows.assign(t + 2, std::vector<Int>(t + 2, 0));
    for (std::size_t i = 0; i < t; ++i) basis.rows[i][i] = n2;
    for (std::size_t i = 0; i < t; ++i) {
        basis.rows[t][i] = n * inst.pairs[i].first;
        basis.rows[t + 1][i] = n * inst.pairs[i].second;
    }
    basis.rows[t][t] = pow2;
    basis.rows[t + 1][t + 1] = n * pow2;
    return basis;
}

std::vector<Int> extract_candidates(const LatticeBasis& reduced,
                                    const HnpInstance& inst) {
    check_rectangular(reduced);
    const std::size_t t = inst.pairs.size();
    if (reduced.cols() != t + 2)
        raise(Errc::validation_failed, "basis width does not match instance");

    Int pow2 = Int(1) << inst.L;
    std::vector<Int> out;
    auto push_unique = [&](Int d) {
        mpz_mod(d.get_mpz_t(), d.get_mpz_t(), inst.n.get_mpz_t());
        for (const Int& seen : out)
            if (seen == d) return;
        out.push_back(d);
    };

    for (const auto& row : reduced.rows) {
        const Int& v = row[t];
        if (v == 0) continue;
        if (!mpz_divisible_p(v.get_mpz_t(), pow2.get_mpz_t())) continue;
        Int q = v / pow2;
        push_unique(q);
        push_unique(-q);
    }
    return out;
}

std::string basis_to_string(const LatticeBasis& basis) {
    std::ostringstream os;
    for (const auto& row : basis.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ' ';
            os << row[i].get_str(10);
        }
        os << '\n';
    }
    return os.str();
}

LatticeBasis basis_from_string(const std::string& text) {
    LatticeBasis basis;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<Int> row;
        std::string tok;
        while (fields >> tok) {
            Int v;
            if (mpz_set_str(v.get_mpz_t(), tok.c_str(), 10) != 0)
                raise(Errc::parse_error, "bad integer in basis dump: " + tok);
            row.push_back(v);
        }
        if (!row.empty()) basis.rows.push_back(std::move(row));
    }
    if (basis.rows.empty()) raise(Errc::parse_error, "empty basis dump");
    std::size_t width = basis.rows[0].size();
    for (const auto& row : basis.rows)
        if (row.size() != width) raise(Errc::parse_error, "ragged basis dump");
    return basis;
}

} // namespace ecdsalab
