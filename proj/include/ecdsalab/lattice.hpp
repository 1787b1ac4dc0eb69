#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ecdsalab/bigmod.hpp"

namespace ecdsalab {

// Row basis of an integer lattice. Rows are equal-length signed integer
// vectors; reduction requires them to be linearly independent over Q
// (detected during Gram-Schmidt, reported as Errc::dependent_rows).
struct LatticeBasis {
    std::vector<std::vector<Int>> rows;

    std::size_t dim() const { return rows.size(); }
    std::size_t cols() const { return rows.empty() ? 0 : rows[0].size(); }

    bool operator==(const LatticeBasis&) const = default;
};

// Hidden-number-problem instance: each signature contributes one pair
// (t_i, u_i) with t_i = r_i * s_i^-1 mod n and u_i = h_i * s_i^-1 mod n,
// so the nonce satisfies k_i = t_i * d + u_i (mod n) and is bounded by
// k_i < 2^L. Recovering the hidden multiplier d recovers the private key.
struct HnpInstance {
    Int n;                                  // group order
    unsigned L = 0;                         // nonce bound: k_i < 2^L
    std::vector<std::pair<Int, Int>> pairs; // (t_i, u_i)
};

// LLL reduction with exact rational Gram-Schmidt; no floating point is
// involved in any decision. delta must lie in (1/4, 1); the default 99/100
// gives a stronger reduction than the classical 3/4 at negligible cost for
// the small dimensions used here. Throws dependent_rows if the input rows
// are linearly dependent.
LatticeBasis lll_reduce(const LatticeBasis& basis,
                        const mpq_class& delta = mpq_class(99, 100));

// Builds the (t+2)-dimensional embedding lattice for an HNP instance with
// t = |pairs| >= 2 pairs. All entries are scaled by n to stay integral:
//   row i   (i = 1..t): n^2 in column i, zero elsewhere
//   row t+1:            (n*t_1, ..., n*t_t, 2^L, 0)
//   row t+2:            (n*u_1, ..., n*u_t, 0, n*2^L)
// The vector (n*k_1, ..., n*k_t, d*2^L, n*2^L) lies in this lattice and is
// short when every k_i < 2^L. Throws bad_bound if L >= bitlen(n).
LatticeBasis build_hnp_lattice(const HnpInstance& inst);

// Scans a reduced basis for hidden-number candidates: for each row v, if
// 2^L divides v[t] exactly, both +v[t]/2^L and -v[t]/2^L are emitted mod n.
// Rows with v[t] = 0 contribute nothing. Duplicates are removed; order is
// deterministic (row-major, + before -). May return an empty list.
std::vector<Int> extract_candidates(const LatticeBasis& reduced,
                                    const HnpInstance& inst);

// Debug dump: one row per line, decimal integers, space-separated.
std::string basis_to_string(const LatticeBasis& basis);
LatticeBasis basis_from_string(const std::string& text);

} // namespace ecdsalab
