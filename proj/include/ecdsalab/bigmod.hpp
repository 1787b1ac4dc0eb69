#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecdsalab/errors.hpp"

namespace ecdsalab {

// Arbitrary-precision integer. GMP's mpz_class carries all scalars in the
// project, including the multi-thousand-bit values produced by exact
// Gram-Schmidt during lattice reduction.
using Int = mpz_class;

/// Number of significant bits; bit_length(0) == 0.
std::size_t bit_length(const Int& x);

/// Lowercase big-endian hex, no prefix, minimal width ("0" for zero).
std::string to_hex(const Int& x);

/// Lowercase big-endian hex zero-padded to `width_bytes` bytes.
/// Requires x >= 0 and x < 2^(8*width_bytes).
std::string to_hex_fixed(const Int& x, std::size_t width_bytes);

/// Parse big-endian hex (case-insensitive, optional "0x" prefix rejected).
/// Throws Error(parse_error) on empty or non-hex input.
Int from_hex(std::string_view hex);

std::vector<std::uint8_t> to_bytes(const Int& x, std::size_t width_bytes);
Int from_bytes(std::span<const std::uint8_t> bytes);

/// Residue arithmetic context for a fixed odd modulus > 1.
/// Immutable after construction; every method is a pure function, so one
/// context may be shared freely across threads.
class ModCtx {
public:
    /// Throws Error(precondition_failed) unless modulus is odd and > 1.
    explicit ModCtx(Int modulus);

    const Int& modulus() const { return m_; }
    std::size_t bits() const { return bits_; }
    std::size_t byte_width() const { return (bits_ + 7) / 8; }

    /// Canonical representative in [0, m); accepts negative input.
    Int reduce(const Int& x) const;

    Int add(const Int& a, const Int& b) const;
    Int sub(const Int& a, const Int& b) const;
    Int mul(const Int& a, const Int& b) const;
    Int neg(const Int& a) const;

    /// Modular inverse. Throws Error(not_invertible) when gcd(x, m) != 1,
    /// which includes x == 0.
    Int inv(const Int& x) const;

private:
    Int m_;
    std::size_t bits_;
};

} // namespace ecdsalab
