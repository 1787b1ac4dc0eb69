#include "ecdsalab/rng.hpp"

namespace ecdsalab {

Int Rng::below(const Int& bound) {
    if (bound < 1) raise(Errc::precondition_failed, "bound must be >= 1");
    if (bound == 1) return 0;
    std::size_t bits = bit_length(bound - 1);
    std::size_t words = (bits + 63) / 64;
    std::size_t top_bits = bits - 64 * (words - 1);
    std::uint64_t top_mask = top_bits == 64 ? ~0ULL : ((1ULL << top_bits) - 1);
    while (true) {
        Int x = 0;
        for (std::size_t i = 0; i < words; ++i) {
            std::uint64_t w = next_u64();
            if (i == 0) w &= top_mask;
            x <<= 64;
            x += Int(w);
        }
        if (x < bound) return x;
    }
}

Int Rng::scalar(const Int& n) {
    if (n < 3) raise(Errc::precondition_failed, "order too small for scalar sampling");
    return below(n - 1) + 1;
}

std::vector<std::uint8_t> Rng::bytes(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    std::size_t i = 0;
    while (i < count) {
        std::uint64_t w = next_u64();
        for (int b = 0; b < 8 && i < count; ++b, ++i) {
            out[i] = static_cast<std::uint8_t>(w & 0xff);
            w >>= 8;
        }
    }
    return out;
}

std::uint64_t SystemRng::next_u64() {
    std::uint64_t hi = dev_();
    std::uint64_t lo = dev_();
    return (hi << 32) ^ lo;
}

} // namespace ecdsalab
