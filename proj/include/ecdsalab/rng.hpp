#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ecdsalab/bigmod.hpp"

namespace ecdsalab {

/// Source of uniform scalars. Deterministic (seeded) in tests, demos and
/// corpus generation; OS-entropy backed for real key generation.
class Rng {
public:
    virtual ~Rng() = default;
    virtual std::uint64_t next_u64() = 0;

    /// Uniform in [0, bound) by rejection sampling; bound >= 1.
    Int below(const Int& bound);

    /// Uniform in [1, n-1].
    Int scalar(const Int& n);

    std::vector<std::uint8_t> bytes(std::size_t count);
};

class SeededRng final : public Rng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next_u64() override { return eng_(); }

private:
    std::mt19937_64 eng_;
};

class SystemRng final : public Rng {
public:
    std::uint64_t next_u64() override;

private:
    std::random_device dev_;
};

} // namespace ecdsalab
