#include "ecdsalab/sha256.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace ecdsalab {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, 32> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != digest.size())
        throw std::runtime_error("EVP_Digest(SHA-256) failed");
    return digest;
}

} // namespace ecdsalab
