#include "ecdsalab/bigmod.hpp"

#include <cctype>

namespace ecdsalab {

std::size_t bit_length(const Int& x) {
    if (x == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

std::string to_hex(const Int& x) {
    if (x < 0) raise(Errc::precondition_failed, "to_hex requires a non-negative value");
    return x.get_str(16);
}

std::string to_hex_fixed(const Int& x, std::size_t width_bytes) {
    std::string s = to_hex(x);
    std::size_t want = 2 * width_bytes;
    if (s.size() > want)
        raise(Errc::precondition_failed, "value does not fit in " + std::to_string(width_bytes) + " bytes");
    return std::string(want - s.size(), '0') + s;
}

Int from_hex(std::string_view hex) {
    if (hex.empty()) raise(Errc::parse_error, "empty hex string");
    for (char c : hex)
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            raise(Errc::parse_error, "invalid hex digit in \"" + std::string(hex) + "\"");
    Int x;
    if (mpz_set_str(x.get_mpz_t(), std::string(hex).c_str(), 16) != 0)
        raise(Errc::parse_error, "unparseable hex string");
    return x;
}

std::vector<std::uint8_t> to_bytes(const Int& x, std::size_t width_bytes) {
    if (x < 0 || bit_length(x) > 8 * width_bytes)
        raise(Errc::precondition_failed, "value does not fit in requested byte width");
    std::vector<std::uint8_t> out(width_bytes, 0);
    if (x != 0) {
        std::size_t used = (bit_length(x) + 7) / 8;
        mpz_export(out.data() + (width_bytes - used), nullptr, 1, 1, 1, 0, x.get_mpz_t());
    }
    return out;
}

Int from_bytes(std::span<const std::uint8_t> bytes) {
    Int x;
    if (!bytes.empty())
        mpz_import(x.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return x;
}

ModCtx::ModCtx(Int modulus) : m_(std::move(modulus)) {
    if (m_ <= 1) raise(Errc::precondition_failed, "modulus must be > 1");
    if (mpz_even_p(m_.get_mpz_t()))
        raise(Errc::precondition_failed, "modulus must be odd");
    bits_ = bit_length(m_);
}

Int ModCtx::reduce(const Int& x) const {
    Int r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m_.get_mpz_t()); // mpz_mod yields the non-negative residue
    return r;
}

Int ModCtx::add(const Int& a, const Int& b) const {
    Int r = a + b;
    if (r >= m_) r -= m_;
    return r;
}

Int ModCtx::sub(const Int& a, const Int& b) const {
    Int r = a - b;
    if (r < 0) r += m_;
    return r;
}

Int ModCtx::mul(const Int& a, const Int& b) const {
    Int r = a * b;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m_.get_mpz_t());
    return r;
}

Int ModCtx::neg(const Int& a) const {
    if (a == 0) return 0;
    return m_ - a;
}

Int ModCtx::inv(const Int& x) const {
    Int r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m_.get_mpz_t()) == 0)
        raise(Errc::not_invertible, "gcd(" + x.get_str() + ", modulus) != 1");
    return r;
}

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::not_invertible: return "NotInvertible";
        case Errc::unknown_curve: return "UnknownCurve";
        case Errc::point_not_on_curve: return "PointNotOnCurve";
        case Errc::curve_too_large: return "CurveTooLarge";
        case Errc::not_found: return "NotFound";
        case Errc::degenerate_signature: return "DegenerateSignature";
        case Errc::wrong_nonce: return "WrongNonce";
        case Errc::precondition_failed: return "PreconditionFailed";
        case Errc::singular_system: return "SingularSystem";
        case Errc::validation_failed: return "ValidationFailed";
        case Errc::bad_bound: return "BadBound";
        case Errc::dependent_rows: return "DependentRows";
        case Errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

} // namespace ecdsalab
