#pragma once

#include <stdexcept>
#include <string>

namespace ecdsalab {

enum class Errc {
    not_invertible,
    unknown_curve,
    point_not_on_curve,
    curve_too_large,
    not_found,
    degenerate_signature,
    wrong_nonce,
    precondition_failed,
    singular_system,
    validation_failed,
    bad_bound,
    dependent_rows,
    parse_error,
};

/// Stable machine-readable name, e.g. "NotInvertible"; used in CLI diagnostics.
const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace ecdsalab
