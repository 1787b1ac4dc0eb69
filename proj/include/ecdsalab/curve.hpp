#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ecdsalab/bigmod.hpp"

namespace ecdsalab {

/// Affine point, or the point at infinity (the group identity).
struct Point {
    bool infinity = true;
    Int x{};
    Int y{};

    static Point inf() { return Point{}; }
    static Point at(Int px, Int py) { return Point{false, std::move(px), std::move(py)}; }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

/// Domain parameters of a short-Weierstrass curve y^2 = x^3 + ax + b over F_p
/// with base point g of prime order n (cofactor 1 for every registered curve).
struct CurveParams {
    std::string id;
    Int p;
    Int a;
    Int b;
    Point g;
    Int n;
    ModCtx field; // mod p
    ModCtx order; // mod n

    std::size_t field_bytes() const { return field.byte_width(); }
    std::size_t scalar_bytes() const { return order.byte_width(); }

    CurveParams(std::string id_, Int p_, Int a_, Int b_, Int gx, Int gy, Int n_);
};

/// Look up a registered curve: "secp256k1", "p256", "toy16", "toy32".
/// Parameters are validated once at registry construction (base point on
/// curve, n*G = infinity, non-zero discriminant).
/// Throws Error(unknown_curve) for anything else.
const CurveParams& registry_get(std::string_view id);

std::vector<std::string> registry_ids();

bool on_curve(const Point& pt, const CurveParams& c);

/// Throws Error(point_not_on_curve) if validation fails.
void require_on_curve(const Point& pt, const CurveParams& c);

Point negate(const Point& pt, const CurveParams& c);

/// Group law, chord-tangent formulas in affine coordinates.
/// Validates both inputs; handles doubling, inverse pairs and the identity.
Point point_add(const Point& lhs, const Point& rhs, const CurveParams& c);

/// Double-and-add. d is reduced mod n first; scalar_mul(0, P) = infinity.
/// Validates P once, not per loop step.
Point scalar_mul(const Int& d, const Point& pt, const CurveParams& c);

/// Exhaustive discrete log for toy curves.
/// Throws Error(curve_too_large) when c.n >= 2^20 and Error(not_found)
/// when q is not a multiple of the base point (impossible for cofactor 1,
/// guarded anyway).
Int brute_force_dlog(const Point& q, const CurveParams& c);

/// "04" || x || y in fixed-width lowercase hex; "00" for infinity.
std::string point_to_hex(const Point& pt, const CurveParams& c);

/// Parses the encoding above and validates the point is on the curve.
Point point_from_hex(std::string_view hex, const CurveParams& c);

} // namespace ecdsalab
