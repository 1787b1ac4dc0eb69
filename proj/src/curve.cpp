#include "ecdsalab/curve.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace ecdsalab {

CurveParams::CurveParams(std::string id_, Int p_, Int a_, Int b_, Int gx, Int gy, Int n_)
    : id(std::move(id_)),
      p(std::move(p_)),
      a(std::move(a_)),
      b(std::move(b_)),
      g(Point::at(std::move(gx), std::move(gy))),
      n(std::move(n_)),
      field(p),
      order(n) {}

bool on_curve(const Point& pt, const CurveParams& c) {
    if (pt.infinity) return true;
    if (pt.x < 0 || pt.x >= c.p || pt.y < 0 || pt.y >= c.p) return false;
    const ModCtx& f = c.field;
    Int lhs = f.mul(pt.y, pt.y);
    Int rhs = f.add(f.mul(f.mul(pt.x, pt.x), pt.x), f.add(f.mul(c.a, pt.x), c.b));
    return lhs == rhs;
}

void require_on_curve(const Point& pt, const CurveParams& c) {
    if (!on_curve(pt, c))
        raise(Errc::point_not_on_curve, "point is not on curve " + c.id);
}

Point negate(const Point& pt, const CurveParams& c) {
    require_on_curve(pt, c);
    if (pt.infinity) return pt;
    return Point::at(pt.x, c.field.neg(pt.y));
}

namespace {

// Group law without on-curve validation, for use inside scalar_mul's loop.
Point add_unchecked(const Point& lhs, const Point& rhs, const CurveParams& c) {
    if (lhs.infinity) return rhs;
    if (rhs.infinity) return lhs;
    const ModCtx& f = c.field;
    Int lambda;
    if (lhs.x == rhs.x) {
        if (f.add(lhs.y, rhs.y) == 0) return Point::inf(); // P + (-P)
        // tangent: (3x^2 + a) / 2y
        Int num = f.add(f.mul(3, f.mul(lhs.x, lhs.x)), c.a);
        lambda = f.mul(num, f.inv(f.add(lhs.y, lhs.y)));
    } else {
        lambda = f.mul(f.sub(rhs.y, lhs.y), f.inv(f.sub(rhs.x, lhs.x)));
    }
    Int x3 = f.sub(f.sub(f.mul(lambda, lambda), lhs.x), rhs.x);
    Int y3 = f.sub(f.mul(lambda, f.sub(lhs.x, x3)), lhs.y);
    return Point::at(std::move(x3), std::move(y3));
}

} // namespace

Point point_add(const Point& lhs, const Point& rhs, const CurveParams& c) {
    require_on_curve(lhs, c);
    require_on_curve(rhs, c);
    return add_unchecked(lhs, rhs, c);
}

Point scalar_mul(const Int& d, const Point& pt, const CurveParams& c) {
    require_on_curve(pt, c);
    Int k = c.order.reduce(d);
    Point result = Point::inf();
    Point addend = pt;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) result = add_unchecked(result, addend, c);
        addend = add_unchecked(addend, addend, c);
        k >>= 1;
    }
    return result;
}

Int brute_force_dlog(const Point& q, const CurveParams& c) {
    if (c.n >= (Int(1) << 20))
        raise(Errc::curve_too_large, "brute force dlog requires n < 2^20 (curve " + c.id + ")");
    require_on_curve(q, c);
    Point walk = Point::inf();
    for (Int d = 0; d < c.n; ++d) {
        if (walk == q) return d;
        walk = add_unchecked(walk, c.g, c);
    }
    raise(Errc::not_found, "point is not a multiple of the base point");
}

std::string point_to_hex(const Point& pt, const CurveParams& c) {
    if (pt.infinity) return "00";
    require_on_curve(pt, c);
    return "04" + to_hex_fixed(pt.x, c.field_bytes()) + to_hex_fixed(pt.y, c.field_bytes());
}

Point point_from_hex(std::string_view hex, const CurveParams& c) {
    if (hex == "00") return Point::inf();
    std::size_t w = 2 * c.field_bytes();
    if (hex.size() != 2 + 2 * w || hex.substr(0, 2) != "04")
        raise(Errc::parse_error, "expected \"04\" + " + std::to_string(2 * w) + " hex chars for curve " + c.id);
    Point pt = Point::at(from_hex(hex.substr(2, w)), from_hex(hex.substr(2 + w, w)));
    require_on_curve(pt, c);
    return pt;
}

namespace {

std::unique_ptr<CurveParams> make_validated(std::string id, const char* p_hex, const char* a_hex,
                                            const char* b_hex, const char* gx_hex, const char* gy_hex,
                                            const char* n_hex) {
    auto c = std::make_unique<CurveParams>(std::move(id), from_hex(p_hex), from_hex(a_hex),
                                           from_hex(b_hex), from_hex(gx_hex), from_hex(gy_hex),
                                           from_hex(n_hex));
    // 4a^3 + 27b^2 != 0 (mod p)
    const ModCtx& f = c->field;
    Int disc = f.add(f.mul(4, f.mul(c->a, f.mul(c->a, c->a))), f.mul(27, f.mul(c->b, c->b)));
    if (disc == 0) raise(Errc::precondition_failed, "singular curve: " + c->id);
    require_on_curve(c->g, *c);
    if (!scalar_mul(c->n, c->g, *c).infinity)
        raise(Errc::precondition_failed, "base point order mismatch: " + c->id);
    return c;
}

const std::map<std::string, std::unique_ptr<CurveParams>, std::less<>>& registry() {
    static const auto* curves = [] {
        auto* m = new std::map<std::string, std::unique_ptr<CurveParams>, std::less<>>();
        // SEC 2 secp256k1
        (*m)["secp256k1"] = make_validated(
            "secp256k1",
            "fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f", "0", "7",
            "79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798",
            "483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8",
            "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
        // NIST P-256 / secp256r1
        (*m)["p256"] = make_validated(
            "p256",
            "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff",
            "ffffffff00000001000000000000000000000000fffffffffffffffffffffffc",
            "5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b",
            "6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296",
            "4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5",
            "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551");
        // Toy curves with prime order (cofactor 1), discovered by
        // scripts/gen_toy_curves.py: exhaustive point enumeration for toy16,
        // Hasse-interval BSGS for toy32.
        (*m)["toy16"] = make_validated("toy16", "8003", "4", "8", "6", "33d3", "813b");
        (*m)["toy32"] = make_validated("toy32", "8000000b", "4", "1", "0", "1", "80003a17");
        return m;
    }();
    return *curves;
}

} // namespace

const CurveParams& registry_get(std::string_view id) {
    const auto& reg = registry();
    auto it = reg.find(id);
    if (it == reg.end())
        raise(Errc::unknown_curve, "no curve named \"" + std::string(id) + "\"");
    return *it->second;
}

std::vector<std::string> registry_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, params] : registry()) ids.push_back(id);
    return ids;
}

} // namespace ecdsalab
