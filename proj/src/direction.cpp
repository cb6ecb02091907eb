#include "vblind/direction.hpp"

#include "vblind/error.hpp"

namespace vblind {

Direction Direction::canonicalize(std::span<const Integer> raw) {
    Integer g = 0;
    for (const auto& c : raw) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0) throw Error(ErrorCode::InvalidDirection, "zero vector");
    Direction out;
    out.components_.assign(raw.begin(), raw.end());
    int sign = 0;
    for (const auto& c : out.components_) {
        if (c != 0) {
            sign = sgn(c);
            break;
        }
    }
    out.norm_sq_ = 0;
    for (auto& c : out.components_) {
        c /= g;
        if (sign < 0) c = -c;
        out.norm_sq_ += c * c;
    }
    return out;
}

Direction Direction::canonicalize(std::initializer_list<long> raw) {
    std::vector<Integer> v;
    for (long x : raw) v.emplace_back(x);
    return canonicalize(v);
}

Direction canonicalize_direction(std::span<const Integer> raw) { return Direction::canonicalize(raw); }

DirectionRef share(Direction d) { return std::make_shared<const Direction>(std::move(d)); }

Integer dot(const Direction& u, const Direction& v) {
    if (u.dim() != v.dim()) throw Error(ErrorCode::DimensionError, "direction dimensions differ");
    Integer s = 0;
    for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * v[i];
    return s;
}

Rational scaled_projection(const Direction& v, std::span<const Rational> x) {
    if (v.dim() != x.size()) throw Error(ErrorCode::DimensionError, "point and direction dimensions differ");
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += Rational(v[i]) * x[i];
    return s;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionError, "vector dimensions differ");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::string to_string(const Direction& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s + ")";
}

std::string to_string(const Point& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += to_string(x[i]);
    }
    return s + ")";
}

} // namespace vblind
