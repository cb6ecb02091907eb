#include "vblind/piece.hpp"

#include "vblind/error.hpp"

#include <algorithm>

namespace vblind {

Piece unit_cube(std::size_t d) {
    Piece p;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Integer> e(d, 0);
        e[i] = 1;
        p.slabs.push_back({share(Direction::canonicalize(e)), Dyadic::from_int(0), Dyadic::from_int(1)});
    }
    return p;
}

IntMatrix normal_matrix(const Piece& p) {
    const std::size_t d = p.dim();
    IntMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        const Direction& v = *p.slabs[r].direction;
        if (v.dim() != d) throw Error(ErrorCode::DimensionError, "slab direction has wrong dimension");
        for (std::size_t c = 0; c < d; ++c) m(r, c) = v[c];
    }
    return m;
}

Frame::Frame(std::vector<DirectionRef> directions) : directions_(std::move(directions)) {
    const std::size_t d = directions_.size();
    IntMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        if (directions_[r]->dim() != d) throw Error(ErrorCode::DimensionError, "slab direction has wrong dimension");
        for (std::size_t c = 0; c < d; ++c) m(r, c) = (*directions_[r])[c];
    }
    auto inv = vblind::inverse(m);
    if (!inv) throw Error(ErrorCode::DegeneratePiece, "slab directions are linearly dependent");
    inverse_ = std::move(*inv);
}

Frame Frame::of(const Piece& p) {
    std::vector<DirectionRef> dirs;
    for (const auto& s : p.slabs) dirs.push_back(s.direction);
    return Frame(std::move(dirs));
}

std::vector<Rational> Frame::coefficients(std::span<const Rational> w) const {
    const std::size_t d = dim();
    if (w.size() != d) throw Error(ErrorCode::DimensionError, "functional has wrong dimension");
    std::vector<Rational> beta(d, 0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t c = 0; c < d; ++c) beta[i] += w[c] * inverse_(c, i);
    return beta;
}

std::vector<Rational> Frame::coefficients(const Direction& w) const {
    std::vector<Rational> rw(w.components().begin(), w.components().end());
    return coefficients(rw);
}

Point Frame::vertex(const Piece& p, unsigned mask) const {
    const std::size_t d = dim();
    std::vector<Rational> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = ((mask >> i) & 1u) ? p.slabs[i].hi.to_rational() : p.slabs[i].lo.to_rational();
    return point(c);
}

Point Frame::point(std::span<const Rational> coords) const {
    const std::size_t d = dim();
    Point x(d, 0);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t i = 0; i < d; ++i) x[r] += inverse_(r, i) * coords[i];
    return x;
}

std::vector<Point> Frame::vertices(const Piece& p) const {
    std::vector<Point> out;
    const unsigned count = 1u << dim();
    out.reserve(count);
    for (unsigned mask = 0; mask < count; ++mask) out.push_back(vertex(p, mask));
    return out;
}

RatInterval Frame::range_from_coefficients(const Piece& p, std::span<const Rational> beta) {
    RatInterval r{0, 0};
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (beta[i] == 0) continue;
        Rational a = beta[i] * p.slabs[i].lo.to_rational();
        Rational b = beta[i] * p.slabs[i].hi.to_rational();
        if (a > b) std::swap(a, b);
        r.lo += a;
        r.hi += b;
    }
    return r;
}

RatInterval Frame::range(const Piece& p, std::span<const Rational> w) const {
    return range_from_coefficients(p, coefficients(w));
}

RatInterval Frame::range(const Piece& p, const Direction& w) const {
    return range_from_coefficients(p, coefficients(w));
}

std::vector<Point> piece_vertices(const Piece& p) {
    // Each vertex is an independent exact solve of the d x d slab system.
    const std::size_t d = p.dim();
    RatMatrix a = to_rational(normal_matrix(p));
    std::vector<Point> out;
    const unsigned count = 1u << d;
    std::vector<Rational> c(d);
    for (unsigned mask = 0; mask < count; ++mask) {
        for (std::size_t i = 0; i < d; ++i)
            c[i] = ((mask >> i) & 1u) ? p.slabs[i].hi.to_rational() : p.slabs[i].lo.to_rational();
        auto x = solve(a, c);
        if (!x) throw Error(ErrorCode::DegeneratePiece, "slab directions are linearly dependent");
        out.push_back(std::move(*x));
    }
    return out;
}

RatInterval projection_range(const Piece& p, const Direction& v) {
    auto verts = piece_vertices(p);
    RatInterval r{scaled_projection(v, verts[0]), scaled_projection(v, verts[0])};
    for (const auto& x : verts) {
        Rational q = scaled_projection(v, x);
        if (q < r.lo) r.lo = q;
        if (q > r.hi) r.hi = q;
    }
    return r;
}

bool contains_point(const Piece& p, std::span<const Rational> x) {
    for (const auto& s : p.slabs) {
        Rational q = scaled_projection(*s.direction, x);
        if (q < s.lo.to_rational() || q > s.hi.to_rational()) return false;
    }
    return true;
}

} // namespace vblind
