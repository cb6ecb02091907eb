#pragma once

#include "vblind/construction.hpp"

#include <utility>
#include <vector>

namespace vblind::testing {

struct SlabSpec {
    Direction dir;
    Rational lo;
    Rational hi;
};

inline Piece make_piece(const std::vector<SlabSpec>& slabs, Rational mass = 1) {
    Piece p;
    for (const auto& s : slabs) p.slabs.push_back({share(s.dir), to_dyadic(s.lo), to_dyadic(s.hi)});
    p.mass = std::move(mass);
    return p;
}

inline Direction dir(std::initializer_list<long> v) { return Direction::canonicalize(v); }

inline Rational q(long p, long d = 1) { return Rational(p, d); }

} // namespace vblind::testing
