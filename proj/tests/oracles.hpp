#pragma once

// Brute-force references for the stage builder and the box counter.

#include "support.hpp"
#include "vblind/analysis.hpp"

#include <optional>
#include <set>
#include <string>

namespace vblind::testing {

using ChildSet = std::set<std::pair<std::int64_t, std::string>>; // (parent id, h)

// Every h whose interval can touch the parent's projection, each tested by
// the containment rule directly.
inline ChildSet oracle_children(const Stage& prev, const DirectionRef& line, std::int64_t n, std::int64_t a,
                         std::int64_t* empty_parents) {
    ChildSet out;
    const Rational S = pow2(a - n);
    *empty_parents = 0;
    for (std::size_t pos = 0; pos < prev.pieces.size(); ++pos) {
        const Piece& p = prev.pieces[pos];
        const auto j = static_cast<std::int64_t>(pos + 1);
        const RatInterval r = projection_range(p, *line);
        const Rational off = pow2(1 - n) * Rational(static_cast<long>(j));
        const Integer lo = floor_of(Rational((r.lo - off) / S)) - 2;
        const Integer hi = ceil_of(Rational((r.hi - off) / S)) + 2;
        bool any = false;
        for (Integer h = lo; h <= hi; ++h) {
            if (full_crossing_child(p, line, interval(h, j, n, a), 0)) {
                out.emplace(p.global_id, h.get_str());
                any = true;
            }
        }
        if (!any) ++*empty_parents;
    }
    return out;
}

inline ChildSet built_children(const Stage& s) {
    ChildSet out;
    for (const auto& p : s.pieces) out.emplace(p.parent_id, p.h.get_str());
    return out;
}

// a·x + b·s <= c
struct Ineq {
    std::vector<Rational> a;
    Rational b;
    Rational c;
};

// Is there x with every constraint strict? Maximise the common slack s by
// eliminating x one variable at a time.
inline bool strictly_feasible(std::vector<Ineq> sys, std::size_t nvars) {
    sys.push_back({std::vector<Rational>(nvars, 0), 1, 1}); // s <= 1
    for (std::size_t v = 0; v < nvars; ++v) {
        std::vector<Ineq> pos, neg, out;
        for (auto& r : sys) {
            if (r.a[v] > 0) pos.push_back(r);
            else if (r.a[v] < 0) neg.push_back(r);
            else out.push_back(r);
        }
        for (const auto& p : pos)
            for (const auto& n : neg) {
                const Rational fp = -n.a[v], fn = p.a[v];
                Ineq r{std::vector<Rational>(nvars), fp * p.b + fn * n.b, fp * p.c + fn * n.c};
                for (std::size_t i = 0; i < nvars; ++i) r.a[i] = fp * p.a[i] + fn * n.a[i];
                out.push_back(std::move(r));
            }
        sys = std::move(out);
    }
    std::optional<Rational> upper;
    Rational lower = 0; // strictly above
    for (const auto& r : sys) {
        if (r.b > 0) {
            const Rational u = r.c / r.b;
            if (!upper || u < *upper) upper = u;
        } else if (r.b < 0) {
            lower = std::max(lower, Rational(r.c / r.b));
        } else if (r.c < 0) {
            return false;
        }
    }
    return upper && *upper > lower;
}

inline void add_band(std::vector<Ineq>& sys, const std::vector<Rational>& w, const Rational& lo, const Rational& hi) {
    std::vector<Rational> neg(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) neg[i] = -w[i];
    sys.push_back({w, 1, hi});    // w·x + s <= hi
    sys.push_back({neg, 1, -lo}); // -w·x + s <= -lo
}

inline std::vector<Rational> as_rational(const Direction& v) {
    std::vector<Rational> out;
    for (const auto& c : v.components()) out.emplace_back(c);
    return out;
}

// Union over pieces of the grid cells (in w_j·x coordinates) whose open box
// meets the open piece.
inline Integer oracle_box_count(std::span<const Piece> pieces, std::int64_t q, const std::vector<Direction>& basis) {
    const Rational delta = pow2(-q);
    std::set<std::vector<Integer>> hit;
    for (const auto& p : pieces) {
        std::vector<Ineq> base;
        for (const auto& s : p.slabs) add_band(base, as_rational(*s.direction), s.lo.to_rational(), s.hi.to_rational());
        std::vector<Integer> lo, hi;
        for (const auto& w : basis) {
            const auto r = projection_range(p, w);
            lo.push_back(floor_of(Rational(r.lo / delta)));
            hi.push_back(ceil_of(Rational(r.hi / delta)) - 1);
        }
        std::vector<Integer> idx = lo;
        while (true) {
            auto sys = base;
            for (std::size_t j = 0; j < basis.size(); ++j)
                add_band(sys, as_rational(basis[j]), Rational(idx[j]) * delta, Rational(idx[j] + 1) * delta);
            if (strictly_feasible(sys, p.dim())) hit.insert(idx);
            std::size_t j = 0;
            for (; j < idx.size(); ++j) {
                if (idx[j] < hi[j]) {
                    ++idx[j];
                    break;
                }
                idx[j] = lo[j];
            }
            if (j == idx.size()) break;
        }
    }
    return Integer(static_cast<unsigned long>(hit.size()));
}

} // namespace vblind::testing
