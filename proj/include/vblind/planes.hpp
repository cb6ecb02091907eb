#pragma once

#include "vblind/construction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vblind {

Rational h_function(int k, const Rational& s);

// P(Y, y0) = {(x, y0 + Y x) : x in R^k}.
struct KPlane {
    std::size_t d = 0;
    std::size_t k = 0;
    RatMatrix Y; // (d-k) x k
    std::vector<Rational> y0;
};

KPlane make_plane(std::size_t d, std::size_t k, RatMatrix Y, std::vector<Rational> y0);
bool plane_contains(const KPlane& p, std::span<const Rational> point);
bool verify_disjoint(const KPlane& p, const KPlane& q);
bool verify_nonparallel(const KPlane& p, const KPlane& q);

struct PlaneFamily {
    std::size_t d = 0;
    std::size_t k = 0;
    std::vector<KPlane> planes;
    std::string provenance;
    std::optional<Rational> s;
    std::optional<int> m;
};

struct PairCheck {
    std::int64_t pairs = 0;
    std::int64_t failures = 0;
    std::optional<std::pair<std::size_t, std::size_t>> first;
};

PairCheck check_family(const PlaneFamily& f);

// Lexicographically smallest vertex of each piece.
std::vector<Point> representatives(const Stage& stage);
// Throws SampleNotInjective when two representatives share coordinate i.
void require_distinct(std::span<const Point> reps, std::span<const std::size_t> coords);

// Stage in R^D with D = (k+1)(d-1-k) + 1. Representative p splits as
// t = p[0], f1 = the next (d-1-k)k entries (row-major), f2 = the rest.
PlaneFamily measure_zero_family(const Stage& stage, std::size_t d, std::size_t k, std::size_t max_planes);

// ceil(s/(k+1)) together with the template that realises it.
struct DimensionCase {
    int m = 0;
    enum class Kind { Single, Slice, Template } kind = Kind::Single;
    int rows = 0; // m or m+1 for the block template
    std::size_t stage_dim() const;
    std::size_t k = 0;
};

DimensionCase dimension_case(std::size_t d, std::size_t k, const Rational& s);
PlaneFamily dimension_family(std::size_t d, std::size_t k, const Rational& s, const Stage& stage,
                             std::size_t max_planes);

// P_{a,b} = {(x, y) : y = a·x + b}.
struct Hyperplane {
    std::vector<Rational> a;
    Rational b;
};

struct SectionList {
    std::vector<Rational> vertical;
    int k = 0;
    std::vector<RatInterval> intervals; // sorted by lo
    std::optional<std::pair<std::size_t, std::size_t>> overlap;
};

struct DualResult {
    std::vector<Hyperplane> hyperplanes;
    std::vector<SectionList> sections;
};

Direction vertical_direction(std::span<const Rational> x);
SectionList section_list(const Stage& stage, std::span<const Rational> x);
// Sections of stage k; every vertical's direction (x, 1) must be a schedule line.
DualResult dual_hyperplanes(const Construction& c, int k, const std::vector<std::vector<Rational>>& verticals);

} // namespace vblind
