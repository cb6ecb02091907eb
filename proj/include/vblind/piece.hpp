#pragma once

#include "vblind/direction.hpp"
#include "vblind/linalg.hpp"

#include <cstdint>
#include <vector>

namespace vblind {

struct Slab {
    DirectionRef direction;
    Dyadic lo;
    Dyadic hi;
};

struct RatInterval {
    Rational lo;
    Rational hi;
    friend bool operator==(const RatInterval&, const RatInterval&) = default;
};

// Parallelepiped given as d slabs, oldest first.
struct Piece {
    std::vector<Slab> slabs;
    int stage = 0;
    std::int64_t parent_id = -1;
    std::int64_t global_id = 0;
    Rational mass = 1;
    // Indices of the generating interval I(h, j); zero for the cube.
    Integer h = 0;
    std::int64_t j = 0;

    std::size_t dim() const { return slabs.size(); }
};

Piece unit_cube(std::size_t d);

// Inverse of the normal matrix of a fixed direction tuple. All pieces of a
// stage share one frame.
class Frame {
public:
    explicit Frame(std::vector<DirectionRef> directions);
    static Frame of(const Piece& p);

    std::size_t dim() const { return directions_.size(); }
    const std::vector<DirectionRef>& directions() const { return directions_; }
    // Column i is the edge vector along which only slab i's coordinate moves.
    const RatMatrix& inverse() const { return inverse_; }

    // Coefficients beta with w = sum beta_i v_i.
    std::vector<Rational> coefficients(std::span<const Rational> w) const;
    std::vector<Rational> coefficients(const Direction& w) const;

    // Point with slab coordinates v_i·x = coords[i].
    Point point(std::span<const Rational> coords) const;
    Point vertex(const Piece& p, unsigned mask) const;
    std::vector<Point> vertices(const Piece& p) const;
    // Range of the linear functional w·x over p.
    RatInterval range(const Piece& p, std::span<const Rational> w) const;
    RatInterval range(const Piece& p, const Direction& w) const;
    // Range over p given precomputed coefficients.
    static RatInterval range_from_coefficients(const Piece& p, std::span<const Rational> beta);

private:
    std::vector<DirectionRef> directions_;
    RatMatrix inverse_;
};

IntMatrix normal_matrix(const Piece& p);
// Vertex with index mask uses hi for slab i iff bit i is set.
std::vector<Point> piece_vertices(const Piece& p);
RatInterval projection_range(const Piece& p, const Direction& v);
bool contains_point(const Piece& p, std::span<const Rational> x);

} // namespace vblind
