#pragma once

#include "vblind/numeric.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vblind {

using Point = std::vector<Rational>;

// Primitive integer vector, first nonzero component positive.
class Direction {
public:
    static Direction canonicalize(std::span<const Integer> raw);
    static Direction canonicalize(std::initializer_list<long> raw);

    const std::vector<Integer>& components() const { return components_; }
    const Integer& operator[](std::size_t i) const { return components_[i]; }
    std::size_t dim() const { return components_.size(); }
    const Integer& norm_sq() const { return norm_sq_; }

    friend bool operator==(const Direction& a, const Direction& b) { return a.components_ == b.components_; }
    friend auto operator<=>(const Direction& a, const Direction& b) {
        return std::lexicographical_compare_three_way(
            a.components_.begin(), a.components_.end(), b.components_.begin(), b.components_.end(),
            [](const Integer& x, const Integer& y) { int c = cmp(x, y); return c <=> 0; });
    }

private:
    std::vector<Integer> components_;
    Integer norm_sq_;
};

using DirectionRef = std::shared_ptr<const Direction>;

Direction canonicalize_direction(std::span<const Integer> raw);
DirectionRef share(Direction d);

Integer dot(const Direction& u, const Direction& v);
// v·x in the scaled coordinate.
Rational scaled_projection(const Direction& v, std::span<const Rational> x);
Rational dot(std::span<const Rational> a, std::span<const Rational> b);

std::string to_string(const Direction& v); // "(a,b,c)"
std::string to_string(const Point& x);

} // namespace vblind
