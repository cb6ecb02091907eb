#pragma once

#include "vblind/numeric.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vblind {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

// Bareiss fraction-free elimination throughout.
Integer determinant(IntMatrix a);
std::size_t rank(const RatMatrix& a);
// Unique solution of a square system, nullopt when singular.
std::optional<std::vector<Rational>> solve(const RatMatrix& a, std::span<const Rational> b);
// True iff a·x = b has at least one solution (a may be rectangular).
bool is_consistent(const RatMatrix& a, std::span<const Rational> b);
std::optional<RatMatrix> inverse(const IntMatrix& a);

RatMatrix to_rational(const IntMatrix& a);

} // namespace vblind
