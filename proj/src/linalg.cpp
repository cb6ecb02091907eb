#include "vblind/linalg.hpp"

#include "vblind/error.hpp"

#include <utility>

namespace vblind {

namespace {

// Scale each row of a rational matrix to an integer row.
IntMatrix clear_denominators(const RatMatrix& a) {
    IntMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        Integer l = 1;
        for (std::size_t c = 0; c < a.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(r, c).get_den_mpz_t());
        for (std::size_t c = 0; c < a.cols(); ++c)
            out(r, c) = a(r, c).get_num() * (l / a(r, c).get_den());
    }
    return out;
}

// In-place Bareiss forward elimination with row pivoting. Returns the rank;
// pivot columns are appended to `pivots`. `sign` tracks row swaps.
std::size_t bareiss(IntMatrix& m, std::vector<std::size_t>& pivots, int& sign) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    Integer prev = 1;
    std::size_t r = 0;
    sign = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m(p, c) == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
            sign = -sign;
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                m(i, j) = (m(r, c) * m(i, j) - m(i, c) * m(r, j));
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            m(i, c) = 0;
        }
        prev = m(r, c);
        pivots.push_back(c);
        ++r;
    }
    return r;
}

} // namespace

Integer determinant(IntMatrix a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionError, "determinant of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    std::vector<std::size_t> pivots;
    int sign = 1;
    if (bareiss(a, pivots, sign) < n) return 0;
    return sign * a(n - 1, n - 1);
}

std::size_t rank(const RatMatrix& a) {
    IntMatrix m = clear_denominators(a);
    std::vector<std::size_t> pivots;
    int sign = 1;
    return bareiss(m, pivots, sign);
}

bool is_consistent(const RatMatrix& a, std::span<const Rational> b) {
    if (b.size() != a.rows()) throw Error(ErrorCode::DimensionError, "right-hand side size mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    return rank(aug) == rank(a);
}

std::optional<std::vector<Rational>> solve(const RatMatrix& a, std::span<const Rational> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw Error(ErrorCode::DimensionError, "solve needs a square system");
    RatMatrix aug(n, n + 1);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
        aug(r, n) = b[r];
    }
    IntMatrix m = clear_denominators(aug);
    std::vector<std::size_t> pivots;
    int sign = 1;
    bareiss(m, pivots, sign);
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational acc = Rational(m(i, n));
        for (std::size_t j = i + 1; j < n; ++j) acc -= Rational(m(i, j)) * x[j];
        x[i] = acc / Rational(m(i, i));
    }
    return x;
}

std::optional<RatMatrix> inverse(const IntMatrix& a) {
    const std::size_t n = a.rows();
    RatMatrix ra = to_rational(a);
    RatMatrix inv(n, n);
    std::vector<Rational> e(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) e[r] = (r == c) ? 1 : 0;
        auto col = solve(ra, e);
        if (!col) return std::nullopt;
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = (*col)[r];
    }
    return inv;
}

RatMatrix to_rational(const IntMatrix& a) {
    RatMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = Rational(a(r, c));
    return out;
}

} // namespace vblind
