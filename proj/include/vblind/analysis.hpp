#pragma once

#include "vblind/construction.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace vblind {

// Counting recursion m_k = n_k - a_k + m_{k-1} - n_{k-d} - alpha~_k.
struct RecursionRow {
    int k = 0;
    double alpha_tilde = 0;
    int M = 0;
    bool ok = false; // decided on integer counts, not on alpha_tilde
    double delta = 0;
    std::optional<double> eps;
    std::optional<double> eps_prime;
};

struct RecursionReport {
    std::vector<RecursionRow> rows;
    bool ok() const;
};

// ledger[k-1] is stage k.
RecursionReport check_mk_recursion(std::span<const LedgerRow> ledger, const LineSchedule& schedule);

struct WkValue {
    Rational scaled; // in the line's scaled coordinate
    double metric = 0;
};

// Minimum projected distance between vertices on opposite ends of the oldest slab.
WkValue compute_wk(const Piece& parent, const Direction& line);
bool wk_sandwich(const Rational& scaled, std::int64_t n_kd, int alpha);

struct Ambient {};
struct Projection {
    Direction line;
};
struct Subspace {
    std::vector<Direction> basis;
};
using BoxTarget = std::variant<Ambient, Projection, Subspace>;

// Cells are counted when their interior meets a piece's interior.
Integer box_count(std::span<const Piece> pieces, std::int64_t q, const BoxTarget& target);

struct SeriesPoint {
    std::int64_t q = 0;
    Integer count;
};
double dim_slope(std::span<const SeriesPoint> series);

struct MeasureTerm {
    int k = 0;
    std::int64_t n = 0;
    Integer count;
    double log2_value = 0; // m_k - n_k t
};

std::vector<MeasureTerm> projection_measure_series(std::span<const LedgerRow> ledger, const LineSchedule& schedule,
                                                   const Direction& line, const Rational& t);
// Exact comparisons of 2^{m - n t}.
bool strictly_decreasing(std::span<const MeasureTerm> series, const Rational& t);
bool below_pow2(const MeasureTerm& term, const Rational& t, std::int64_t e);

enum class BallCase { Case1, Case2 };
std::string to_string(BallCase c);

struct BallQuery {
    Point center;
    std::int64_t q = 0;
    BallCase case_tag = BallCase::Case1;
};

struct QRange {
    std::int64_t lo = 0; // inclusive
    std::int64_t hi = 0; // inclusive, empty when hi < lo
    bool empty() const { return hi < lo; }
};

// Case1: n_k < q <= n_{k+1} - a_{k+1}.  Case2: n_k - a_k < q <= n_k.
QRange case_range(const Construction& c, int k, BallCase which);
BallQuery make_ball(const Construction& c, int k, Point center, std::int64_t q);

struct MassBounds {
    Rational lower;
    Rational upper;
};

MassBounds mass_ball_bounds(const Stage& stage, const BallQuery& ball);
Rational squared_distance(const Piece& p, std::span<const Rational> x);
// lower <= 2^{-q s} / q^2, exact.
bool ball_bound_holds(const Rational& mass, std::int64_t q, const Rational& s);

// Uniform point of a random piece; coordinates are multiples of 2^{-32} of the slab widths.
Point random_point(const Stage& stage, std::mt19937_64& rng);

struct EnergyReport {
    double s = 0;
    double cross = 0;
    std::int64_t diagonal_count = 0;
    Rational diagonal_mass_sq;
};

EnergyReport energy(const Stage& stage, double s);

} // namespace vblind
