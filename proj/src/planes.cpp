#include "vblind/planes.hpp"

#include "vblind/error.hpp"

#include <algorithm>

namespace vblind {

Rational h_function(int k, const Rational& s) {
    if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be positive");
    if (s < 0) throw Error(ErrorCode::InvalidInput, "s must be non-negative");
    const Rational kk(k);
    const Integer m = ceil_of(Rational(s / (kk + 1)));
    const Rational ratio = (kk + s) / (kk + 1);
    if (Rational(m) >= ratio) return s - kk * Rational(m) + 2 * kk;
    return kk + Rational(m);
}

KPlane make_plane(std::size_t d, std::size_t k, RatMatrix Y, std::vector<Rational> y0) {
    if (!(d > k && k >= 1)) throw Error(ErrorCode::DimensionError, "k-plane needs d > k >= 1");
    if (Y.rows() != d - k || Y.cols() != k || y0.size() != d - k)
        throw Error(ErrorCode::DimensionError, "k-plane blocks have the wrong shape");
    return KPlane{d, k, std::move(Y), std::move(y0)};
}

bool plane_contains(const KPlane& p, std::span<const Rational> point) {
    if (point.size() != p.d) throw Error(ErrorCode::DimensionError, "point has wrong dimension");
    for (std::size_t r = 0; r < p.d - p.k; ++r) {
        Rational y = p.y0[r];
        for (std::size_t c = 0; c < p.k; ++c) y += p.Y(r, c) * point[c];
        if (y != point[p.k + r]) return false;
    }
    return true;
}

namespace {

void same_shape(const KPlane& p, const KPlane& q) {
    if (p.d != q.d || p.k != q.k) throw Error(ErrorCode::DimensionError, "k-planes of different shape");
}

} // namespace

bool verify_disjoint(const KPlane& p, const KPlane& q) {
    same_shape(p, q);
    // (Y - Y') x = y0' - y0 has no solution.
    const std::size_t rows = p.d - p.k;
    RatMatrix a(rows, p.k);
    std::vector<Rational> b(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < p.k; ++c) a(r, c) = p.Y(r, c) - q.Y(r, c);
        b[r] = q.y0[r] - p.y0[r];
    }
    return !is_consistent(a, b);
}

bool verify_nonparallel(const KPlane& p, const KPlane& q) {
    same_shape(p, q);
    return !(p.Y == q.Y);
}

PairCheck check_family(const PlaneFamily& f) {
    PairCheck out;
    for (std::size_t i = 0; i < f.planes.size(); ++i)
        for (std::size_t j = i + 1; j < f.planes.size(); ++j) {
            ++out.pairs;
            if (verify_disjoint(f.planes[i], f.planes[j]) && verify_nonparallel(f.planes[i], f.planes[j])) continue;
            ++out.failures;
            if (!out.first) out.first = {i, j};
        }
    return out;
}

std::vector<Point> representatives(const Stage& stage) {
    std::vector<Point> out;
    out.reserve(stage.pieces.size());
    if (stage.pieces.empty()) return out;
    Frame frame = Frame::of(stage.pieces.front());
    for (const auto& p : stage.pieces) {
        auto vs = frame.vertices(p);
        out.push_back(*std::min_element(vs.begin(), vs.end()));
    }
    return out;
}

void require_distinct(std::span<const Point> reps, std::span<const std::size_t> coords) {
    for (std::size_t c : coords) {
        std::vector<Rational> v;
        v.reserve(reps.size());
        for (const auto& p : reps) v.push_back(p.at(c));
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end())
            throw Error(ErrorCode::SampleNotInjective,
                        "representatives share coordinate " + std::to_string(c) + "; take a later stage");
    }
}

namespace {

std::vector<Point> leading(const Stage& stage, std::size_t max_planes) {
    auto reps = representatives(stage);
    if (reps.size() > max_planes) reps.resize(max_planes);
    return reps;
}

// Block template: f1 fills rows 0..rows-2, the slice row rows-1 carries t in y0,
// remaining rows are zero.
KPlane block_plane(std::size_t d, std::size_t k, std::size_t rows, const Point& p) {
    RatMatrix Y(d - k, k);
    std::vector<Rational> y0(d - k, 0);
    for (std::size_t r = 0; r < d - k; ++r)
        for (std::size_t c = 0; c < k; ++c) Y(r, c) = 0;
    std::size_t at = 1;
    for (std::size_t r = 0; r + 1 < rows; ++r)
        for (std::size_t c = 0; c < k; ++c) Y(r, c) = p[at++];
    for (std::size_t r = 0; r + 1 < rows; ++r) y0[r] = p[at++];
    y0[rows - 1] = p[0];
    return make_plane(d, k, std::move(Y), std::move(y0));
}

} // namespace

PlaneFamily measure_zero_family(const Stage& stage, std::size_t d, std::size_t k, std::size_t max_planes) {
    if (k < 1 || d < k + 2) throw Error(ErrorCode::DimensionError, "measure-zero family needs d >= k+2");
    const std::size_t D = (k + 1) * (d - 1 - k) + 1;
    if (stage.pieces.empty()) throw Error(ErrorCode::EmptyStage, "stage has no pieces");
    if (stage.pieces.front().dim() != D)
        throw Error(ErrorCode::DimensionError, "stage must live in R^" + std::to_string(D));
    auto reps = leading(stage, max_planes);
    const std::size_t y11 = 1;
    const std::size_t coords[] = {0, y11};
    require_distinct(reps, coords);
    PlaneFamily f;
    f.d = d;
    f.k = k;
    f.provenance = "measure_zero: slices x_d = t, stage " + std::to_string(stage.k);
    for (const auto& p : reps) f.planes.push_back(block_plane(d, k, d - k, p));
    return f;
}

std::size_t DimensionCase::stage_dim() const {
    switch (kind) {
    case Kind::Single: return 0;
    case Kind::Slice: return 1;
    case Kind::Template: return 1 + (k + 1) * static_cast<std::size_t>(rows - 1);
    }
    return 0;
}

DimensionCase dimension_case(std::size_t d, std::size_t k, const Rational& s) {
    if (k < 1 || d <= k) throw Error(ErrorCode::DimensionError, "dimension family needs d > k >= 1");
    const Rational kk(static_cast<long>(k));
    const Rational top = (kk + 1) * Rational(static_cast<long>(d - k));
    if (s < 0 || s > top) throw Error(ErrorCode::InvalidInput, "s outside [0, (k+1)(d-k)]");
    DimensionCase c;
    c.k = k;
    c.m = static_cast<int>(ceil_of(Rational(s / (kk + 1))).get_si());
    const Rational ratio = (kk + s) / (kk + 1);
    if (c.m == 0) {
        c.kind = DimensionCase::Kind::Single;
    } else if (c.m >= 2 && Rational(c.m) >= ratio) {
        c.kind = DimensionCase::Kind::Template;
        c.rows = c.m;
    } else if (Rational(c.m) <= ratio) {
        c.kind = DimensionCase::Kind::Template;
        c.rows = c.m + 1;
    } else {
        c.kind = DimensionCase::Kind::Slice; // m = 1 >= (k+s)/(k+1)
    }
    if (c.kind == DimensionCase::Kind::Template && static_cast<std::size_t>(c.rows) > d - k)
        throw Error(ErrorCode::CaseRangeError, "template needs " + std::to_string(c.rows) + " rows but d-k = " +
                                                   std::to_string(d - k));
    if (c.kind == DimensionCase::Kind::Slice && d - k < 1)
        throw Error(ErrorCode::CaseRangeError, "slice family needs d-k >= 1");
    return c;
}

PlaneFamily dimension_family(std::size_t d, std::size_t k, const Rational& s, const Stage& stage,
                             std::size_t max_planes) {
    const DimensionCase c = dimension_case(d, k, s);
    PlaneFamily f;
    f.d = d;
    f.k = k;
    f.s = s;
    f.m = c.m;
    if (c.kind == DimensionCase::Kind::Single) {
        RatMatrix Y(d - k, k);
        for (std::size_t r = 0; r < d - k; ++r)
            for (std::size_t col = 0; col < k; ++col) Y(r, col) = 0;
        f.planes.push_back(make_plane(d, k, std::move(Y), std::vector<Rational>(d - k, 0)));
        f.provenance = "dimension: single plane";
        return f;
    }
    if (stage.pieces.empty()) throw Error(ErrorCode::EmptyStage, "stage has no pieces");
    const std::size_t D = stage.pieces.front().dim();
    auto reps = leading(stage, max_planes);
    if (c.kind == DimensionCase::Kind::Slice) {
        const std::size_t coords[] = {0};
        require_distinct(reps, coords);
        for (const auto& p : reps) {
            RatMatrix Y(d - k, k);
            for (std::size_t r = 0; r < d - k; ++r)
                for (std::size_t col = 0; col < k; ++col) Y(r, col) = 0;
            Y(0, 0) = p[0];
            std::vector<Rational> y0(d - k, 0);
            y0[d - k - 1] = p[0];
            f.planes.push_back(make_plane(d, k, std::move(Y), std::move(y0)));
        }
        f.provenance = "dimension: explicit slice family (m = 1), stage " + std::to_string(stage.k);
        return f;
    }
    if (D != c.stage_dim())
        throw Error(ErrorCode::DimensionError, "template with " + std::to_string(c.rows) + " rows needs a stage in R^" +
                                                   std::to_string(c.stage_dim()));
    const std::size_t coords[] = {0, 1};
    require_distinct(reps, coords);
    for (const auto& p : reps) f.planes.push_back(block_plane(d, k, static_cast<std::size_t>(c.rows), p));
    f.provenance = "dimension: block template with " + std::to_string(c.rows) + " rows, stage " + std::to_string(stage.k);
    return f;
}

Direction vertical_direction(std::span<const Rational> x) {
    Integer l = 1;
    for (const auto& v : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    std::vector<Integer> raw;
    for (const auto& v : x) raw.push_back(Integer(v.get_num() * (l / v.get_den())));
    raw.push_back(l);
    return Direction::canonicalize(raw);
}

SectionList section_list(const Stage& stage, std::span<const Rational> x) {
    SectionList out;
    out.vertical.assign(x.begin(), x.end());
    out.k = stage.k;
    if (stage.pieces.empty()) return out;
    if (x.size() + 1 != stage.pieces.front().dim())
        throw Error(ErrorCode::DimensionError, "vertical must have d-1 coordinates");
    std::vector<Rational> w(x.begin(), x.end());
    w.push_back(1);
    Frame frame = Frame::of(stage.pieces.front());
    const auto beta = frame.coefficients(w);
    for (const auto& p : stage.pieces) out.intervals.push_back(Frame::range_from_coefficients(p, beta));
    std::vector<std::size_t> order(out.intervals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.intervals[a].lo < out.intervals[b].lo; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        if (out.intervals[order[i]].hi >= out.intervals[order[i + 1]].lo) {
            out.overlap = {order[i], order[i + 1]};
            break;
        }
    std::vector<RatInterval> sorted;
    for (auto i : order) sorted.push_back(out.intervals[i]);
    out.intervals = std::move(sorted);
    return out;
}

DualResult dual_hyperplanes(const Construction& c, int k, const std::vector<std::vector<Rational>>& verticals) {
    if (k < 0 || k > c.depth()) throw Error(ErrorCode::InvalidInput, "stage outside the construction");
    const Stage& stage = c.stages[static_cast<std::size_t>(k)];
    DualResult out;
    for (const auto& x : verticals) {
        Direction v = vertical_direction(x);
        if (c.schedule.occurrences(v).empty())
            throw Error(ErrorCode::LineNotInSchedule, "vertical direction " + to_string(v) + " is not a schedule line");
        out.sections.push_back(section_list(stage, x));
    }
    for (const auto& p : representatives(stage)) {
        Hyperplane h;
        h.a.assign(p.begin(), p.end() - 1);
        h.b = p.back();
        out.hyperplanes.push_back(std::move(h));
    }
    return out;
}

} // namespace vblind
