#include "vblind/analysis.hpp"

#include "vblind/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vblind {

namespace {

std::int64_t n_at(std::span<const LedgerRow> ledger, int k) {
    return k >= 1 ? ledger[static_cast<std::size_t>(k - 1)].n : 0;
}

std::int64_t a_at(std::span<const LedgerRow> ledger, int k) {
    return k >= 1 ? ledger[static_cast<std::size_t>(k - 1)].a : 0;
}

Integer count_at(std::span<const LedgerRow> ledger, int k) {
    return k >= 1 ? ledger[static_cast<std::size_t>(k - 1)].count : Integer(1);
}

double m_at(std::span<const LedgerRow> ledger, int k) { return log2_of(count_at(ledger, k)); }

Integer shifted(const Integer& x, std::int64_t e) {
    Integer out;
    if (e >= 0)
        mpz_mul_2exp(out.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpz_fdiv_q_2exp(out.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    return out;
}

Integer ipow(const Integer& x, unsigned long e) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), x.get_mpz_t(), e);
    return out;
}

Rational det(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return d;
}

// Normal to the span of r-1 vectors in R^r (cofactor expansion).
std::vector<Rational> cross(const std::vector<const std::vector<Rational>*>& vs, std::size_t r) {
    std::vector<Rational> nu(r);
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<std::vector<Rational>> minor;
        for (const auto* v : vs) {
            std::vector<Rational> row;
            for (std::size_t c = 0; c < r; ++c)
                if (c != j) row.push_back((*v)[c]);
            minor.push_back(std::move(row));
        }
        Rational m = minor.empty() ? Rational(1) : det(std::move(minor));
        nu[j] = (j % 2 == 0) ? m : Rational(-m);
    }
    return nu;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

Integer count_projection(std::span<const Piece> pieces, std::int64_t q, const Direction& line) {
    std::vector<std::pair<Integer, Integer>> cells;
    cells.reserve(pieces.size());
    const Rational scale = pow2(q);
    std::optional<Frame> frame;
    std::vector<Rational> beta;
    for (const auto& p : pieces) {
        if (!frame || frame->directions().size() != p.slabs.size() ||
            !std::equal(frame->directions().begin(), frame->directions().end(), p.slabs.begin(),
                        [](const DirectionRef& a, const Slab& s) { return *a == *s.direction; })) {
            frame = Frame::of(p);
            beta = frame->coefficients(line);
        }
        RatInterval r = Frame::range_from_coefficients(p, beta);
        cells.emplace_back(floor_of(Rational(r.lo * scale)), ceil_of(Rational(r.hi * scale)) - 1);
    }
    std::sort(cells.begin(), cells.end());
    Integer total = 0;
    bool open = false;
    Integer lo, hi;
    for (const auto& [a, b] : cells) {
        if (b < a) continue;
        if (open && a <= hi + 1) {
            if (b > hi) hi = b;
            continue;
        }
        if (open) total += hi - lo + 1;
        lo = a;
        hi = b;
        open = true;
    }
    if (open) total += hi - lo + 1;
    return total;
}

Integer count_cells(std::span<const Piece> pieces, std::int64_t q, const std::vector<std::vector<Integer>>& basis) {
    const std::size_t r = basis.size();
    const Rational delta = pow2(-q);
    const Rational half_delta = delta / 2;
    std::set<std::vector<Integer>> hit;
    for (const auto& p : pieces) {
        const std::size_t d = p.dim();
        Frame frame = Frame::of(p);
        // Edge directions mapped into R^r, then the zonotope centre and generators.
        std::vector<std::vector<Rational>> dirs(d, std::vector<Rational>(r));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t c = 0; c < d; ++c) dirs[i][j] += Rational(basis[j][c]) * frame.inverse()(c, i);
        std::vector<Rational> centre(r, 0);
        std::vector<std::vector<Rational>> half(d, std::vector<Rational>(r));
        for (std::size_t i = 0; i < d; ++i) {
            Rational lo = p.slabs[i].lo.to_rational(), hi = p.slabs[i].hi.to_rational();
            Rational mid = (lo + hi) / 2, w = (hi - lo) / 2;
            for (std::size_t j = 0; j < r; ++j) {
                centre[j] += mid * dirs[i][j];
                half[i][j] = w * dirs[i][j];
            }
        }
        {
            std::vector<std::vector<Rational>> m;
            for (std::size_t i = 0; i < d; ++i) m.push_back(dirs[i]);
            RatMatrix mm(d, r);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < r; ++j) mm(i, j) = dirs[i][j];
            if (rank(mm) < r) continue; // flat image has no interior
        }
        std::vector<std::vector<Rational>> gens = dirs;
        for (std::size_t j = 0; j < r; ++j) {
            std::vector<Rational> e(r, 0);
            e[j] = 1;
            gens.push_back(std::move(e));
        }
        std::vector<std::vector<std::size_t>> subs;
        std::vector<std::size_t> cur;
        subsets(gens.size(), r - 1, 0, cur, subs);
        std::vector<std::vector<Rational>> normals;
        for (const auto& s : subs) {
            std::vector<const std::vector<Rational>*> vs;
            for (auto i : s) vs.push_back(&gens[i]);
            auto nu = cross(vs, r);
            if (std::any_of(nu.begin(), nu.end(), [](const Rational& x) { return x != 0; })) normals.push_back(std::move(nu));
        }
        std::vector<Rational> zone_support(normals.size(), 0), box_support(normals.size(), 0), nu_centre(normals.size(), 0);
        for (std::size_t t = 0; t < normals.size(); ++t) {
            for (std::size_t i = 0; i < d; ++i) {
                Rational s = 0;
                for (std::size_t j = 0; j < r; ++j) s += normals[t][j] * half[i][j];
                zone_support[t] += abs(s);
            }
            for (std::size_t j = 0; j < r; ++j) {
                box_support[t] += abs(normals[t][j]) * half_delta;
                nu_centre[t] += normals[t][j] * centre[j];
            }
        }
        std::vector<Integer> lo(r), hi(r);
        for (std::size_t j = 0; j < r; ++j) {
            Rational ext = 0;
            for (std::size_t i = 0; i < d; ++i) ext += abs(half[i][j]);
            lo[j] = floor_of(Rational((centre[j] - ext) / delta));
            hi[j] = ceil_of(Rational((centre[j] + ext) / delta)) - 1;
        }
        std::vector<Integer> idx = lo;
        while (true) {
            bool meets = true;
            for (std::size_t t = 0; t < normals.size() && meets; ++t) {
                Rational bc = 0;
                for (std::size_t j = 0; j < r; ++j) bc += normals[t][j] * (Rational(idx[j]) * delta + half_delta);
                if (abs(Rational(nu_centre[t] - bc)) >= zone_support[t] + box_support[t]) meets = false;
            }
            if (meets) hit.insert(idx);
            std::size_t j = 0;
            while (j < r) {
                if (idx[j] < hi[j]) {
                    ++idx[j];
                    break;
                }
                idx[j] = lo[j];
                ++j;
            }
            if (j == r) break;
        }
    }
    return Integer(static_cast<unsigned long>(hit.size()));
}

} // namespace

bool RecursionReport::ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const RecursionRow& r) { return r.ok; });
}

RecursionReport check_mk_recursion(std::span<const LedgerRow> ledger, const LineSchedule& schedule) {
    const int d = static_cast<int>(schedule.d);
    const int K = static_cast<int>(ledger.size());
    if (K < d + 1) throw Error(ErrorCode::InsufficientDepth, "recursion check needs at least d+1 stages");
    RecursionReport rep;
    for (int k = d + 1; k <= K; ++k) {
        RecursionRow row;
        row.k = k;
        row.M = schedule.angle(k).alpha + 1;
        const std::int64_t bits = n_at(ledger, k) - a_at(ledger, k) - n_at(ledger, k - d);
        const Integer& prev = count_at(ledger, k - 1);
        const Integer& cur = count_at(ledger, k);
        row.alpha_tilde = static_cast<double>(bits) + m_at(ledger, k - 1) - m_at(ledger, k);
        // prev 2^{bits-M} <= cur <= prev 2^{bits+M}
        const Rational lo = Rational(prev) * pow2(bits - row.M);
        const Rational hi = Rational(prev) * pow2(bits + row.M);
        row.ok = lo <= Rational(cur) && Rational(cur) <= hi;
        const double nk = static_cast<double>(n_at(ledger, k));
        row.delta = (m_at(ledger, k - 1) - static_cast<double>(n_at(ledger, k - d)) - row.alpha_tilde) / nk;
        if (k + d <= K) {
            double phi = -m_at(ledger, k + d) + d - static_cast<double>(a_at(ledger, k));
            for (int j = 1; j <= d; ++j) phi += static_cast<double>(n_at(ledger, k + j) - a_at(ledger, k + j));
            row.eps = phi / nk;
        }
        if (k + d - 1 <= K) {
            double phi = -m_at(ledger, k + d - 1) + d - static_cast<double>(a_at(ledger, k));
            for (int j = 1; j <= d - 1; ++j) phi += static_cast<double>(n_at(ledger, k + j) - a_at(ledger, k + j));
            row.eps_prime = phi / nk + 1;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

WkValue compute_wk(const Piece& parent, const Direction& line) {
    if (parent.slabs.empty()) throw Error(ErrorCode::DegeneratePiece, "piece has no slabs");
    if (line.dim() != parent.dim()) throw Error(ErrorCode::DimensionError, "line has wrong dimension");
    if (dot(line, *parent.slabs[0].direction) == 0)
        throw Error(ErrorCode::OrthogonalLines, "line is orthogonal to the oldest slab");
    const std::vector<Rational> beta = Frame::of(parent).coefficients(line);
    const std::size_t d = parent.dim();
    std::vector<Rational> step(d);
    for (std::size_t i = 0; i < d; ++i)
        step[i] = beta[i] * (parent.slabs[i].hi.to_rational() - parent.slabs[i].lo.to_rational());
    // Opposite ends differ by a full step in slab 0; the rest move by -1, 0 or +1 steps.
    std::optional<Rational> best;
    std::size_t combos = 1;
    for (std::size_t i = 1; i < d; ++i) combos *= 3;
    for (std::size_t code = 0; code < combos; ++code) {
        Rational v = step[0];
        std::size_t c = code;
        for (std::size_t i = 1; i < d; ++i, c /= 3) {
            if (c % 3 == 1) v += step[i];
            if (c % 3 == 2) v -= step[i];
        }
        v = abs(v);
        if (!best || v < *best) best = v;
    }
    WkValue out;
    out.scaled = *best;
    out.metric = out.scaled.get_d() / std::sqrt(line.norm_sq().get_d());
    return out;
}

bool wk_sandwich(const Rational& scaled, std::int64_t n_kd, int alpha) {
    return pow2(-n_kd - alpha) <= scaled && scaled <= pow2(-n_kd);
}

Integer box_count(std::span<const Piece> pieces, std::int64_t q, const BoxTarget& target) {
    if (q < 0) throw Error(ErrorCode::InvalidInput, "q must be non-negative");
    if (pieces.empty()) return 0;
    const std::size_t d = pieces.front().dim();
    if (const auto* pr = std::get_if<Projection>(&target)) {
        if (pr->line.dim() != d) throw Error(ErrorCode::DimensionError, "line has wrong dimension");
        return count_projection(pieces, q, pr->line);
    }
    std::vector<std::vector<Integer>> basis;
    if (std::holds_alternative<Ambient>(target)) {
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<Integer> e(d, 0);
            e[j] = 1;
            basis.push_back(std::move(e));
        }
    } else {
        for (const auto& w : std::get<Subspace>(target).basis) {
            if (w.dim() != d) throw Error(ErrorCode::DimensionError, "basis vector has wrong dimension");
            basis.push_back(w.components());
        }
        if (basis.empty()) throw Error(ErrorCode::InvalidInput, "empty subspace basis");
    }
    return count_cells(pieces, q, basis);
}

double dim_slope(std::span<const SeriesPoint> series) {
    std::set<std::int64_t> qs;
    for (const auto& p : series) {
        if (p.count < 1) throw Error(ErrorCode::SlopeUndefined, "box count below one");
        qs.insert(p.q);
    }
    if (qs.size() < 2) throw Error(ErrorCode::SlopeUndefined, "need two distinct q values");
    const double n = static_cast<double>(series.size());
    double sx = 0, sy = 0;
    for (const auto& p : series) {
        sx += static_cast<double>(p.q);
        sy += log2_of(p.count);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& p : series) {
        const double dx = static_cast<double>(p.q) - mx;
        sxx += dx * dx;
        sxy += dx * (log2_of(p.count) - my);
    }
    return sxy / sxx;
}

std::vector<MeasureTerm> projection_measure_series(std::span<const LedgerRow> ledger, const LineSchedule& schedule,
                                                   const Direction& line, const Rational& t) {
    std::vector<MeasureTerm> out;
    for (const auto& row : ledger) {
        if (*schedule.at(row.k).line != line) continue;
        MeasureTerm term;
        term.k = row.k;
        term.n = row.n;
        term.count = row.count;
        term.log2_value = log2_of(row.count) - static_cast<double>(row.n) * t.get_d();
        out.push_back(std::move(term));
    }
    if (out.size() < 2) throw Error(ErrorCode::LineNotInSchedule, "line " + to_string(line) + " occurs fewer than twice");
    return out;
}

bool strictly_decreasing(std::span<const MeasureTerm> series, const Rational& t) {
    const Integer& P = t.get_num();
    const unsigned long Q = t.get_den().get_ui();
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        // c_i 2^{-n_i t} > c_j 2^{-n_j t}  <=>  c_i^Q 2^{n_j P} > c_j^Q 2^{n_i P}
        const Integer e_i = P * Integer(static_cast<long>(series[i + 1].n));
        const Integer e_j = P * Integer(static_cast<long>(series[i].n));
        const Integer lhs = shifted(ipow(series[i].count, Q), e_i.get_si());
        const Integer rhs = shifted(ipow(series[i + 1].count, Q), e_j.get_si());
        if (!(lhs > rhs)) return false;
    }
    return true;
}

bool below_pow2(const MeasureTerm& term, const Rational& t, std::int64_t e) {
    // c^Q < 2^{eQ + nP}
    const long Q = t.get_den().get_si();
    const std::int64_t rhs = e * Q + term.n * t.get_num().get_si();
    const Integer lhs = ipow(term.count, static_cast<unsigned long>(Q));
    if (rhs < 0) return false;
    return lhs < shifted(Integer(1), rhs);
}

std::string to_string(BallCase c) { return c == BallCase::Case1 ? "case1" : "case2"; }

QRange case_range(const Construction& c, int k, BallCase which) {
    if (k < 1 || k > c.depth()) throw Error(ErrorCode::CaseRangeError, "stage outside the construction");
    const Stage& s = c.stages[static_cast<std::size_t>(k)];
    if (which == BallCase::Case2) return {s.n - s.a + 1, s.n};
    if (k + 1 > c.depth()) return {1, 0};
    const Stage& next = c.stages[static_cast<std::size_t>(k + 1)];
    return {s.n + 1, next.n - next.a};
}

BallQuery make_ball(const Construction& c, int k, Point center, std::int64_t q) {
    for (BallCase which : {BallCase::Case1, BallCase::Case2}) {
        QRange r = case_range(c, k, which);
        if (q >= r.lo && q <= r.hi) return BallQuery{std::move(center), q, which};
    }
    throw Error(ErrorCode::CaseRangeError, "q = " + std::to_string(q) + " outside both case ranges of stage " +
                                               std::to_string(k));
}

Rational squared_distance(const Piece& p, std::span<const Rational> x) {
    if (contains_point(p, x)) return 0;
    const std::size_t d = p.dim();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < d; ++i) combos *= 3;
    std::optional<Rational> best;
    std::vector<Rational> ux(d);
    for (std::size_t i = 0; i < d; ++i) ux[i] = scaled_projection(*p.slabs[i].direction, x);
    for (std::size_t code = 1; code < combos; ++code) {
        // digit 0: free, 1: at lo, 2: at hi
        std::vector<std::size_t> fixed;
        std::vector<Rational> target;
        std::size_t c = code;
        std::vector<int> digit(d);
        for (std::size_t i = 0; i < d; ++i, c /= 3) {
            digit[i] = static_cast<int>(c % 3);
            if (digit[i] == 0) continue;
            fixed.push_back(i);
            target.push_back((digit[i] == 1 ? p.slabs[i].lo : p.slabs[i].hi).to_rational() - ux[i]);
        }
        const std::size_t s = fixed.size();
        RatMatrix gram(s, s);
        for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = 0; b < s; ++b)
                gram(a, b) = Rational(dot(*p.slabs[fixed[a]].direction, *p.slabs[fixed[b]].direction));
        auto lambda = solve(gram, target);
        if (!lambda) continue;
        // Foot of the perpendicular is x + sum lambda_a u_a; free slabs must contain it.
        bool inside = true;
        for (std::size_t i = 0; i < d && inside; ++i) {
            if (digit[i] != 0) continue;
            Rational v = ux[i];
            for (std::size_t a = 0; a < s; ++a)
                v += (*lambda)[a] * Rational(dot(*p.slabs[i].direction, *p.slabs[fixed[a]].direction));
            inside = p.slabs[i].lo.to_rational() <= v && v <= p.slabs[i].hi.to_rational();
        }
        if (!inside) continue;
        Rational dist = 0;
        for (std::size_t a = 0; a < s; ++a) dist += (*lambda)[a] * target[a];
        if (!best || dist < *best) best = dist;
    }
    return *best;
}

MassBounds mass_ball_bounds(const Stage& stage, const BallQuery& ball) {
    const Rational r2 = pow2(-2 * ball.q - 2);
    const double r = std::ldexp(1.0, static_cast<int>(-ball.q - 1));
    const std::size_t d = ball.center.size();
    std::vector<double> cd(d);
    for (std::size_t i = 0; i < d; ++i) cd[i] = ball.center[i].get_d();
    MassBounds out{0, 0};
    if (stage.pieces.empty()) return out;
    Frame frame = Frame::of(stage.pieces.front());
    for (const auto& p : stage.pieces) {
        // Cheap rejection from a padded floating-point bounding box.
        bool far = false;
        for (std::size_t j = 0; j < d && !far; ++j) {
            double lo = 0, hi = 0;
            for (std::size_t i = 0; i < d; ++i) {
                const double e = frame.inverse()(j, i).get_d();
                const double a = e * p.slabs[i].lo.to_double(), b = e * p.slabs[i].hi.to_double();
                lo += std::min(a, b);
                hi += std::max(a, b);
            }
            const double pad = 1e-9;
            if (cd[j] < lo - r - pad || cd[j] > hi + r + pad) far = true;
        }
        if (far) continue;
        if (squared_distance(p, ball.center) > r2) continue;
        out.upper += p.mass;
        bool all_in = true;
        for (unsigned mask = 0; mask < (1u << d) && all_in; ++mask) {
            Point v = frame.vertex(p, mask);
            Rational s = 0;
            for (std::size_t i = 0; i < d; ++i) {
                Rational diff = v[i] - ball.center[i];
                s += diff * diff;
            }
            all_in = s <= r2;
        }
        if (all_in) out.lower += p.mass;
    }
    return out;
}

bool ball_bound_holds(const Rational& mass, std::int64_t q, const Rational& s) {
    if (mass <= 0) return true;
    // (mass q^2)^Q <= 2^{-q P}
    const unsigned long Q = s.get_den().get_ui();
    const Rational lhs_base = mass * Rational(q) * Rational(q);
    Integer num = ipow(lhs_base.get_num(), Q), den = ipow(lhs_base.get_den(), Q);
    const std::int64_t e = -q * s.get_num().get_si();
    // num / den <= 2^e
    return e >= 0 ? num <= shifted(den, e) : shifted(num, -e) <= den;
}

Point random_point(const Stage& stage, std::mt19937_64& rng) {
    if (stage.pieces.empty()) throw Error(ErrorCode::EmptyStage, "stage has no pieces");
    const Piece& p = stage.pieces[static_cast<std::size_t>(rng() % stage.pieces.size())];
    std::vector<Rational> coords(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const Rational lo = p.slabs[i].lo.to_rational(), hi = p.slabs[i].hi.to_rational();
        const Rational u(Integer(static_cast<unsigned long>(rng() >> 32)) * 2 + 1, Integer(1) << 33);
        coords[i] = lo + (hi - lo) * u;
    }
    return Frame::of(p).point(coords);
}

EnergyReport energy(const Stage& stage, double s) {
    if (!(s > 0)) throw Error(ErrorCode::InvalidExponent, "energy exponent must be positive");
    if (stage.pieces.empty()) throw Error(ErrorCode::EmptyStage, "stage has no pieces");
    EnergyReport rep;
    rep.s = s;
    const std::size_t N = stage.pieces.size();
    const std::size_t d = stage.pieces.front().dim();
    Frame frame = Frame::of(stage.pieces.front());
    std::vector<Point> exact(N);
    std::vector<double> centre(N * d), mass(N);
    rep.diagonal_mass_sq = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const Piece& p = stage.pieces[i];
        std::vector<Rational> mid(d);
        for (std::size_t j = 0; j < d; ++j) mid[j] = (p.slabs[j].lo.to_rational() + p.slabs[j].hi.to_rational()) / 2;
        exact[i] = frame.point(mid);
        for (std::size_t j = 0; j < d; ++j) centre[i * d + j] = exact[i][j].get_d();
        mass[i] = p.mass.get_d();
        rep.diagonal_mass_sq += p.mass * p.mass;
    }
    rep.diagonal_count = static_cast<std::int64_t>(N);
    double total = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double row = 0;
        for (std::size_t j = i + 1; j < N; ++j) {
            double dist2 = 0, scale = 0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = centre[i * d + c] - centre[j * d + c];
                dist2 += diff * diff;
                scale = std::max(scale, std::abs(centre[i * d + c]));
            }
            if (dist2 < 1e-18 * (scale * scale + 1)) {
                // Cancellation: redo the difference exactly.
                Rational e = 0;
                for (std::size_t c = 0; c < d; ++c) {
                    Rational diff = exact[i][c] - exact[j][c];
                    e += diff * diff;
                }
                const double l2 = log2_of(e);
                row += mass[j] * std::exp2(-s * l2 / 2);
                continue;
            }
            row += mass[j] * std::pow(dist2, -s / 2);
        }
        total += mass[i] * row;
    }
    rep.cross = 2 * total;
    return rep;
}

} // namespace vblind
