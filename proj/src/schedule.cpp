#include "vblind/schedule.hpp"

#include "vblind/error.hpp"
#include "vblind/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vblind {

AngleData angle_alpha(const Direction& u, const Direction& v) {
    Integer uv = dot(u, v);
    if (uv == 0) throw Error(ErrorCode::OrthogonalLines, to_string(u) + " and " + to_string(v));
    AngleData out;
    out.cos_sq = make_rational(uv * uv, u.norm_sq() * v.norm_sq());
    // smallest alpha with 4^alpha * cos_sq >= 1
    Integer num = out.cos_sq.get_num();
    const Integer& den = out.cos_sq.get_den();
    while (num < den) {
        num *= 4;
        ++out.alpha;
    }
    out.M = out.alpha + 1;
    return out;
}

std::string to_string(Option o) {
    switch (o) {
    case Option::Capacity: return "capacity";
    case Option::MeasureZero: return "measure_zero";
    case Option::Unconstrained: return "unconstrained";
    }
    return "unconstrained";
}

Option parse_option(const std::string& s) {
    if (s == "capacity") return Option::Capacity;
    if (s == "measure_zero") return Option::MeasureZero;
    if (s == "unconstrained") return Option::Unconstrained;
    throw Error(ErrorCode::ConfigError, "unknown option '" + s + "'");
}

Direction LineSchedule::dropped(int k) const {
    if (k <= static_cast<int>(d)) {
        std::vector<Integer> e(d, 0);
        e[static_cast<std::size_t>(axis_order.at(static_cast<std::size_t>(k - 1)))] = 1;
        return Direction::canonicalize(e);
    }
    return *at(k - static_cast<int>(d)).line;
}

std::vector<int> LineSchedule::occurrences(const Direction& line) const {
    std::vector<int> ks;
    for (int k = 1; k <= horizon; ++k)
        if (*at(k).line == line) ks.push_back(k);
    return ks;
}

namespace {

Integer det_of(const std::vector<const Direction*>& rows) {
    const std::size_t d = rows.size();
    IntMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = (*rows[r])[c];
    return determinant(std::move(m));
}

std::size_t rank_of(const std::vector<const Direction*>& rows, std::size_t d) {
    RatMatrix m(rows.size(), d);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = Rational((*rows[r])[c]);
    return rank(m);
}

Direction axis(std::size_t d, std::size_t i) {
    std::vector<Integer> e(d, 0);
    e[i] = 1;
    return Direction::canonicalize(e);
}

// Small integer vectors in canonical form, ordered by max |component| then
// lexicographically.
std::vector<Direction> small_vectors(std::size_t d, int bound) {
    std::vector<Direction> out;
    for (int r = 1; r <= bound; ++r) {
        std::vector<int> v(d, -r);
        while (true) {
            int mx = 0;
            for (int x : v) mx = std::max(mx, std::abs(x));
            int first = 0;
            for (int x : v) {
                if (x != 0) {
                    first = x;
                    break;
                }
            }
            std::vector<Integer> iv(v.begin(), v.end());
            bool primitive = std::accumulate(v.begin(), v.end(), 0, [](int g, int x) { return std::gcd(g, x); }) == 1;
            if (mx == r && first > 0 && primitive) out.push_back(Direction::canonicalize(iv));
            std::size_t i = d;
            while (i > 0) {
                --i;
                if (v[i] < r) {
                    ++v[i];
                    break;
                }
                v[i] = -r;
                if (i == 0) {
                    i = d + 1;
                    break;
                }
            }
            if (i == d + 1) break;
        }
    }
    auto nnz = [](const Direction& v) {
        return std::count_if(v.components().begin(), v.components().end(), [](const Integer& x) { return x != 0; });
    };
    std::stable_sort(out.begin(), out.end(), [&](const Direction& a, const Direction& b) {
        auto mx = [](const Direction& v) {
            Integer m = 0;
            for (const auto& x : v.components()) m = std::max(m, Integer(abs(x)));
            return m;
        };
        Integer ma = mx(a), mb = mx(b);
        if (ma != mb) return ma < mb;
        return nnz(a) < nnz(b);
    });
    return out;
}

// b with sum b_i rows_i = v.
std::optional<std::vector<Rational>> coefficients_in(const std::vector<const Direction*>& rows, const Direction& v) {
    const std::size_t d = v.dim();
    RatMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(c, r) = Rational((*rows[r])[c]);
    std::vector<Rational> rhs(v.components().begin(), v.components().end());
    return solve(m, rhs);
}

std::vector<Direction> hyperplane_basis(const Direction& normal) {
    const std::size_t d = normal.dim();
    std::size_t p = 0;
    while (normal[p] == 0) ++p;
    std::vector<Direction> basis;
    for (std::size_t j = 0; j < d; ++j) {
        if (j == p) continue;
        std::vector<Integer> v(d, 0);
        v[j] = normal[p];
        v[p] = -normal[j];
        basis.push_back(Direction::canonicalize(v));
    }
    return basis;
}

// Fills entries, axis order and angles for a helper choice; returns a reason
// on rejection.
std::optional<std::string> assemble(LineSchedule& s) {
    const std::size_t d = s.d;
    const auto& H = s.helpers.hyperplane;
    if (H.size() != d - 1) return "hyperplane needs d-1 spanning vectors";
    std::vector<const Direction*> hrows;
    for (const auto& h : H) {
        if (h.dim() != d) return "helper dimension mismatch";
        hrows.push_back(&h);
    }
    if (rank_of(hrows, d) != d - 1) return "helper vectors do not span a hyperplane";
    for (const auto& l : s.user_lines) {
        auto rows = hrows;
        rows.push_back(&l);
        if (rank_of(rows, d) != d) return "H contains user line " + to_string(l);
        if (dot(l, s.helpers.transversal) == 0) return "e is orthogonal to user line " + to_string(l);
    }
    {
        auto rows = hrows;
        rows.push_back(&s.helpers.transversal);
        if (rank_of(rows, d) != d) return "e lies in H";
    }

    std::vector<DirectionRef> hrefs;
    for (const auto& h : H) hrefs.push_back(share(h));
    auto eref = share(s.helpers.transversal);
    std::vector<DirectionRef> urefs;
    for (const auto& l : s.user_lines) urefs.push_back(share(l));

    s.entries.clear();
    const int period = static_cast<int>(2 * d);
    for (int k = 1; k <= s.horizon; ++k) {
        int pos = (k - 1) % period;
        int li = ((k - 1) / period) % static_cast<int>(s.user_lines.size());
        ScheduleEntry e;
        if (pos == 0) {
            e.line = urefs[static_cast<std::size_t>(li)];
            e.user_index = li;
        } else if (pos == static_cast<int>(d)) {
            e.line = eref;
            e.helper_index = 0;
        } else {
            int hi = pos < static_cast<int>(d) ? pos : pos - static_cast<int>(d);
            e.line = hrefs[static_cast<std::size_t>(hi - 1)];
            e.helper_index = hi;
        }
        s.entries.push_back(e);
    }

    // Greedy axis order for the first d stages.
    std::vector<int> remaining(d);
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<Direction> axes;
    for (std::size_t i = 0; i < d; ++i) axes.push_back(axis(d, i));
    s.axis_order.clear();
    for (int k = 1; k <= static_cast<int>(d) && k <= s.horizon; ++k) {
        const Direction& lk = *s.at(k).line;
        bool found = false;
        for (std::size_t r = 0; r < remaining.size(); ++r) {
            int ax = remaining[r];
            if (lk[static_cast<std::size_t>(ax)] == 0) continue;
            std::vector<const Direction*> rows;
            for (int other : remaining)
                if (other != ax) rows.push_back(&axes[static_cast<std::size_t>(other)]);
            const std::size_t n_axes = rows.size();
            for (int j = 1; j <= k; ++j) rows.push_back(s.at(j).line.get());
            auto b = coefficients_in(rows, axes[static_cast<std::size_t>(ax)]);
            if (!b) continue;
            // Retained axis slabs have width 1; a full crossing needs their
            // weighted widths to leave room inside the dropped unit slab.
            Rational spill = 0;
            for (std::size_t i = 0; i < n_axes; ++i) spill += abs((*b)[i]);
            if (spill >= 1) continue;
            s.axis_order.push_back(ax);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(r));
            found = true;
            break;
        }
        if (!found) return "no admissible axis to drop at stage " + std::to_string(k);
    }
    for (int ax : remaining) s.axis_order.push_back(ax);

    s.angles.clear();
    s.drop_coefficients.clear();
    for (int k = 1; k <= s.horizon; ++k) {
        Direction dropped = s.dropped(k);
        if (dot(dropped, *s.at(k).line) == 0) return "lag-d orthogonality at stage " + std::to_string(k);
        s.angles.push_back(angle_alpha(dropped, *s.at(k).line));
        std::vector<const Direction*> rows;
        for (int i = 0; i + 1 < static_cast<int>(d); ++i) {
            int stage = k - static_cast<int>(d) + 1 + i;
            rows.push_back(stage >= 1 ? s.at(stage).line.get()
                                      : &axes[static_cast<std::size_t>(s.axis_order[static_cast<std::size_t>(stage + static_cast<int>(d) - 1)])]);
        }
        rows.push_back(s.at(k).line.get());
        auto b = coefficients_in(rows, dropped);
        if (!b) return "dependent slab directions at stage " + std::to_string(k);
        s.drop_coefficients.push_back(std::move(*b));
    }
    return check_schedule(s);
}

int cost_of(const LineSchedule& s) {
    int c = 0;
    for (const auto& a : s.angles) c += a.alpha;
    return c;
}

} // namespace

std::optional<std::string> check_schedule(const LineSchedule& s) {
    const int d = static_cast<int>(s.d);
    for (int k = 1; k + d - 1 <= s.horizon; ++k) {
        std::vector<const Direction*> rows;
        for (int j = k; j < k + d; ++j) rows.push_back(s.at(j).line.get());
        if (det_of(rows) == 0) return "dependent window at stage " + std::to_string(k);
    }
    for (int k = 1; k + d <= s.horizon; ++k)
        if (dot(*s.at(k).line, *s.at(k + d).line) == 0) return "orthogonal lag-d pair at stage " + std::to_string(k);
    return std::nullopt;
}

LineSchedule build_schedule(const std::vector<Direction>& user_lines, std::size_t d, int horizon,
                            const ScheduleOptions& options) {
    if (d < 2) throw Error(ErrorCode::DimensionError, "d must be at least 2");
    if (user_lines.empty()) throw Error(ErrorCode::InvalidInput, "no user lines");
    for (const auto& l : user_lines) {
        if (l.dim() != d) throw Error(ErrorCode::DimensionError, "user line " + to_string(l) + " has wrong dimension");
        Direction::canonicalize(l.components()); // rejects zero vectors
    }
    if (horizon < static_cast<int>(2 * d * user_lines.size()))
        throw Error(ErrorCode::InvalidInput, "horizon shorter than one schedule cycle");

    LineSchedule s;
    s.d = d;
    s.horizon = horizon;
    s.user_lines = user_lines;

    for (const auto& cand : options.candidates) {
        s.helpers = cand;
        if (!assemble(s)) return s;
    }

    // e candidates ranked by the lag-d angle cost they induce against the user lines.
    auto vecs = user_lines;
    for (auto& v : small_vectors(d, options.search_bound))
        if (std::find(vecs.begin(), vecs.end(), v) == vecs.end()) vecs.push_back(std::move(v));
    std::vector<std::pair<int, std::size_t>> ranked;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        const auto& e = vecs[i];
        bool ok = true;
        int c = 0;
        for (const auto& l : user_lines) {
            if (dot(l, e) == 0) {
                ok = false;
                break;
            }
            c += 2 * angle_alpha(l, e).alpha;
        }
        if (ok) ranked.emplace_back(c, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.first < b.first; });

    std::optional<LineSchedule> best;
    int best_cost = 0;
    int best_rank = -1;
    for (const auto& [rc, ei] : ranked) {
        if (best && rc > best_rank) break;
        for (const auto& normal : vecs) {
            if (dot(normal, vecs[ei]) == 0) continue;
            bool hits_user = false;
            for (const auto& l : user_lines) hits_user |= dot(l, normal) == 0;
            if (hits_user) continue;
            s.helpers = HelperChoice{hyperplane_basis(normal), vecs[ei]};
            if (assemble(s)) continue;
            int c = cost_of(s);
            if (!best || c < best_cost) {
                best = s;
                best_cost = c;
                best_rank = rc;
            }
            break;
        }
    }
    if (!best) throw Error(ErrorCode::ScheduleSearchExhausted, "no helper lines within search bound");
    return *best;
}

int ramp_of(const LineSchedule& s, const PlanConfig& c) {
    return c.ramp >= 0 ? c.ramp : static_cast<int>(s.d) + 2;
}

namespace {

struct Bounds {
    Integer lo; // inclusive
    Integer hi; // inclusive
};

std::int64_t to_i64(const Integer& x) {
    if (!x.fits_slong_p()) throw Error(ErrorCode::PlanInfeasible, "parameter out of range");
    return x.get_si();
}

Integer bit_length(const Integer& x) {
    return Integer(static_cast<unsigned long>(mpz_sizeinbase(x.get_mpz_t(), 2)));
}

// Hard bounds on a for a given n; the interval may be empty.
Bounds a_bounds(const LineSchedule& s, const Rational& t, Option option, int k, const LedgerState& st,
                const PlanConfig& cfg, std::int64_t n) {
    const std::int64_t n_kd = st.n_prev.front();
    const std::int64_t n_k1 = st.n_prev.back();
    const int alpha = s.angle(k).alpha;
    Bounds b;
    b.lo = std::max({Integer(k + 1), Integer(static_cast<long>(st.a_prev + 1)), Integer(bit_length(st.count_prev) + 1)});
    b.hi = Integer(static_cast<long>(n - n_kd - alpha - 1));
    if (cfg.case_partition) b.hi = std::min(b.hi, Integer(static_cast<long>(n - n_k1)));
    const Rational rn(static_cast<long>(n));
    const Rational one_t = 1 - t;
    const Rational kk(k);
    const bool ramp = k <= ramp_of(s, cfg);
    {
        // Room for at least one child per parent: 2^{a-n} + 2^{-n} <= G.
        const auto& beta = s.drop_coefficients.at(static_cast<std::size_t>(k - 1));
        const std::size_t d = s.d;
        Rational room = pow2(-n_kd);
        for (std::size_t i = 0; i + 1 < d; ++i) room -= abs(beta[i]) * pow2(-st.n_prev[i + 1]);
        if (room <= 0) {
            b.hi = b.lo - 1;
            return b;
        }
        Rational G = room / abs(beta.back());
        Integer X = floor_of(Rational(G * pow2(n)));
        if (X < 2) {
            b.hi = b.lo - 1;
            return b;
        }
        Integer xm = X - 1;
        b.hi = std::min(b.hi, Integer(bit_length(xm) - 1));
    }
    if (ramp && !cfg.ramp_ratio) return b;
    if (option == Option::Capacity) {
        Rational cap = one_t - 1 / kk;
        if (ramp) cap = std::max(cap, Rational(one_t * kk / (kk + 2)));
        b.hi = std::min(b.hi, floor_of(Rational(rn * cap)));
    } else if (option == Option::MeasureZero) {
        Rational floor_ratio = ramp ? Rational(one_t * kk / (kk + 2)) : Rational(one_t + 1 / kk);
        b.lo = std::max(b.lo, ceil_of(Rational(rn * floor_ratio)));
    }
    return b;
}

} // namespace

void validate_parameters(const LineSchedule& s, const Rational& t, Option option, int k, const LedgerState& st,
                         const PlanConfig& cfg, std::int64_t n, std::int64_t a) {
    if (k < 1 || k > s.horizon) throw Error(ErrorCode::PlanInfeasible, "stage outside the schedule horizon");
    if (st.n_prev.size() != s.d) throw Error(ErrorCode::PlanInfeasible, "ledger state needs d previous n values");
    const std::int64_t n_k1 = st.n_prev.back();
    if (n <= n_k1) throw Error(ErrorCode::PlanInfeasible, "n_k must exceed n_{k-1}");
    if (Rational(static_cast<long>(n)) < cfg.growth * Rational(static_cast<long>(n_k1)))
        throw Error(ErrorCode::PlanInfeasible, "n_k below growth factor times n_{k-1}");
    if (a <= st.a_prev) throw Error(ErrorCode::PlanInfeasible, "a_k must exceed a_{k-1}");
    Bounds b = a_bounds(s, t, option, k, st, cfg, n);
    if (Integer(static_cast<long>(a)) < b.lo || Integer(static_cast<long>(a)) > b.hi)
        throw Error(ErrorCode::PlanInfeasible, "a_k = " + std::to_string(a) + " outside admissible range at stage " +
                                                   std::to_string(k));
}

StagePlan plan_parameters(const LineSchedule& s, const Rational& t, Option option, int k, const LedgerState& st,
                          const PlanConfig& cfg) {
    if (k < 1 || k > s.horizon) throw Error(ErrorCode::PlanInfeasible, "stage outside the schedule horizon");
    if (st.n_prev.size() != s.d) throw Error(ErrorCode::PlanInfeasible, "ledger state needs d previous n values");
    const std::int64_t n_k1 = st.n_prev.back();
    const std::int64_t n_kd = st.n_prev.front();
    std::int64_t n_lo = std::max<std::int64_t>(n_k1 + 1, 2);
    n_lo = std::max(n_lo, to_i64(ceil_of(cfg.growth * Rational(static_cast<long>(n_k1)))));
    n_lo = std::max(n_lo, cfg.n_floor);

    StagePlan plan;
    plan.k = k;

    const bool user_stage = [&] {
        for (const auto& l : s.user_lines)
            if (*s.at(k).line == l) return true;
        return false;
    }();
    if (cfg.steer && user_stage && k > ramp_of(s, cfg)) {
        const double m_prev = st.m_prev();
        const double td = t.get_d();
        const double beta = cfg.band.get_d();
        double reserve = 1.0;
        for (int j = k + 1; j <= s.horizon; ++j) reserve += s.angle(j).alpha + 1;
        const double budget = cfg.budget_bits - reserve;
        const std::int64_t n_hi = n_lo * 8 + 64;
        for (std::int64_t n = n_lo; n <= n_hi; ++n) {
            Bounds b = a_bounds(s, t, option, k, st, cfg, n);
            if (b.lo > b.hi) continue;
            // predicted m = m_prev + (n - a) - n_{k-d}
            const double base = m_prev + static_cast<double>(n - n_kd);
            const double dn = static_cast<double>(n);
            double lo = std::max({b.lo.get_d(), std::ceil(base - dn * (td + beta)), std::ceil(base - budget)});
            double hi = std::min(b.hi.get_d(), std::floor(base - dn * (td - beta)));
            if (lo > hi) continue;
            double target = std::round(base - dn * td);
            plan.n = n;
            plan.a = static_cast<std::int64_t>(std::clamp(target, lo, hi));
            plan.steered = true;
            return plan;
        }
    }

    // Smallest feasible n, then the largest a (fewest children per parent).
    for (std::int64_t n = n_lo; n < n_lo + (std::int64_t{1} << 24); ++n) {
        Bounds b = a_bounds(s, t, option, k, st, cfg, n);
        if (b.lo <= b.hi) {
            plan.n = n;
            plan.a = to_i64(b.hi);
            return plan;
        }
    }
    throw Error(ErrorCode::PlanInfeasible, "no admissible (n, a) at stage " + std::to_string(k));
}

} // namespace vblind
