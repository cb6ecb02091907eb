#include "vblind/construction.hpp"

#include "vblind/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vblind {

DyInterval interval(const Integer& h, std::int64_t j, std::int64_t n, std::int64_t a) {
    if (!(n > a && a >= 1 && j >= 1)) throw Error(ErrorCode::InvalidInput, "interval needs n > a >= 1 and j >= 1");
    // lo = (h 2^{a-1} + j) 2^{1-n}
    Integer key = h;
    mpz_mul_2exp(key.get_mpz_t(), key.get_mpz_t(), static_cast<mp_bitcnt_t>(a - 1));
    key += static_cast<long>(j);
    Dyadic lo(key, 1 - n);
    return {lo, lo + Dyadic(Integer(1), -n)};
}

Stage initial_stage(const LineSchedule& schedule) {
    const std::size_t d = schedule.d;
    Stage s;
    Piece cube;
    for (int ax : schedule.axis_order) {
        std::vector<Integer> e(d, 0);
        e[static_cast<std::size_t>(ax)] = 1;
        cube.slabs.push_back({share(Direction::canonicalize(e)), Dyadic::from_int(0), Dyadic::from_int(1)});
    }
    cube.mass = 1;
    cube.global_id = 0;
    s.pieces.push_back(std::move(cube));
    s.id_base = 0;
    return s;
}

std::optional<Piece> full_crossing_child(const Piece& parent, const DirectionRef& new_line, const DyInterval& iv,
                                         std::size_t drop_index) {
    if (drop_index >= parent.dim()) throw Error(ErrorCode::InvalidInput, "drop index out of range");
    if (!(iv.lo < iv.hi)) throw Error(ErrorCode::InvalidInput, "empty interval");
    Piece cand;
    for (std::size_t i = 0; i < parent.dim(); ++i)
        if (i != drop_index) cand.slabs.push_back(parent.slabs[i]);
    cand.slabs.push_back({new_line, iv.lo, iv.hi});
    const Slab& dropped = parent.slabs[drop_index];
    RatInterval r = projection_range(cand, *dropped.direction);
    if (r.lo < dropped.lo.to_rational() || r.hi > dropped.hi.to_rational()) return std::nullopt;
    cand.stage = parent.stage + 1;
    cand.parent_id = parent.global_id;
    return cand;
}

namespace {

struct ChildKey {
    Integer key; // h 2^{a-1} + j, proportional to the interval's lo
    Integer h;
    std::int64_t parent_pos;
};

} // namespace

Stage build_stage(const Stage& prev, const DirectionRef& line, std::int64_t n, std::int64_t a, std::int64_t id_base,
                  const BuildLimits& limits) {
    if (prev.pieces.empty()) throw Error(ErrorCode::EmptyStage, "previous stage is empty");
    if (!(n > a && a >= 1)) throw Error(ErrorCode::InvalidInput, "need n > a >= 1");
    const Piece& first = prev.pieces.front();
    const std::size_t d = first.dim();

    std::vector<DirectionRef> cand_dirs;
    for (std::size_t i = 1; i < d; ++i) cand_dirs.push_back(first.slabs[i].direction);
    cand_dirs.push_back(line);
    Frame frame(cand_dirs); // throws DegeneratePiece
    const auto beta = frame.coefficients(*first.slabs[0].direction);
    const Rational& b_new = beta.back();

    const Rational w = pow2(-n);
    const Rational S = pow2(a - n);

    // Admissible h range per parent from the closed-form containment test.
    std::vector<std::pair<Integer, Integer>> hrange(prev.pieces.size());
    std::uint64_t total = 0;
    for (std::size_t pos = 0; pos < prev.pieces.size(); ++pos) {
        const Piece& p = prev.pieces[pos];
        Rational r_lo = 0, r_hi = 0;
        for (std::size_t i = 1; i < d; ++i) {
            const Rational& b = beta[i - 1];
            if (b == 0) continue;
            Rational x = b * p.slabs[i].lo.to_rational();
            Rational y = b * p.slabs[i].hi.to_rational();
            if (x > y) std::swap(x, y);
            r_lo += x;
            r_hi += y;
        }
        const Rational L = p.slabs[0].lo.to_rational();
        const Rational U = p.slabs[0].hi.to_rational();
        Rational s_min, s_max;
        if (b_new > 0) {
            s_min = (L - r_lo) / b_new;
            s_max = (U - r_hi) / b_new - w;
        } else {
            s_min = (U - r_hi) / b_new;
            s_max = (L - r_lo) / b_new - w;
        }
        const Rational offset = 2 * w * Rational(static_cast<long>(pos + 1));
        Integer h_lo = ceil_of((s_min - offset) / S);
        Integer h_hi = floor_of((s_max - offset) / S);
        if (h_hi < h_lo)
            throw Error(ErrorCode::StageStarved,
                        "parent " + std::to_string(p.global_id) + " has no children");
        Integer cnt = h_hi - h_lo + 1;
        total += cnt.get_ui();
        if (!cnt.fits_ulong_p() || total > limits.max_pieces)
            throw Error(ErrorCode::PieceCapExceeded, "stage would exceed max_pieces = " +
                                                         std::to_string(limits.max_pieces));
        hrange[pos] = {h_lo, h_hi};
    }

    std::vector<ChildKey> keys;
    keys.reserve(total);
    for (std::size_t pos = 0; pos < prev.pieces.size(); ++pos) {
        for (Integer h = hrange[pos].first; h <= hrange[pos].second; ++h) {
            Integer key = h;
            mpz_mul_2exp(key.get_mpz_t(), key.get_mpz_t(), static_cast<mp_bitcnt_t>(a - 1));
            key += static_cast<unsigned long>(pos + 1);
            keys.push_back({key, h, static_cast<std::int64_t>(pos)});
        }
    }
    std::stable_sort(keys.begin(), keys.end(), [](const ChildKey& x, const ChildKey& y) {
        int c = cmp(x.key, y.key);
        if (c != 0) return c < 0;
        return x.parent_pos < y.parent_pos;
    });

    Stage s;
    s.k = prev.k + 1;
    s.line = line;
    s.n = n;
    s.a = a;
    s.id_base = id_base;
    s.pieces.reserve(keys.size());
    const Dyadic width(Integer(1), -n);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const ChildKey& ck = keys[i];
        const Piece& parent = prev.pieces[static_cast<std::size_t>(ck.parent_pos)];
        Piece c;
        c.slabs.reserve(d);
        for (std::size_t j = 1; j < d; ++j) c.slabs.push_back(parent.slabs[j]);
        Dyadic lo(ck.key, 1 - n);
        c.slabs.push_back({line, lo, lo + width});
        c.stage = s.k;
        c.parent_id = parent.global_id;
        c.global_id = id_base + static_cast<std::int64_t>(i);
        c.h = ck.h;
        c.j = ck.parent_pos + 1;
        ++s.per_parent_counts[parent.global_id];
        s.pieces.push_back(std::move(c));
    }
    return s;
}

void assign_mass(Stage& stage, const Stage& prev) {
    for (const auto& p : prev.pieces)
        if (stage.per_parent_counts.find(p.global_id) == stage.per_parent_counts.end())
            throw Error(ErrorCode::StageStarved, "parent " + std::to_string(p.global_id) + " has no children");
    for (auto& c : stage.pieces) {
        const Piece& parent = prev.by_id(c.parent_id);
        c.mass = parent.mass / Rational(static_cast<long>(stage.per_parent_counts.at(c.parent_id)));
    }
}

InjectivityCertificate certify_injectivity(const Stage& stage) {
    InjectivityCertificate cert;
    cert.k = stage.k;
    cert.line = stage.line;
    for (const auto& p : stage.pieces) cert.intervals.push_back({p.global_id, {p.slabs.back().lo, p.slabs.back().hi}});
    std::stable_sort(cert.intervals.begin(), cert.intervals.end(),
                     [](const auto& x, const auto& y) { return x.second.lo < y.second.lo; });
    for (std::size_t i = 0; i + 1 < cert.intervals.size(); ++i) {
        if (!(cert.intervals[i].second.hi < cert.intervals[i + 1].second.lo)) {
            cert.certified = false;
            cert.violation = std::make_pair(cert.intervals[i].first, cert.intervals[i + 1].first);
            break;
        }
    }
    return cert;
}

std::optional<std::string> check_ordering(const Stage& stage) {
    std::vector<const Piece*> order;
    for (const auto& p : stage.pieces) order.push_back(&p);
    std::sort(order.begin(), order.end(),
              [](const Piece* x, const Piece* y) { return x->h != y->h ? x->h < y->h : x->j < y->j; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const Slab& x = order[i]->slabs.back();
        const Slab& y = order[i + 1]->slabs.back();
        if (!(x.hi < y.lo))
            return "I(" + order[i]->h.get_str() + "," + std::to_string(order[i]->j) + ") does not precede I(" +
                   order[i + 1]->h.get_str() + "," + std::to_string(order[i + 1]->j) + ")";
    }
    return std::nullopt;
}

std::optional<std::string> check_nesting(const Stage& stage, const Stage& prev) {
    if (stage.pieces.empty()) return std::nullopt;
    Frame frame = Frame::of(stage.pieces.front());
    for (const auto& c : stage.pieces) {
        if (c.parent_id < prev.id_base || c.parent_id >= prev.id_base + static_cast<std::int64_t>(prev.pieces.size()))
            return "piece " + std::to_string(c.global_id) + " has unknown parent";
        const Piece& parent = prev.by_id(c.parent_id);
        for (const auto& v : frame.vertices(c))
            if (!contains_point(parent, v))
                return "piece " + std::to_string(c.global_id) + " leaves its parent";
    }
    return std::nullopt;
}

namespace {

std::vector<Rational> edge_lengths(const Frame& frame, const Piece& p) {
    auto v0 = frame.vertex(p, 0);
    std::vector<Rational> out;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        auto vi = frame.vertex(p, 1u << i);
        Rational s = 0;
        for (std::size_t c = 0; c < v0.size(); ++c) s += (vi[c] - v0[c]) * (vi[c] - v0[c]);
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::optional<std::string> check_congruence(const Stage& stage, std::size_t sample) {
    if (stage.pieces.size() < 2) return std::nullopt;
    Frame frame = Frame::of(stage.pieces.front());
    auto ref = edge_lengths(frame, stage.pieces.front());
    const std::size_t count = stage.pieces.size();
    const std::size_t take = std::min(count, std::max<std::size_t>(sample, 1));
    for (std::size_t i = 0; i < take; ++i) {
        std::size_t idx = (take == count) ? i : (i * (count - 1)) / (take - 1 ? take - 1 : 1);
        if (edge_lengths(frame, stage.pieces[idx]) != ref)
            return "piece " + std::to_string(stage.pieces[idx].global_id) + " is not congruent";
    }
    return std::nullopt;
}

std::optional<std::string> check_projection_equals_interval(const Stage& stage) {
    if (stage.pieces.empty() || !stage.line) return std::nullopt;
    Frame frame = Frame::of(stage.pieces.front());
    for (const auto& p : stage.pieces) {
        RatInterval r = frame.range(p, *stage.line);
        if (r.lo != p.slabs.back().lo.to_rational() || r.hi != p.slabs.back().hi.to_rational())
            return "piece " + std::to_string(p.global_id) + " projects off its generating interval";
    }
    return std::nullopt;
}

const Piece& Construction::ancestor(const Piece& p, int k) const {
    const Piece* cur = &p;
    while (cur->stage > k) cur = &stages[static_cast<std::size_t>(cur->stage - 1)].by_id(cur->parent_id);
    return *cur;
}

int line_index(const LineSchedule& s, int k) {
    const auto& e = s.at(k);
    const int L = static_cast<int>(s.user_lines.size());
    if (e.is_user()) return e.user_index;
    if (e.helper_index == 0) return L + static_cast<int>(s.d) - 1;
    return L + e.helper_index - 1;
}

LedgerState ledger_state(const Construction& c, int k) {
    const int d = static_cast<int>(c.schedule.d);
    LedgerState st;
    for (int j = k - d; j <= k - 1; ++j) st.n_prev.push_back(j >= 1 ? c.stages[static_cast<std::size_t>(j)].n : 0);
    st.a_prev = k >= 2 ? c.stages[static_cast<std::size_t>(k - 1)].a : 0;
    st.count_prev = c.stages[static_cast<std::size_t>(k - 1)].count();
    return st;
}

Construction construct(const LineSchedule& schedule, const ConstructionConfig& config, int depth) {
    if (depth < 1 || depth > schedule.horizon) throw Error(ErrorCode::InvalidInput, "depth outside the schedule horizon");
    Construction c;
    c.schedule = schedule;
    c.config = config;
    c.stages.push_back(initial_stage(schedule));
    std::int64_t next_id = 1;
    for (int k = 1; k <= depth; ++k) {
        try {
            LedgerState st = ledger_state(c, k);
            StagePlan plan = plan_parameters(schedule, config.t, config.option, k, st, config.plan);
            validate_parameters(schedule, config.t, config.option, k, st, config.plan, plan.n, plan.a);
            Stage s = build_stage(c.stages.back(), schedule.at(k).line, plan.n, plan.a, next_id, config.limits);
            assign_mass(s, c.stages.back());
            next_id += static_cast<std::int64_t>(s.pieces.size());
            c.plans.push_back(plan);
            c.certificates.push_back(certify_injectivity(s));

            LedgerRow row;
            row.k = k;
            row.line_index = line_index(schedule, k);
            row.n = plan.n;
            row.a = plan.a;
            row.count = s.count();
            row.m = s.m();
            row.min_children = std::numeric_limits<std::int64_t>::max();
            row.max_children = 0;
            for (const auto& [pid, cnt] : s.per_parent_counts) {
                row.min_children = std::min(row.min_children, cnt);
                row.max_children = std::max(row.max_children, cnt);
            }
            c.ledger.push_back(row);
            c.stages.push_back(std::move(s));
        } catch (const Error& e) {
            std::string what = e.what();
            const std::string prefix = std::string(to_string(e.code())) + ": ";
            if (what.starts_with(prefix)) what.erase(0, prefix.size());
            throw Error(e.code(), "stage " + std::to_string(k) + ": " + what);
        }
    }
    return c;
}

std::optional<std::string> check_persistence(const Construction& c) {
    const Stage& deep = c.deepest();
    if (deep.pieces.empty()) return std::nullopt;
    Frame frame = Frame::of(deep.pieces.front());
    for (const auto& line : c.schedule.user_lines) {
        int latest = 0;
        for (int k : c.schedule.occurrences(line))
            if (k <= c.depth()) latest = k;
        if (latest == 0) continue;
        const auto beta = frame.coefficients(line);
        for (const auto& p : deep.pieces) {
            const Piece& anc = c.ancestor(p, latest);
            RatInterval r = Frame::range_from_coefficients(p, beta);
            if (r.lo < anc.slabs.back().lo.to_rational() || r.hi > anc.slabs.back().hi.to_rational())
                return "piece " + std::to_string(p.global_id) + " leaves its stage-" + std::to_string(latest) +
                       " interval on " + to_string(line);
        }
    }
    return std::nullopt;
}

} // namespace vblind
