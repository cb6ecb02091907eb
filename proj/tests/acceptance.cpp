// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria.

#include "oracles.hpp"
#include "vblind/error.hpp"
#include "vblind/pipeline.hpp"
#include "vblind/planes.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace vblind;
using namespace vblind::testing;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double run_seconds = 60.0;
constexpr double ratio_tol = 0.10;
constexpr double slope_tol = 0.15;
constexpr int series_exponent = -10;
constexpr int ball_samples = 1000;
constexpr double inconclusive_share = 0.05;
constexpr double energy_growth = 0.10;
constexpr int oracle_configs = 20;
constexpr std::size_t oracle_candidates = 10000;
constexpr std::size_t oracle_cells = 100000;
constexpr std::size_t min_planes = 200;
constexpr double dual_slope_max = 0.10;
constexpr std::size_t wk_parents = 32;

struct Verdict {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string matrix_config(std::size_t d, const std::string& t, const std::string& option) {
    return "d = " + std::to_string(d) + "\nt = " + t + "\noption = " + option +
           "\nlines = " + (d == 2 ? "1,2" : "1,1,3") +
           "\ngrowth = 3/2\ncase_partition = false\nramp_ratio = false\ncycles = 2\nmax_pieces = 200000\n";
}

std::vector<int> occurrences_upto(const Construction& c, const Direction& line) {
    std::vector<int> ks;
    for (int k : c.schedule.occurrences(line))
        if (k <= c.depth()) ks.push_back(k);
    return ks;
}

std::vector<SeriesPoint> occurrence_series(const Construction& c, const Direction& line) {
    auto ks = occurrences_upto(c, line);
    if (ks.size() > 3) ks.erase(ks.begin(), ks.end() - 3);
    std::vector<SeriesPoint> out;
    for (int k : ks) {
        const std::int64_t q = c.stages[static_cast<std::size_t>(k)].n;
        out.push_back({q, box_count(c.deepest().pieces, q, Projection{line})});
    }
    return out;
}

struct MatrixResults {
    Verdict c1, c2, c3, c4;
};

// Criteria 1-4 on every admissible (d, t, option) combination.
void run_matrix(MatrixResults& r) {
    const std::vector<std::pair<std::string, std::string>> combos{
        {"0", "capacity"},          {"0", "unconstrained"},  {"1/2", "capacity"}, {"1/2", "measure_zero"},
        {"1/2", "unconstrained"},   {"1", "measure_zero"},   {"1", "unconstrained"}};
    int built = 0, total = 0;
    double worst_ratio = 0, worst_slope = 0;
    for (std::size_t d : {2u, 3u}) {
        for (const auto& [t, option] : combos) {
            ++total;
            const std::string name = "d=" + std::to_string(d) + " t=" + t + " " + option;
            const RunConfig cfg = parse_config(matrix_config(d, t, option));
            const auto t0 = std::chrono::steady_clock::now();
            Construction c;
            try {
                c = run_construction(cfg);
            } catch (const Error& e) {
                r.c1.fail(name + ": " + e.what());
                std::cout << "  [" << name << "] construction failed: " << e.what() << std::endl;
                continue;
            }
            const double secs = seconds_since(t0);
            ++built;
            std::cout << "  [" << name << "] " << c.depth() << " stages, " << c.deepest().pieces.size()
                      << " pieces, " << fmt(secs) << " s" << std::endl;
            if (secs > run_seconds) r.c1.fail(name + ": " + fmt(secs) + " s");

            for (const auto& f : verify_construction(c)) {
                if (f.name == "persistence") r.c2.fail(name + ": " + f.detail);
                else r.c1.fail(name + ": " + f.name + " at stage " + std::to_string(f.k));
            }
            for (const auto& cert : c.certificates)
                if (!cert.certified) r.c1.fail(name + ": stage " + std::to_string(cert.k) + " not certified");

            const int D = static_cast<int>(d);
            const auto rec = check_mk_recursion(c.ledger, c.schedule);
            for (const auto& row : rec.rows)
                if (!row.ok || std::abs(row.alpha_tilde) > row.M)
                    r.c3.fail(name + ": recursion at stage " + std::to_string(row.k));
            for (int k = D + 1; k <= c.depth(); ++k) {
                const auto& parents = c.stages[static_cast<std::size_t>(k - 1)].pieces;
                const std::size_t step = std::max<std::size_t>(1, parents.size() / wk_parents);
                const Direction& line = *c.schedule.at(k).line;
                const std::int64_t n_kd = c.stages[static_cast<std::size_t>(k - D)].n;
                for (std::size_t i = 0; i < parents.size(); i += step) {
                    const auto wk = compute_wk(parents[i], line);
                    if (!wk_sandwich(wk.scaled, n_kd, c.schedule.angle(k).alpha))
                        r.c3.fail(name + ": w_k sandwich at stage " + std::to_string(k));
                }
            }

            const double tv = cfg.t.get_d();
            for (const auto& line : cfg.lines) {
                const auto ks = occurrences_upto(c, line);
                const auto& row = c.ledger[static_cast<std::size_t>(ks.back() - 1)];
                const double gap = std::abs(row.m / static_cast<double>(row.n) - tv);
                worst_ratio = std::max(worst_ratio, gap);
                if (gap > ratio_tol) r.c4.fail(name + ": |m/n - t| = " + fmt(gap));
                const auto series = occurrence_series(c, line);
                try {
                    const double sg = std::abs(dim_slope(series) - tv);
                    worst_slope = std::max(worst_slope, sg);
                    if (sg > slope_tol) r.c4.fail(name + ": |slope - t| = " + fmt(sg));
                } catch (const Error& e) {
                    r.c4.fail(name + ": " + e.what());
                }
            }
        }
    }
    const std::string runs = std::to_string(built) + "/" + std::to_string(total) + " runs built";
    r.c1.detail = r.c1.pass ? runs : runs + "; " + r.c1.detail;
    if (r.c2.pass) r.c2.detail = std::to_string(built) + " runs, zero violations";
    if (r.c3.pass) r.c3.detail = std::to_string(built) + " runs, recursion and w_k sandwich hold";
    const std::string worst = "worst |m/n - t| " + fmt(worst_ratio) + ", worst |slope - t| " + fmt(worst_slope);
    r.c4.detail = r.c4.pass ? worst : worst + "; first: " + r.c4.detail;
}

Verdict criterion5() {
    Verdict v;
    const RunConfig cfg = parse_config(matrix_config(2, "1", "measure_zero"));
    const Construction c = run_construction(cfg);
    for (const auto& line : cfg.lines) {
        const auto series = projection_measure_series(c.ledger, c.schedule, line, cfg.t);
        if (!strictly_decreasing(series, cfg.t)) v.fail("series not strictly decreasing");
        if (!below_pow2(series.back(), cfg.t, series_exponent)) v.fail("final term not below 2^-10");
        if (v.pass)
            v.detail = std::to_string(series.size()) + " occurrences, final log2 " + fmt(series.back().log2_value);
    }
    return v;
}

void criteria_6_7(Verdict& v6, Verdict& v7) {
    const RunConfig cfg = parse_config(matrix_config(2, "0", "capacity"));
    const Construction c = run_construction(cfg);
    const int K = c.depth();
    const Rational s = Rational(static_cast<long>(cfg.d - 1)) + cfg.t;
    std::mt19937_64 rng(42);
    std::int64_t samples = 0, violations = 0, inconclusive = 0;
    std::string empties;
    for (int k : {K - 2, K - 1}) {
        for (BallCase which : {BallCase::Case1, BallCase::Case2}) {
            const QRange range = case_range(c, k, which);
            if (range.empty()) {
                empties += " " + to_string(which) + "@" + std::to_string(k);
                continue;
            }
            const auto width = static_cast<std::uint64_t>(range.hi - range.lo + 1);
            for (int i = 0; i < ball_samples; ++i) {
                Point centre = random_point(c.deepest(), rng);
                const std::int64_t q = range.lo + static_cast<std::int64_t>(rng() % width);
                const BallQuery ball = make_ball(c, k, std::move(centre), q);
                const MassBounds b = mass_ball_bounds(c.deepest(), ball);
                ++samples;
                if (!ball_bound_holds(b.lower, q, s)) ++violations;
                else if (!ball_bound_holds(b.upper, q, s)) ++inconclusive;
            }
        }
    }
    v6.detail = std::to_string(samples) + " samples, " + std::to_string(violations) + " lower-bound violations, " +
                std::to_string(inconclusive) + " inconclusive";
    if (!empties.empty()) v6.detail += "; empty ranges:" + empties;
    v6.pass = samples > 0 && violations == 0 &&
              static_cast<double>(inconclusive) <= inconclusive_share * static_cast<double>(samples);

    const double es = static_cast<double>(cfg.d - 1);
    const double before = energy(c.stages[static_cast<std::size_t>(K - 1)], es).cross;
    const double after = energy(c.deepest(), es).cross;
    const double rel = (after - before) / before;
    v7.detail = "cross energy " + fmt(before) + " -> " + fmt(after) + ", relative increase " + fmt(rel);
    v7.pass = rel <= energy_growth;
}

Verdict criterion8() {
    Verdict v;
    std::mt19937 rng(8);
    int builder = 0;
    for (int trial = 0; trial < 400 && builder < oracle_configs + 10; ++trial) {
        const std::size_t d = trial % 3 == 2 ? 3 : 2;
        std::uniform_int_distribution<long> comp(-2, 2);
        std::vector<Integer> raw(d);
        bool nz = false;
        for (auto& x : raw) {
            x = comp(rng);
            nz |= x != 0;
        }
        if (!nz) continue;
        LineSchedule sched;
        try {
            sched = build_schedule({Direction::canonicalize(raw)}, d, static_cast<int>(2 * d));
        } catch (const Error&) {
            continue;
        }
        Stage prev = initial_stage(sched);
        std::int64_t next_id = 1, n_prev = 0, a_prev = 0;
        for (int k = 1; k <= 3; ++k) {
            const std::int64_t n = n_prev + 3 + static_cast<std::int64_t>(rng() % 4);
            const std::int64_t a = std::min<std::int64_t>(a_prev + 1 + static_cast<std::int64_t>(rng() % 2), n - 1);
            // Oracle work: parents times h candidates per parent.
            const auto per_parent = static_cast<std::size_t>(std::ldexp(2.0 * static_cast<double>(d), static_cast<int>(n - a)));
            if (prev.pieces.size() * (per_parent + 8) > oracle_candidates) break;
            const auto& line = sched.at(k).line;
            std::int64_t empty = 0;
            const ChildSet expect = oracle_children(prev, line, n, a, &empty);
            try {
                Stage st = build_stage(prev, line, n, a, next_id);
                ++builder;
                if (built_children(st) != expect) v.fail("builder mismatch at d=" + std::to_string(d));
                next_id += static_cast<std::int64_t>(st.pieces.size());
                assign_mass(st, prev);
                prev = std::move(st);
                n_prev = n;
                a_prev = a;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::StageStarved && empty > 0) ++builder;
                else v.fail(std::string("builder error ") + e.what());
                break;
            }
        }
    }

    int boxes = 0;
    const std::vector<std::pair<std::size_t, Direction>> runs{{2, Direction::canonicalize({1, 2})},
                                                              {2, Direction::canonicalize({2, 1})},
                                                              {3, Direction::canonicalize({1, 1, 3})}};
    for (const auto& [d, line] : runs) {
        const auto sched = build_schedule({line}, d, static_cast<int>(4 * d));
        ConstructionConfig cfg;
        cfg.plan.growth = Rational(3, 2);
        cfg.plan.case_partition = false;
        cfg.plan.ramp_ratio = false;
        cfg.plan.budget_bits = 12;
        cfg.limits.max_pieces = 1 << 12;
        const auto c = construct(sched, cfg, static_cast<int>(d + 1));
        std::vector<std::vector<Direction>> bases{{line}};
        if (d == 2) bases.push_back({Direction::canonicalize({1, 0}), Direction::canonicalize({0, 1})});
        else bases.push_back({Direction::canonicalize({1, 0, 0}), Direction::canonicalize({0, 1, 1})});
        for (int k = 1; k <= c.depth(); ++k) {
            auto pieces = c.stages[static_cast<std::size_t>(k)].pieces;
            if (pieces.size() > 10) pieces.resize(10);
            for (std::int64_t q : {1, 3, 5}) {
                for (const auto& b : bases) {
                    std::size_t cells = 0;
                    for (const auto& p : pieces) {
                        std::size_t per = 1;
                        for (const auto& w : b) {
                            const auto r = projection_range(p, w);
                            const Integer span = ceil_of(Rational(r.hi * pow2(q))) - floor_of(Rational(r.lo * pow2(q)));
                            per *= static_cast<std::size_t>(span.get_ui());
                        }
                        cells += per;
                    }
                    if (cells > oracle_cells) continue;
                    const BoxTarget target = b.size() == 1 ? BoxTarget{Projection{b[0]}} : BoxTarget{Subspace{b}};
                    ++boxes;
                    if (box_count(pieces, q, target) != oracle_box_count(pieces, q, b))
                        v.fail("box count mismatch at d=" + std::to_string(d) + " q=" + std::to_string(q));
                }
            }
        }
    }
    if (builder < oracle_configs) v.fail("only " + std::to_string(builder) + " builder configurations");
    if (boxes < oracle_configs) v.fail("only " + std::to_string(boxes) + " box-count configurations");
    if (v.pass)
        v.detail = std::to_string(builder) + " builder and " + std::to_string(boxes) + " box-count configurations agree";
    return v;
}

Verdict criterion9() {
    Verdict v;
    const std::vector<std::tuple<int, int, int>> table{{1, 0, 1}, {1, 1, 2}, {1, 2, 2}, {1, 3, 3}, {2, 2, 3}, {2, 5, 4}};
    for (const auto& [k, s, h] : table)
        if (h_function(k, s) != h)
            v.fail("h(" + std::to_string(k) + "," + std::to_string(s) + ") = " + to_string(h_function(k, s)));
    int boundary = 0;
    for (int k = 1; k <= 6; ++k)
        for (int j = 0; j * (k + 1) <= (k + 1) * 6; ++j) {
            // At s = j(k+1): ceil branch value k + j, and the neighbouring
            // branch s - k(j+1) + 2k gives the same number.
            const Rational s(j * (k + 1));
            const Rational left(k + j);
            const Rational right = s - Rational(k * (j + 1)) + Rational(2 * k);
            ++boundary;
            if (h_function(k, s) != left || left != right)
                v.fail("branch mismatch at k=" + std::to_string(k) + " s=" + to_string(s));
        }
    if (v.pass) v.detail = "6 table entries, " + std::to_string(boundary) + " boundary points";
    return v;
}

void check_family_into(Verdict& v, const std::string& name, const std::function<PlaneFamily()>& make) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const PlaneFamily f = make();
        const PairCheck pc = check_family(f);
        const double secs = seconds_since(t0);
        v.detail += (v.detail.empty() ? "" : "; ") + name + ": " + std::to_string(f.planes.size()) + " planes, " +
                    std::to_string(pc.failures) + "/" + std::to_string(pc.pairs) + " pair failures, " + fmt(secs) +
                    " s";
        if (f.planes.size() < min_planes || pc.failures != 0 || secs > run_seconds) v.pass = false;
    } catch (const Error& e) {
        v.pass = false;
        v.detail += (v.detail.empty() ? "" : "; ") + name + ": " + e.what();
    }
}

Verdict criterion10() {
    Verdict v;
    const std::string base3 = "d = 3\nt = 1\noption = measure_zero\nlines = 1,0,0;0,1,0\ngrowth = 3/2\n"
                              "case_partition = false\nramp_ratio = false\nstages = 11\n";
    const Construction c3 = run_construction(parse_config(base3));
    check_family_into(v, "measure_zero d=3 k=1", [&] { return measure_zero_family(c3.deepest(), 3, 1, 256); });
    check_family_into(v, "dimension d=4 k=1 s=3", [&] { return dimension_family(4, 1, 3, c3.deepest(), 256); });
    const std::string base5 = "d = 5\nt = 1\noption = measure_zero\nlines = 1,0,0,0,0;0,1,0,0,0\ngrowth = 3/2\n"
                              "case_partition = false\nramp_ratio = false\nstages = 11\n";
    const Construction c5 = run_construction(parse_config(base5));
    check_family_into(v, "dimension d=4 k=1 s=4", [&] { return dimension_family(4, 1, 4, c5.deepest(), 256); });
    return v;
}

Verdict criterion11() {
    Verdict v;
    const RunConfig cfg = parse_config("d = 2\nt = 0\noption = capacity\nlines = 0,1;1,2\ngrowth = 3/2\n"
                                       "case_partition = false\nramp_ratio = false\nhelper_hyperplane = 1,1\n"
                                       "helper_transversal = 0,1\nstages = 13\nverticals = 0;1;1/2\n");
    const Construction c = run_construction(cfg);
    std::string slopes;
    int checked = 0;
    for (const auto& x : cfg.verticals) {
        const Direction dirn = vertical_direction(x);
        for (int k : occurrences_upto(c, dirn)) {
            if (!c.certificates[static_cast<std::size_t>(k - 1)].certified) continue;
            ++checked;
            if (section_list(c.stages[static_cast<std::size_t>(k)], x).overlap)
                v.fail("overlap for vertical " + to_string(dirn) + " at stage " + std::to_string(k));
        }
        try {
            const double slope = dim_slope(occurrence_series(c, dirn));
            slopes += " " + fmt(slope);
            if (slope > dual_slope_max) v.fail("slope " + fmt(slope) + " for vertical " + to_string(dirn));
        } catch (const Error& e) {
            v.fail(e.what());
        }
    }
    if (v.pass) v.detail = std::to_string(checked) + " certified sections disjoint; slopes" + slopes;
    return v;
}

Verdict criterion12() {
    Verdict v;
    const RunConfig cfg = parse_config(matrix_config(2, "0", "capacity"));
    const fs::path root = fs::temp_directory_path() / "vblind_acceptance";
    fs::remove_all(root);
    const fs::path a = root / "a", b = root / "b";
    cmd_construct(cfg, a);
    cmd_construct(cfg, b);
    const auto checks = parse_checks("all");
    cmd_analyze(a, checks, 42);
    cmd_analyze(b, checks, 42);
    int files = 0;
    for (const fs::path rel : {fs::path("manifest.json"), fs::path("ledger.csv"), fs::path("analysis/verdicts.json"),
                               fs::path("analysis/balls.csv"), fs::path("analysis/energy.csv")}) {
        ++files;
        const std::string x = slurp(a / rel), y = slurp(b / rel);
        if (x.empty() || x != y) v.fail(rel.string() + " differs");
    }
    for (const auto& e : fs::directory_iterator(a / "stages")) {
        ++files;
        if (slurp(e.path()) != slurp(b / "stages" / e.path().filename())) v.fail(e.path().filename().string() + " differs");
    }
    fs::remove_all(root);
    if (v.pass) v.detail = std::to_string(files) + " files byte-identical";
    return v;
}

void report(int n, const Verdict& v, int& failures) {
    std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << std::endl;
    if (!v.pass) ++failures;
}

Verdict guarded(const std::function<Verdict()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        Verdict v;
        v.fail(std::string("error: ") + e.what());
        return v;
    }
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    MatrixResults m;
    try {
        run_matrix(m);
    } catch (const std::exception& e) {
        m.c1.fail(std::string("error: ") + e.what());
    }
    report(1, m.c1, failures);
    report(2, m.c2, failures);
    report(3, m.c3, failures);
    report(4, m.c4, failures);
    report(5, guarded(criterion5), failures);
    Verdict v6, v7;
    try {
        criteria_6_7(v6, v7);
    } catch (const std::exception& e) {
        v6.fail(e.what());
        v7.fail(e.what());
    }
    report(6, v6, failures);
    report(7, v7, failures);
    report(8, guarded(criterion8), failures);
    report(9, guarded(criterion9), failures);
    report(10, guarded(criterion10), failures);
    report(11, guarded(criterion11), failures);
    report(12, guarded(criterion12), failures);
    std::cout << "acceptance: 12 criteria evaluated, " << 12 - failures << " pass, " << failures << " fail ("
              << fmt(seconds_since(t0)) << " s)" << std::endl;
    return failures;
}
