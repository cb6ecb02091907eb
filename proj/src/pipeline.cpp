#include "vblind/analysis.hpp"
#include "vblind/error.hpp"
#include "vblind/pipeline.hpp"
#include "vblind/planes.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace vblind {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Pairwise energy is quadratic; stages above this size are reported as skipped.
constexpr std::size_t energy_piece_limit = 60000;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string point_text(const Point& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + to_string(p[i]);
    return s;
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p, std::ios::binary);
    out << j.dump(2) << '\n';
}

// Occurrence stages of a line up to the construction depth.
std::vector<int> occurrences_upto(const Construction& c, const Direction& line) {
    std::vector<int> ks;
    for (int k : c.schedule.occurrences(line))
        if (k <= c.depth()) ks.push_back(k);
    return ks;
}

// Box counts of the deepest pieces projected on a line, at q = n_k of its
// deepest (up to three) occurrences.
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

json series_json(const std::vector<SeriesPoint>& s) {
    json a = json::array();
    for (const auto& p : s) a.push_back({{"q", p.q}, {"count", p.count.get_str()}});
    return a;
}

json check_recursion(const Construction& c, std::ostream& csv, bool& hard_ok) {
    json v;
    if (c.depth() < static_cast<int>(c.schedule.d) + 1) {
        v["status"] = "skipped";
        v["reason"] = "depth does not exceed d";
        return v;
    }
    const auto rep = check_mk_recursion(c.ledger, c.schedule);
    csv << "k,alpha_tilde,M,ok,delta,eps,eps_prime\n";
    v["rows"] = json::array();
    for (const auto& r : rep.rows) {
        csv << r.k << ',' << fmt_double(r.alpha_tilde) << ',' << r.M << ',' << (r.ok ? 1 : 0) << ','
            << fmt_double(r.delta) << ',' << (r.eps ? fmt_double(*r.eps) : "") << ','
            << (r.eps_prime ? fmt_double(*r.eps_prime) : "") << '\n';
        const auto& row = c.ledger[static_cast<std::size_t>(r.k - 1)];
        const auto& prev = c.ledger[static_cast<std::size_t>(r.k - 2)];
        v["rows"].push_back({{"k", r.k},
                             {"alpha_tilde", r.alpha_tilde},
                             {"M", r.M},
                             {"ok", r.ok},
                             {"count", row.count.get_str()},
                             {"count_prev", prev.count.get_str()},
                             {"n", row.n},
                             {"a", row.a}});
    }
    v["ok"] = rep.ok();
    v["hard"] = true;
    hard_ok = hard_ok && rep.ok();
    return v;
}

json check_wk(const Construction& c, int samples, std::ostream& csv, bool& hard_ok) {
    json v;
    const int d = static_cast<int>(c.schedule.d);
    csv << "k,sampled,failures,min_scaled_times_2n,max_scaled_times_2n\n";
    v["stages"] = json::array();
    bool ok = true;
    for (int k = d + 1; k <= c.depth(); ++k) {
        const Stage& parents = c.stages[static_cast<std::size_t>(k - 1)];
        const std::int64_t nkd = c.stages[static_cast<std::size_t>(k - d)].n;
        const int alpha = c.schedule.angle(k).alpha;
        const std::size_t N = parents.pieces.size();
        const std::size_t S = std::min<std::size_t>(N, static_cast<std::size_t>(samples));
        int failures = 0;
        std::optional<Rational> lo, hi;
        json first;
        for (std::size_t i = 0; i < S; ++i) {
            const Piece& p = parents.pieces[i * N / S];
            const WkValue w = compute_wk(p, *c.schedule.at(k).line);
            const Rational scaled2n = w.scaled * pow2(nkd);
            if (!lo || scaled2n < *lo) lo = scaled2n;
            if (!hi || scaled2n > *hi) hi = scaled2n;
            if (!wk_sandwich(w.scaled, nkd, alpha)) {
                if (failures++ == 0) first = {{"parent", p.global_id}, {"scaled", to_string(w.scaled)}};
            }
        }
        ok = ok && failures == 0;
        csv << k << ',' << S << ',' << failures << ',' << (lo ? to_string(*lo) : "") << ','
            << (hi ? to_string(*hi) : "") << '\n';
        json st{{"k", k}, {"sampled", S}, {"failures", failures}, {"n_kd", nkd}, {"alpha", alpha}};
        if (lo) st["min_scaled_times_2n"] = to_string(*lo);
        if (hi) st["max_scaled_times_2n"] = to_string(*hi);
        if (failures) st["first_failure"] = first;
        v["stages"].push_back(st);
    }
    v["ok"] = ok;
    v["hard"] = true;
    hard_ok = hard_ok && ok;
    return v;
}

json check_boxdim(const Construction& c, std::ostream& csv) {
    json v;
    v["hard"] = false;
    v["lines"] = json::array();
    csv << "line,k,q,count\n";
    const double t = c.config.t.get_d();
    for (const auto& line : c.schedule.user_lines) {
        json l{{"line", to_string(line)}};
        const auto ks = occurrences_upto(c, line);
        if (ks.empty()) {
            l["status"] = "skipped";
            l["reason"] = "line does not occur";
            v["lines"].push_back(l);
            continue;
        }
        const auto& row = c.ledger[static_cast<std::size_t>(ks.back() - 1)];
        const double ratio = row.m / static_cast<double>(row.n);
        l["deepest_occurrence"] = ks.back();
        l["m_over_n"] = ratio;
        l["ratio_gap"] = std::abs(ratio - t);
        const auto series = occurrence_series(c, line);
        l["series"] = series_json(series);
        std::size_t idx = ks.size() > 3 ? ks.size() - 3 : 0;
        for (const auto& p : series) csv << to_string(line) << ',' << ks[idx++] << ',' << p.q << ',' << p.count.get_str() << '\n';
        try {
            const double slope = dim_slope(series);
            l["slope"] = slope;
            l["slope_gap"] = std::abs(slope - t);
        } catch (const Error& e) {
            l["slope"] = nullptr;
            l["slope_reason"] = e.what();
        }
        v["lines"].push_back(l);
    }
    return v;
}

json check_series(const Construction& c, std::ostream& csv, bool& hard_ok) {
    json v;
    const bool hard = c.config.option == Option::MeasureZero;
    const int ramp = ramp_of(c.schedule, c.config.plan);
    v["hard"] = hard;
    v["lines"] = json::array();
    csv << "line,k,n,count,log2_value\n";
    bool ok = true;
    for (const auto& line : c.schedule.user_lines) {
        json l{{"line", to_string(line)}};
        std::vector<MeasureTerm> s;
        try {
            s = projection_measure_series(c.ledger, c.schedule, line, c.config.t);
        } catch (const Error& e) {
            l["status"] = "skipped";
            l["reason"] = e.what();
            v["lines"].push_back(l);
            continue;
        }
        for (const auto& term : s)
            csv << to_string(line) << ',' << term.k << ',' << term.n << ',' << term.count.get_str() << ','
                << fmt_double(term.log2_value) << '\n';
        std::vector<MeasureTerm> post;
        for (const auto& term : s)
            if (term.k > ramp) post.push_back(term);
        const bool dec = post.size() < 2 || strictly_decreasing(post, c.config.t);
        l["post_ramp_terms"] = post.size();
        l["strictly_decreasing"] = dec;
        l["final_log2"] = s.back().log2_value;
        l["final_below_2^-10"] = below_pow2(s.back(), c.config.t, -10);
        ok = ok && dec;
        v["lines"].push_back(l);
    }
    v["ok"] = ok;
    if (hard) hard_ok = hard_ok && ok;
    return v;
}

json check_balls(const Construction& c, int samples, std::uint64_t seed, std::ostream& csv, bool& hard_ok) {
    json v;
    const bool hard = c.config.option == Option::Capacity;
    const Rational s = Rational(static_cast<long>(c.schedule.d) - 1) + c.config.t;
    v["hard"] = hard;
    v["s"] = to_string(s);
    v["seed"] = seed;
    v["groups"] = json::array();
    csv << "k,case,q,center,lower,upper,lower_ok,upper_ok\n";
    std::mt19937_64 rng(seed);
    const Stage& deep = c.deepest();
    bool ok = true;
    for (int k = std::max(1, c.depth() - 2); k <= c.depth() - 1; ++k) {
        for (BallCase which : {BallCase::Case1, BallCase::Case2}) {
            const QRange r = case_range(c, k, which);
            json g{{"k", k}, {"case", to_string(which)}, {"q_lo", r.lo}, {"q_hi", r.hi}};
            if (r.empty()) {
                g["status"] = "empty range";
                v["groups"].push_back(g);
                continue;
            }
            int violations = 0, inconclusive = 0;
            json first;
            for (int i = 0; i < samples; ++i) {
                Point center = random_point(deep, rng);
                const std::int64_t q = r.lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(r.hi - r.lo + 1));
                const BallQuery ball = make_ball(c, k, std::move(center), q);
                const MassBounds m = mass_ball_bounds(deep, ball);
                const bool lower_ok = ball_bound_holds(m.lower, q, s);
                const bool upper_ok = ball_bound_holds(m.upper, q, s);
                if (!lower_ok && violations++ == 0)
                    first = {{"center", point_text(ball.center)}, {"q", q}, {"lower", to_string(m.lower)}};
                if (!upper_ok) ++inconclusive;
                csv << k << ',' << to_string(which) << ',' << q << ',' << point_text(ball.center) << ','
                    << to_string(m.lower) << ',' << to_string(m.upper) << ',' << (lower_ok ? 1 : 0) << ','
                    << (upper_ok ? 1 : 0) << '\n';
            }
            g["samples"] = samples;
            g["violations"] = violations;
            g["inconclusive"] = inconclusive;
            if (violations) g["first_violation"] = first;
            ok = ok && violations == 0;
            v["groups"].push_back(g);
        }
    }
    v["ok"] = ok;
    if (hard) hard_ok = hard_ok && ok;
    return v;
}

json check_energy(const Construction& c, double s, std::ostream& csv) {
    json v;
    v["hard"] = false;
    v["s"] = s;
    v["stages"] = json::array();
    csv << "k,pieces,cross,diagonal_count,diagonal_mass_sq\n";
    std::optional<double> prev, last;
    for (int k = std::max(0, c.depth() - 1); k <= c.depth(); ++k) {
        const Stage& st = c.stages[static_cast<std::size_t>(k)];
        json e{{"k", k}, {"pieces", st.pieces.size()}};
        if (st.pieces.size() > energy_piece_limit) {
            e["status"] = "skipped";
            e["reason"] = "more than " + std::to_string(energy_piece_limit) + " pieces";
            v["stages"].push_back(e);
            continue;
        }
        const EnergyReport r = energy(st, s);
        csv << k << ',' << st.pieces.size() << ',' << fmt_double(r.cross) << ',' << r.diagonal_count << ','
            << to_string(r.diagonal_mass_sq) << '\n';
        e["cross"] = r.cross;
        e["diagonal_count"] = r.diagonal_count;
        e["diagonal_mass_sq"] = to_string(r.diagonal_mass_sq);
        v["stages"].push_back(e);
        prev = last;
        last = r.cross;
    }
    if (prev && last && *prev > 0) v["relative_increase"] = *last / *prev - 1;
    return v;
}

json family_json(const PlaneFamily& f) {
    json j{{"d", f.d}, {"k", f.k}, {"provenance", f.provenance}};
    if (f.s) j["s"] = to_string(*f.s);
    if (f.m) j["m"] = *f.m;
    j["planes"] = json::array();
    for (const auto& p : f.planes) {
        json Y = json::array();
        for (std::size_t r = 0; r < p.Y.rows(); ++r) {
            json row = json::array();
            for (std::size_t col = 0; col < p.Y.cols(); ++col) row.push_back(to_string(p.Y(r, col)));
            Y.push_back(row);
        }
        json y0 = json::array();
        for (const auto& v : p.y0) y0.push_back(to_string(v));
        j["planes"].push_back({{"Y", Y}, {"y0", y0}});
    }
    return j;
}

[[noreturn]] void mismatch(const std::string& what) { throw Error(ErrorCode::ConfigMismatch, what); }

} // namespace

ExitCode exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::ConfigMismatch:
    case ErrorCode::ManifestIncomplete:
    case ErrorCode::InvalidDirection:
        return ExitCode::ConfigFailure;
    case ErrorCode::SampleNotInjective:
    case ErrorCode::InsufficientDepth:
    case ErrorCode::SlopeUndefined:
    case ErrorCode::LineNotInSchedule:
    case ErrorCode::CaseRangeError:
    case ErrorCode::InvalidExponent:
        return ExitCode::VerificationFailure;
    default:
        return ExitCode::ConstructionFailure;
    }
}

LineSchedule schedule_for(const RunConfig& config) {
    ScheduleOptions opts;
    opts.search_bound = config.search_bound;
    if (config.helpers) opts.candidates.push_back(*config.helpers);
    const int cycle = static_cast<int>(2 * config.d * config.lines.size());
    return build_schedule(config.lines, config.d, std::max(config.depth(), cycle), opts);
}

Construction run_construction(const RunConfig& config) {
    return construct(schedule_for(config), config.construction(), config.depth());
}

std::vector<StageCheck> verify_construction(const Construction& c) {
    std::vector<StageCheck> out;
    for (int k = 1; k <= c.depth(); ++k) {
        const Stage& st = c.stages[static_cast<std::size_t>(k)];
        if (auto f = check_ordering(st)) out.push_back({"ordering", k, *f});
        if (auto f = check_nesting(st, c.stages[static_cast<std::size_t>(k - 1)])) out.push_back({"nesting", k, *f});
        if (auto f = check_projection_equals_interval(st)) out.push_back({"projection", k, *f});
        const auto& cert = c.certificates[static_cast<std::size_t>(k - 1)];
        if (!cert.certified) out.push_back({"injectivity", k, "certificate not certified"});
    }
    if (auto f = check_persistence(c)) out.push_back({"persistence", c.depth(), *f});
    return out;
}

std::string to_string(Check c) {
    switch (c) {
    case Check::Recursion: return "recursion";
    case Check::Wk: return "wk";
    case Check::BoxDim: return "boxdim";
    case Check::Series: return "series";
    case Check::Balls: return "balls";
    case Check::Energy: return "energy";
    }
    return "";
}

std::set<Check> parse_checks(const std::string& list) {
    const std::vector<Check> all{Check::Recursion, Check::Wk, Check::BoxDim, Check::Series, Check::Balls, Check::Energy};
    std::set<Check> out;
    std::istringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        if (item == "all") {
            out.insert(all.begin(), all.end());
            continue;
        }
        auto it = std::find_if(all.begin(), all.end(), [&](Check c) { return to_string(c) == item; });
        if (it == all.end()) throw Error(ErrorCode::ConfigError, "unknown check " + item);
        out.insert(*it);
    }
    if (out.empty()) throw Error(ErrorCode::ConfigError, "no checks selected");
    return out;
}

CommandResult cmd_construct(const RunConfig& config, const fs::path& out) {
    const Construction c = run_construction(config);
    const auto failures = verify_construction(c);
    write_run(out, config, c, failures);
    if (!failures.empty())
        return {ExitCode::VerificationFailure,
                failures.front().name + " failed at stage " + std::to_string(failures.front().k) + ": " +
                    failures.front().detail};
    return {ExitCode::Ok, "built " + std::to_string(c.depth()) + " stages, " + c.deepest().count().get_str() +
                              " pieces at the deepest stage"};
}

CommandResult cmd_analyze(const fs::path& run_dir, const std::set<Check>& checks, std::optional<std::uint64_t> seed) {
    const Run run = load_run(run_dir);
    const Construction& c = run.construction;
    const fs::path dir = run_dir / "analysis";
    fs::create_directories(dir);
    json verdicts;
    verdicts["config_hash"] = hex64(config_hash(run.config));
    bool hard_ok = true;
    auto csv = [&](const char* name) { return std::ofstream(dir / name, std::ios::binary); };
    for (Check ch : checks) {
        switch (ch) {
        case Check::Recursion: {
            auto f = csv("recursion.csv");
            verdicts["recursion"] = check_recursion(c, f, hard_ok);
            break;
        }
        case Check::Wk: {
            auto f = csv("wk.csv");
            verdicts["wk"] = check_wk(c, run.config.wk_samples, f, hard_ok);
            break;
        }
        case Check::BoxDim: {
            auto f = csv("boxdim.csv");
            verdicts["boxdim"] = check_boxdim(c, f);
            break;
        }
        case Check::Series: {
            auto f = csv("series.csv");
            verdicts["series"] = check_series(c, f, hard_ok);
            break;
        }
        case Check::Balls: {
            auto f = csv("balls.csv");
            verdicts["balls"] = check_balls(c, run.config.ball_samples, seed.value_or(run.config.seed), f, hard_ok);
            break;
        }
        case Check::Energy: {
            auto f = csv("energy.csv");
            const double s = run.config.energy_s.value_or(static_cast<double>(c.schedule.d) - 1);
            verdicts["energy"] = check_energy(c, s, f);
            break;
        }
        }
    }
    verdicts["ok"] = hard_ok;
    write_json(dir / "verdicts.json", verdicts);
    if (!hard_ok) return {ExitCode::VerificationFailure, "a hard verdict failed; see " + (dir / "verdicts.json").string()};
    return {ExitCode::Ok, "verdicts written to " + (dir / "verdicts.json").string()};
}

CommandResult cmd_planes(const fs::path& run_dir, const std::string& mode) {
    const Run run = load_run(run_dir);
    const Construction& c = run.construction;
    const RunConfig& cfg = run.config;
    const fs::path dir = run_dir / ("planes_" + mode);
    const std::size_t D = c.schedule.d;
    const std::size_t k = cfg.plane_k;
    json report{{"mode", mode}, {"stage", c.depth()}};

    if (mode == "measure_zero" || mode == "dimension") {
        PlaneFamily family;
        if (mode == "measure_zero") {
            std::size_t d = cfg.plane_d;
            if (d == 0) {
                if ((D - 1) % (k + 1) != 0) mismatch("no plane dimension fits a stage in R^" + std::to_string(D));
                d = (D - 1) / (k + 1) + 1 + k;
            }
            if (d < k + 2 || (k + 1) * (d - 1 - k) + 1 != D)
                mismatch("measure_zero with d=" + std::to_string(d) + ", k=" + std::to_string(k) + " needs a stage in R^" +
                         std::to_string((k + 1) * (d - 1 - k) + 1) + ", the run is in R^" + std::to_string(D));
            family = measure_zero_family(c.deepest(), d, k, cfg.max_planes);
        } else {
            if (cfg.plane_d == 0) mismatch("dimension mode needs plane_d");
            const DimensionCase dc = dimension_case(cfg.plane_d, k, cfg.plane_s);
            if (dc.kind == DimensionCase::Kind::Template && dc.stage_dim() != D)
                mismatch("dimension s=" + to_string(cfg.plane_s) + " needs a stage in R^" + std::to_string(dc.stage_dim()) +
                         ", the run is in R^" + std::to_string(D));
            family = dimension_family(cfg.plane_d, k, cfg.plane_s, c.deepest(), cfg.max_planes);
        }
        const PairCheck pc = check_family(family);
        fs::create_directories(dir);
        write_json(dir / "family.json", family_json(family));
        report["planes"] = family.planes.size();
        report["pairs"] = pc.pairs;
        report["failures"] = pc.failures;
        report["first_failure"] = pc.first ? json::array({pc.first->first, pc.first->second}) : json(nullptr);
        report["ok"] = pc.failures == 0;
        write_json(dir / "report.json", report);
        if (pc.failures) return {ExitCode::VerificationFailure, std::to_string(pc.failures) + " plane pairs failed"};
        return {ExitCode::Ok, std::to_string(family.planes.size()) + " planes, " + std::to_string(pc.pairs) + " pairs verified"};
    }
    if (mode != "dual") throw Error(ErrorCode::ConfigError, "unknown mode " + mode);
    if (cfg.verticals.empty()) mismatch("dual mode needs verticals");
    for (const auto& x : cfg.verticals)
        if (x.size() + 1 != D) mismatch("verticals need " + std::to_string(D - 1) + " coordinates");

    const DualResult deep = dual_hyperplanes(c, c.depth(), cfg.verticals);
    fs::create_directories(dir);
    bool ok = true;
    report["verticals"] = json::array();
    std::ofstream sections(dir / "sections.csv", std::ios::binary);
    sections << "vertical_index,lo,hi\n";
    for (std::size_t i = 0; i < cfg.verticals.size(); ++i) {
        const auto& x = cfg.verticals[i];
        const Direction v = vertical_direction(x);
        const auto ks = occurrences_upto(c, v);
        json vj{{"vertical", point_text(x)}, {"direction", to_string(v)}};
        json stages = json::array();
        if (ks.empty()) {
            vj["status"] = "direction does not occur before the deepest stage";
            ok = false;
        }
        // Certified stages of this vertical: those whose line is its direction.
        for (int k2 : ks) {
            const SectionList sl = section_list(c.stages[static_cast<std::size_t>(k2)], x);
            json sj{{"k", k2}, {"intervals", sl.intervals.size()}, {"disjoint", !sl.overlap}};
            if (sl.overlap) ok = false;
            stages.push_back(sj);
        }
        vj["stages"] = stages;
        for (const auto& iv : deep.sections[i].intervals) sections << i << ',' << to_string(iv.lo) << ',' << to_string(iv.hi) << '\n';
        const auto series = occurrence_series(c, v);
        vj["series"] = series_json(series);
        try {
            vj["slope"] = dim_slope(series);
        } catch (const Error& e) {
            vj["slope"] = nullptr;
            vj["slope_reason"] = e.what();
        }
        report["verticals"].push_back(vj);
    }
    json hp;
    hp["d"] = D;
    hp["k"] = D - 1;
    hp["provenance"] = "dual: hyperplanes y = a.x + b from stage " + std::to_string(c.depth()) + " representatives";
    hp["planes"] = json::array();
    for (const auto& h : deep.hyperplanes) {
        json row = json::array();
        for (const auto& a : h.a) row.push_back(to_string(a));
        hp["planes"].push_back({{"Y", json::array({row})}, {"y0", json::array({to_string(h.b)})}});
    }
    write_json(dir / "family.json", hp);
    report["ok"] = ok;
    write_json(dir / "report.json", report);
    if (!ok) return {ExitCode::VerificationFailure, "a section list is not disjoint"};
    return {ExitCode::Ok, std::to_string(cfg.verticals.size()) + " verticals verified"};
}

CommandResult cmd_export(const fs::path& run_dir, int stage, const fs::path& out) {
    const Run run = load_run(run_dir);
    const Construction& c = run.construction;
    if (stage < 0 || stage > c.depth())
        throw Error(ErrorCode::ConfigError, "stage " + std::to_string(stage) + " outside 0.." + std::to_string(c.depth()));
    const Stage& st = c.stages[static_cast<std::size_t>(stage)];
    fs::path file = out;
    if (fs::is_directory(out) || out.extension().empty()) {
        fs::create_directories(out);
        char buf[48];
        std::snprintf(buf, sizeof buf, "stage_%03d_vertices.csv", stage);
        file = out / buf;
    }
    std::ofstream csv(file, std::ios::binary);
    csv << "global_id,vertex";
    for (std::size_t i = 0; i < c.schedule.d; ++i) csv << ",x" << i;
    csv << '\n';
    const Frame frame = Frame::of(st.pieces.front());
    for (const auto& p : st.pieces) {
        const auto vs = frame.vertices(p);
        for (std::size_t v = 0; v < vs.size(); ++v) {
            csv << p.global_id << ',' << v;
            for (const auto& x : vs[v]) csv << ',' << to_string(x);
            csv << '\n';
        }
    }
    return {ExitCode::Ok, "wrote " + file.string()};
}

} // namespace vblind
