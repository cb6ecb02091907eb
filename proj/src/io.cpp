#include "vblind/error.hpp"
#include "vblind/pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vblind {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string stage_file(int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "stages/stage_%03d.jsonl", k);
    return buf;
}

[[noreturn]] void incomplete(const std::string& what) { throw Error(ErrorCode::ManifestIncomplete, what); }

json schedule_json(const LineSchedule& s) {
    json j;
    j["d"] = s.d;
    j["horizon"] = s.horizon;
    j["user_lines"] = json::array();
    for (const auto& l : s.user_lines) j["user_lines"].push_back(to_string(l));
    j["helpers"]["hyperplane"] = json::array();
    for (const auto& h : s.helpers.hyperplane) j["helpers"]["hyperplane"].push_back(to_string(h));
    j["helpers"]["transversal"] = to_string(s.helpers.transversal);
    j["axis_order"] = s.axis_order;
    j["stages"] = json::array();
    for (int k = 1; k <= s.horizon; ++k) {
        const auto& e = s.at(k);
        json row;
        row["k"] = k;
        row["line"] = to_string(*e.line);
        row["role"] = e.is_user() ? "user" : (e.helper_index == 0 ? "transversal" : "helper");
        row["line_index"] = line_index(s, k);
        row["dropped"] = to_string(s.dropped(k));
        row["cos_sq"] = to_string(s.angle(k).cos_sq);
        row["alpha"] = s.angle(k).alpha;
        j["stages"].push_back(row);
    }
    return j;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    return out;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) incomplete("missing " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

void write_stage_jsonl(std::ostream& out, const Stage& stage) {
    for (const auto& p : stage.pieces) {
        json j;
        j["global_id"] = p.global_id;
        j["parent_id"] = p.parent_id;
        j["stage"] = p.stage;
        j["h"] = p.h.get_str();
        j["j"] = p.j;
        j["mass"] = to_string(p.mass);
        j["slabs"] = json::array();
        for (const auto& s : p.slabs)
            j["slabs"].push_back({{"direction", to_string(*s.direction)}, {"lo", to_string(s.lo)}, {"hi", to_string(s.hi)}});
        out << j.dump() << '\n';
    }
}

void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& ledger) {
    out << "k,line_index,n_k,a_k,count,m_k,min_children,max_children\n";
    for (const auto& r : ledger)
        out << r.k << ',' << r.line_index << ',' << r.n << ',' << r.a << ',' << r.count.get_str() << ','
            << fmt_double(r.m) << ',' << r.min_children << ',' << r.max_children << '\n';
}

void write_run(const fs::path& dir, const RunConfig& config, const Construction& c,
               const std::vector<StageCheck>& failures) {
    fs::create_directories(dir / "stages");
    json m;
    m["tool"] = "vblind";
    m["tool_version"] = tool_version;
    m["config_hash"] = hex64(config_hash(config));
    m["config_text"] = canonical_text(config);
    m["depth"] = c.depth();
    m["schedule"] = schedule_json(c.schedule);
    m["plan"] = json::array();
    for (const auto& p : c.plans) m["plan"].push_back({{"k", p.k}, {"n", p.n}, {"a", p.a}, {"steered", p.steered}});
    m["ledger"] = json::array();
    for (const auto& r : c.ledger)
        m["ledger"].push_back({{"k", r.k},
                               {"line_index", r.line_index},
                               {"n", r.n},
                               {"a", r.a},
                               {"count", r.count.get_str()},
                               {"m", fmt_double(r.m)},
                               {"min_children", r.min_children},
                               {"max_children", r.max_children}});
    m["certificates"] = json::array();
    for (const auto& cert : c.certificates) {
        json j{{"k", cert.k}, {"line", to_string(*cert.line)}, {"certified", cert.certified}};
        j["violation"] = cert.violation ? json::array({cert.violation->first, cert.violation->second}) : json(nullptr);
        m["certificates"].push_back(j);
    }
    m["checks"] = json::array();
    for (const auto& f : failures) m["checks"].push_back({{"check", f.name}, {"k", f.k}, {"detail", f.detail}});
    m["files"]["ledger"] = "ledger.csv";
    m["files"]["stages"] = json::array();
    for (int k = 0; k <= c.depth(); ++k) m["files"]["stages"].push_back(stage_file(k));

    for (int k = 0; k <= c.depth(); ++k) {
        std::ofstream out(dir / stage_file(k), std::ios::binary);
        write_stage_jsonl(out, c.stages[static_cast<std::size_t>(k)]);
    }
    {
        std::ofstream out(dir / "ledger.csv", std::ios::binary);
        write_ledger_csv(out, c.ledger);
    }
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
}

Run load_run(const fs::path& dir) {
    json m;
    try {
        m = json::parse(read_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        incomplete(std::string("manifest.json: ") + e.what());
    }
    Run run;
    try {
        run.config = parse_config(m.at("config_text").get<std::string>());
        if (hex64(config_hash(run.config)) != m.at("config_hash").get<std::string>())
            incomplete("config hash does not match the recorded configuration");
        const int depth = m.at("depth").get<int>();
        const LineSchedule schedule = schedule_for(run.config);
        if (depth < 1 || depth > schedule.horizon) incomplete("depth outside the schedule");

        Construction& c = run.construction;
        c.schedule = schedule;
        c.config = run.config.construction();
        for (const auto& p : m.at("plan")) {
            StagePlan sp;
            sp.k = p.at("k").get<int>();
            sp.n = p.at("n").get<std::int64_t>();
            sp.a = p.at("a").get<std::int64_t>();
            sp.steered = p.at("steered").get<bool>();
            c.plans.push_back(sp);
        }
        if (static_cast<int>(c.plans.size()) != depth) incomplete("plan has the wrong number of stages");

        std::map<Direction, DirectionRef> refs;
        const Stage cube = initial_stage(schedule);
        for (const auto& s : cube.pieces.front().slabs) refs.emplace(*s.direction, s.direction);
        for (int k = 1; k <= depth; ++k) refs.emplace(*schedule.at(k).line, schedule.at(k).line);

        for (int k = 0; k <= depth; ++k) {
            Stage st;
            st.k = k;
            if (k >= 1) {
                st.line = schedule.at(k).line;
                st.n = c.plans[static_cast<std::size_t>(k - 1)].n;
                st.a = c.plans[static_cast<std::size_t>(k - 1)].a;
            }
            std::istringstream in(read_file(dir / stage_file(k)));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const json j = json::parse(line);
                Piece p;
                p.global_id = j.at("global_id").get<std::int64_t>();
                p.parent_id = j.at("parent_id").get<std::int64_t>();
                p.stage = j.at("stage").get<int>();
                p.h = Integer(j.at("h").get<std::string>());
                p.j = j.at("j").get<std::int64_t>();
                p.mass = parse_rational(j.at("mass").get<std::string>());
                for (const auto& s : j.at("slabs")) {
                    const Direction dir_v = parse_direction(s.at("direction").get<std::string>());
                    auto it = refs.find(dir_v);
                    if (it == refs.end()) incomplete("stage " + std::to_string(k) + " uses an unscheduled direction");
                    p.slabs.push_back({it->second, parse_dyadic(s.at("lo").get<std::string>()),
                                       parse_dyadic(s.at("hi").get<std::string>())});
                }
                if (p.stage != k || p.dim() != schedule.d) incomplete("malformed piece in stage " + std::to_string(k));
                st.pieces.push_back(std::move(p));
            }
            if (st.pieces.empty()) incomplete("stage " + std::to_string(k) + " has no pieces");
            st.id_base = st.pieces.front().global_id;
            for (std::size_t i = 0; i < st.pieces.size(); ++i)
                if (st.pieces[i].global_id != st.id_base + static_cast<std::int64_t>(i))
                    incomplete("stage " + std::to_string(k) + " ids are not consecutive");
            if (k >= 1)
                for (const auto& p : st.pieces) ++st.per_parent_counts[p.parent_id];
            c.stages.push_back(std::move(st));
        }

        // Ledger rows must agree with the stage files.
        std::istringstream in(read_file(dir / "ledger.csv"));
        std::string line;
        std::getline(in, line);
        if (line != "k,line_index,n_k,a_k,count,m_k,min_children,max_children") incomplete("ledger.csv header");
        for (int k = 1; k <= depth; ++k) {
            if (!std::getline(in, line)) incomplete("ledger.csv ends before stage " + std::to_string(k));
            const auto cells = split_csv(line);
            const Stage& st = c.stages[static_cast<std::size_t>(k)];
            LedgerRow row;
            row.k = k;
            row.line_index = line_index(schedule, k);
            row.n = st.n;
            row.a = st.a;
            row.count = st.count();
            row.m = st.m();
            row.min_children = std::numeric_limits<std::int64_t>::max();
            for (const auto& [pid, cnt] : st.per_parent_counts) {
                row.min_children = std::min(row.min_children, cnt);
                row.max_children = std::max(row.max_children, cnt);
            }
            std::ostringstream expect;
            write_ledger_csv(expect, {row});
            std::string expected_line = expect.str();
            expected_line = expected_line.substr(expected_line.find('\n') + 1);
            expected_line.pop_back();
            if (cells.size() != 8 || line != expected_line)
                incomplete("ledger.csv row " + std::to_string(k) + " disagrees with the stage files");
            c.ledger.push_back(row);
        }
        if (std::getline(in, line) && !line.empty()) incomplete("ledger.csv has extra rows");
        for (int k = 1; k <= depth; ++k) c.certificates.push_back(certify_injectivity(c.stages[static_cast<std::size_t>(k)]));
    } catch (const json::exception& e) {
        incomplete(std::string("manifest: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ManifestIncomplete) throw;
        incomplete(e.what());
    } catch (const std::exception& e) {
        incomplete(e.what());
    }
    return run;
}

} // namespace vblind
