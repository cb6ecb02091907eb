#include "vblind/config.hpp"

#include "vblind/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vblind {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::ConfigError, key + ": expected a boolean, got '" + v + "'");
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        if constexpr (std::is_unsigned_v<T>)
            if (x < 0) throw std::invalid_argument(v);
        return static_cast<T>(x);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, key + ": expected an integer, got '" + v + "'");
    }
}

Rational parse_rat(const std::string& key, const std::string& v) {
    try {
        return parse_rational(v);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, key + ": expected a rational p/q, got '" + v + "'");
    }
}

// Accepts "p/q" or a decimal literal.
double parse_real(const std::string& key, const std::string& v) {
    if (v.find('/') != std::string::npos) return parse_rat(key, v).get_d();
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, key + ": expected a number, got '" + v + "'");
    }
}

std::string vec_text(const std::vector<Rational>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
    return s;
}

std::string dir_text(const Direction& v) {
    std::string s;
    for (std::size_t j = 0; j < v.dim(); ++j) s += (j ? "," : "") + v[j].get_str();
    return s;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::vector<Rational> parse_vector(const std::string& text) {
    std::string s = trim(text);
    if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    std::vector<Rational> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_rational(part));
    return out;
}

Direction parse_direction(const std::string& text) {
    std::vector<Integer> raw;
    for (const auto& v : parse_vector(text)) {
        if (v.get_den() != 1) throw Error(ErrorCode::InvalidDirection, "direction components must be integers");
        raw.push_back(v.get_num());
    }
    return Direction::canonicalize(raw);
}

int RunConfig::depth() const {
    return stages ? *stages : cycles * static_cast<int>(2 * d * lines.size());
}

ConstructionConfig RunConfig::construction() const {
    ConstructionConfig c;
    c.t = t;
    c.option = option;
    c.plan = plan;
    if (!budget_set) c.plan.budget_bits = std::log2(static_cast<double>(max_pieces));
    c.limits.max_pieces = max_pieces;
    return c;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::map<std::string, std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (!seen.emplace(key, v).second) throw Error(ErrorCode::ConfigError, "duplicate key " + key);
        try {
            if (key == "d") c.d = parse_int<std::size_t>(key, v);
            else if (key == "t") c.t = parse_rat(key, v);
            else if (key == "option") c.option = parse_option(v);
            else if (key == "lines") {
                c.lines.clear();
                for (const auto& part : split(v, ';')) c.lines.push_back(parse_direction(part));
            } else if (key == "cycles") c.cycles = parse_int<int>(key, v);
            else if (key == "stages") c.stages = parse_int<int>(key, v);
            else if (key == "growth") c.plan.growth = parse_rat(key, v);
            else if (key == "max_pieces") c.max_pieces = parse_int<std::uint64_t>(key, v);
            else if (key == "case_partition") c.plan.case_partition = parse_bool(key, v);
            else if (key == "band") c.plan.band = parse_rat(key, v);
            else if (key == "steer") c.plan.steer = parse_bool(key, v);
            else if (key == "budget_bits") {
                c.plan.budget_bits = parse_real(key, v);
                c.budget_set = true;
            } else if (key == "ramp") c.plan.ramp = parse_int<int>(key, v);
            else if (key == "ramp_ratio") c.plan.ramp_ratio = parse_bool(key, v);
            else if (key == "n_floor") c.plan.n_floor = parse_int<std::int64_t>(key, v);
            else if (key == "helper_hyperplane") {
                if (!c.helpers) c.helpers.emplace();
                c.helpers->hyperplane.clear();
                for (const auto& part : split(v, ';')) c.helpers->hyperplane.push_back(parse_direction(part));
            } else if (key == "helper_transversal") {
                if (!c.helpers) c.helpers.emplace();
                c.helpers->transversal = parse_direction(v);
            } else if (key == "search_bound") c.search_bound = parse_int<int>(key, v);
            else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
            else if (key == "ball_samples") c.ball_samples = parse_int<int>(key, v);
            else if (key == "wk_samples") c.wk_samples = parse_int<int>(key, v);
            else if (key == "energy_s") c.energy_s = parse_real(key, v);
            else if (key == "plane_d") c.plane_d = parse_int<std::size_t>(key, v);
            else if (key == "plane_k") c.plane_k = parse_int<std::size_t>(key, v);
            else if (key == "plane_s") c.plane_s = parse_rat(key, v);
            else if (key == "verticals") {
                c.verticals.clear();
                for (const auto& part : split(v, ';')) c.verticals.push_back(parse_vector(part));
            } else if (key == "max_planes") c.max_planes = parse_int<std::size_t>(key, v);
            else throw Error(ErrorCode::ConfigError, "unknown key " + key);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ConfigError) throw;
            throw Error(ErrorCode::ConfigError, key + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::ConfigError, key + ": " + e.what());
        }
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& c) {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
    if (c.d < 2) fail("d must be at least 2");
    if (c.t < 0 || c.t > 1) fail("t must lie in [0,1]");
    if (c.option == Option::Capacity && c.t >= 1) fail("option capacity requires t < 1");
    if (c.option == Option::MeasureZero && c.t <= 0) fail("option measure_zero requires t > 0");
    if (c.lines.empty()) fail("at least one line is required");
    for (const auto& l : c.lines)
        if (l.dim() != c.d) fail("line " + to_string(l) + " is not in R^" + std::to_string(c.d));
    if (c.helpers) {
        if (c.helpers->hyperplane.size() + 1 != c.d || c.helpers->transversal.dim() != c.d)
            fail("helper_hyperplane needs d-1 vectors and helper_transversal one vector, all in R^d");
        for (const auto& h : c.helpers->hyperplane)
            if (h.dim() != c.d) fail("helper vector " + to_string(h) + " is not in R^" + std::to_string(c.d));
    }
    if (c.cycles < 1) fail("cycles must be positive");
    if (c.stages && *c.stages < 1) fail("stages must be positive");
    if (c.plan.growth < 1) fail("growth must be at least 1");
    if (c.max_pieces < 1) fail("max_pieces must be positive");
    if (c.plan.band <= 0) fail("band must be positive");
    if (c.ball_samples < 0 || c.wk_samples < 0) fail("sample counts must be non-negative");
    if (c.energy_s && !(*c.energy_s > 0)) fail("energy_s must be positive");
}

std::string canonical_text(const RunConfig& c) {
    std::ostringstream o;
    o << "d=" << c.d << "\n";
    o << "t=" << to_string(c.t) << "\n";
    o << "option=" << to_string(c.option) << "\n";
    o << "lines=";
    for (std::size_t i = 0; i < c.lines.size(); ++i) o << (i ? ";" : "") << dir_text(c.lines[i]);
    o << "\n";
    o << "cycles=" << c.cycles << "\n";
    if (c.stages) o << "stages=" << *c.stages << "\n";
    o << "growth=" << to_string(c.plan.growth) << "\n";
    o << "max_pieces=" << c.max_pieces << "\n";
    o << "case_partition=" << (c.plan.case_partition ? "true" : "false") << "\n";
    o << "band=" << to_string(c.plan.band) << "\n";
    o << "steer=" << (c.plan.steer ? "true" : "false") << "\n";
    if (c.budget_set) o << "budget_bits=" << fmt_double(c.plan.budget_bits) << "\n";
    o << "ramp=" << c.plan.ramp << "\n";
    o << "ramp_ratio=" << (c.plan.ramp_ratio ? "true" : "false") << "\n";
    o << "n_floor=" << c.plan.n_floor << "\n";
    if (c.helpers) {
        o << "helper_hyperplane=";
        for (std::size_t i = 0; i < c.helpers->hyperplane.size(); ++i) o << (i ? ";" : "") << dir_text(c.helpers->hyperplane[i]);
        o << "\nhelper_transversal=" << dir_text(c.helpers->transversal) << "\n";
    }
    o << "search_bound=" << c.search_bound << "\n";
    o << "seed=" << c.seed << "\n";
    o << "ball_samples=" << c.ball_samples << "\n";
    o << "wk_samples=" << c.wk_samples << "\n";
    if (c.energy_s) o << "energy_s=" << fmt_double(*c.energy_s) << "\n";
    o << "plane_d=" << c.plane_d << "\n";
    o << "plane_k=" << c.plane_k << "\n";
    o << "plane_s=" << to_string(c.plane_s) << "\n";
    if (!c.verticals.empty()) {
        o << "verticals=";
        for (std::size_t i = 0; i < c.verticals.size(); ++i) o << (i ? ";" : "") << vec_text(c.verticals[i]);
        o << "\n";
    }
    o << "max_planes=" << c.max_planes << "\n";
    return o.str();
}

std::uint64_t config_hash(const RunConfig& c) {
    // FNV-1a, 64 bit
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canonical_text(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
    return s;
}

} // namespace vblind
