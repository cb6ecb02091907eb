#include "vblind/error.hpp"
#include "vblind/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <functional>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

using namespace vblind;
namespace fs = std::filesystem;

namespace {

const char* small_config = R"(# two-dimensional capacity run
d = 2
t = 0
option = capacity
lines = 1,2
growth = 3/2
case_partition = false
ramp_ratio = false
stages = 6
max_pieces = 4096
ball_samples = 50
wk_samples = 8
)";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("vblind_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidInput;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(VBLIND_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

} // namespace

TEST(Config, ParsesAndRoundTrips) {
    const RunConfig c = parse_config(small_config);
    EXPECT_EQ(c.d, 2u);
    EXPECT_EQ(c.lines.size(), 1u);
    EXPECT_EQ(c.plan.growth, Rational(3, 2));
    EXPECT_EQ(c.depth(), 6);
    const RunConfig again = parse_config(canonical_text(c));
    EXPECT_EQ(canonical_text(again), canonical_text(c));
    EXPECT_EQ(config_hash(again), config_hash(c));
    EXPECT_EQ(hex64(config_hash(c)).size(), 16u);
}

TEST(Config, Rejections) {
    EXPECT_EQ(code_of([] { parse_config("d = 2\nt = 0\noption = measure_zero\nlines = 1,2\n"); }),
              ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { parse_config("d = 2\nt = 1\noption = capacity\nlines = 1,2\n"); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { parse_config("d = 2\nlines = 1,2\nd = 3\n"); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { parse_config("d = 2\nlines = 1,2\ncolour = red\n"); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { parse_config("d = 2\nlines = 1,2,3\n"); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { parse_config("d = 2\nlines = 0,0\n"); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { parse_config("d = 2\nlines = 1,2\ngrowth = x\n"); }), ErrorCode::ConfigError);
}

TEST(Pipeline, PieceCapAbortNamesStage) {
    RunConfig c = parse_config("d = 2\nlines = 1,2\nmax_pieces = 10\n");
    try {
        run_construction(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PieceCapExceeded);
        EXPECT_NE(std::string(e.what()).find("stage "), std::string::npos) << e.what();
    }
}

TEST(Pipeline, WriteLoadRoundTrip) {
    const RunConfig c = parse_config(small_config);
    const fs::path dir = scratch("roundtrip");
    ASSERT_EQ(cmd_construct(c, dir).code, ExitCode::Ok);
    const vblind::Run run = load_run(dir);
    const Construction direct = run_construction(c);
    ASSERT_EQ(run.construction.depth(), direct.depth());
    for (int k = 0; k <= direct.depth(); ++k) {
        const auto& a = run.construction.stages[static_cast<std::size_t>(k)].pieces;
        const auto& b = direct.stages[static_cast<std::size_t>(k)].pieces;
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].mass, b[i].mass);
            EXPECT_EQ(a[i].h, b[i].h);
            for (std::size_t s = 0; s < a[i].dim(); ++s) {
                EXPECT_EQ(a[i].slabs[s].lo, b[i].slabs[s].lo);
                EXPECT_EQ(*a[i].slabs[s].direction, *b[i].slabs[s].direction);
            }
        }
    }
    EXPECT_TRUE(verify_construction(run.construction).empty());
    fs::remove_all(dir);
}

TEST(Pipeline, CorruptedLedgerRejected) {
    const RunConfig c = parse_config(small_config);
    const fs::path dir = scratch("corrupt");
    ASSERT_EQ(cmd_construct(c, dir).code, ExitCode::Ok);
    std::string ledger = slurp(dir / "ledger.csv");
    const auto pos = ledger.find('\n', ledger.find('\n') + 1) + 1; // third line
    const auto comma = ledger.find(',', ledger.find(',', ledger.find(',', ledger.find(',', pos) + 1) + 1) + 1);
    ledger.insert(comma + 1, "1");
    write_text(dir / "ledger.csv", ledger);
    EXPECT_EQ(code_of([&] { load_run(dir); }), ErrorCode::ManifestIncomplete);
    EXPECT_EQ(code_of([&] { cmd_analyze(dir, parse_checks("recursion"), std::nullopt); }),
              ErrorCode::ManifestIncomplete);
    fs::remove(dir / "stages" / "stage_002.jsonl");
    EXPECT_EQ(code_of([&] { load_run(dir); }), ErrorCode::ManifestIncomplete);
    fs::remove_all(dir);
}

TEST(Pipeline, Deterministic) {
    const RunConfig c = parse_config(small_config);
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    ASSERT_EQ(cmd_construct(c, a).code, ExitCode::Ok);
    ASSERT_EQ(cmd_construct(c, b).code, ExitCode::Ok);
    EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
    EXPECT_EQ(slurp(a / "ledger.csv"), slurp(b / "ledger.csv"));
    EXPECT_EQ(slurp(a / "stages" / "stage_006.jsonl"), slurp(b / "stages" / "stage_006.jsonl"));
    const auto checks = parse_checks("recursion,wk,boxdim,series,balls");
    cmd_analyze(a, checks, 42);
    cmd_analyze(b, checks, 42);
    EXPECT_EQ(slurp(a / "analysis" / "verdicts.json"), slurp(b / "analysis" / "verdicts.json"));
    EXPECT_EQ(slurp(a / "analysis" / "balls.csv"), slurp(b / "analysis" / "balls.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Pipeline, Checks) {
    EXPECT_EQ(parse_checks("all").size(), 6u);
    EXPECT_EQ(parse_checks("wk,balls").size(), 2u);
    EXPECT_THROW(parse_checks("wk,nope"), Error);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    write_text(dir / "bad.cfg", "d = 2\nt = 0\noption = measure_zero\nlines = 1,2\n");
    EXPECT_EQ(run_cli("construct --config " + (dir / "bad.cfg").string() + " --out " + (dir / "bad").string()), 2);
    EXPECT_FALSE(fs::exists(dir / "bad" / "manifest.json"));

    write_text(dir / "cap.cfg", "d = 2\nlines = 1,2\nmax_pieces = 10\n");
    EXPECT_EQ(run_cli("construct --config " + (dir / "cap.cfg").string() + " --out " + (dir / "cap").string()), 3);

    write_text(dir / "ok.cfg", std::string(small_config) + "plane_d = 3\nplane_k = 1\nplane_s = 0\n");
    const std::string run = (dir / "ok").string();
    EXPECT_EQ(run_cli("construct --config " + (dir / "ok.cfg").string() + " --out " + run), 0);
    EXPECT_EQ(run_cli("analyze --out " + run + " --checks recursion,wk"), 0);
    EXPECT_TRUE(fs::exists(dir / "ok" / "analysis" / "verdicts.json"));
    EXPECT_EQ(run_cli("planes --out " + run + " --mode dimension"), 0);
    const std::string family = slurp(dir / "ok" / "planes_dimension" / "family.json");
    EXPECT_NE(family.find("\"planes\""), std::string::npos);
    EXPECT_EQ(run_cli("export --out " + run + " --stage 2"), 0);
    EXPECT_TRUE(fs::exists(dir / "ok" / "stage_002_vertices.csv"));
    EXPECT_EQ(run_cli("export --out " + run + " --stage 99"), 2);
    EXPECT_EQ(run_cli("analyze --out " + (dir / "missing").string()), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    fs::remove_all(dir);
}

TEST(Cli, MeasureZeroBeforeFullCycle) {
    const fs::path dir = scratch("early");
    fs::create_directories(dir);
    write_text(dir / "mz.cfg",
               "d = 3\nt = 1\noption = measure_zero\nlines = 1,0,0;0,1,0\ngrowth = 3/2\ncase_partition = false\n"
               "ramp_ratio = false\nstages = 2\nplane_k = 1\n");
    const std::string run = (dir / "run").string();
    ASSERT_EQ(run_cli("construct --config " + (dir / "mz.cfg").string() + " --out " + run), 0);
    EXPECT_EQ(run_cli("planes --out " + run + " --mode measure_zero"), 4);
    fs::remove_all(dir);
}
