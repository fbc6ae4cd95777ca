#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

#include "mixsteady/commands.hpp"

using namespace mixsteady;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mixsteady_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const char* kSmall = R"(# small forced problem
[grid]
nx = 12
ny = 12
[continuation]
M = 50
lambda_steps = 3
delta_schedule = 0.1, 0.03
[force]
preset = fourier
amplitude = 0.01
[theta]
preset = fourier
base = 1
amplitude = 0.01
)";

}  // namespace

TEST_SUITE("cli_io") {

TEST_CASE("shortest decimal text round-trips every double") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20000; ++t) {
        std::uint64_t bits = rng();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_double("+2.5") == 2.5);
    CHECK_THROWS_AS(parse_double("1.0x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}

TEST_CASE("config grammar errors carry line and column") {
    try {
        parse_config("[grid]\nnx 12\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(parse_config("nx = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 16\nnx = 32\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[grid\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx =\n"), ParseError);
}

TEST_CASE("validation collects every violation") {
    try {
        parse_config("[mixture]\ngamma = 0.5\nbogus = 1\n[continuation]\ndelta_schedule = 0.01, 0.1\n[grid]\nnx = abc\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        bool gamma = false, unknown = false, sched = false, nx = false;
        for (const auto& v : e.violations()) {
            gamma |= v.field == "gamma" && v.constraint == "> 1 required";
            unknown |= v.field == "mixture.bogus";
            sched |= v.field == "delta_schedule";
            nx |= v.field == "grid.nx";
        }
        CHECK(gamma);
        CHECK(unknown);
        CHECK(sched);
        CHECK(nx);
    }
    CHECK_THROWS_AS(parse_config("[theta]\nbase = 0.5\namplitude = 0.6\npreset = fourier\n"), ValidationError);
}

TEST_CASE("shipped configs load and canonical text reproduces the hash") {
    for (const char* name : {"smoke.cfg", "trivial.cfg"}) {
        const auto cfg = load_config(std::string(MIXSTEADY_SOURCE_DIR) + "/configs/" + name);
        const auto again = parse_config(cfg.canonical());
        CHECK(again.hash() == cfg.hash());
        CHECK(again.canonical() == cfg.canonical());
        CHECK(cfg.hash().size() == 64);
    }
    const auto smoke = load_config(std::string(MIXSTEADY_SOURCE_DIR) + "/configs/smoke.cfg");
    CHECK(smoke.grid.nx == 64);
    CHECK(smoke.continuation.delta_schedule.size() == 5);
}

TEST_CASE("presets evaluate the documented formulas") {
    auto cfg = parse_config(
        "[grid]\nnx = 8\nny = 8\n[force]\npreset = gaussian\namplitude = 2\nx0 = 0.5\ny0 = 0.5\nwidth = 0.25\n"
        "angle = 0\n[theta]\npreset = fourier\nbase = 2\namplitude = 0.5\nkx = 1\nky = 0\n");
    const auto d = build_problem_data(cfg);
    const GridSpec& g = cfg.grid;
    CHECK(d.force.x[g.index(4, 4)] == doctest::Approx(2.0));
    CHECK(d.force.y[g.index(4, 4)] == doctest::Approx(0.0));
    CHECK(d.force.x[g.index(0, 4)] == doctest::Approx(2.0 * std::exp(-0.25 / (2 * 0.0625))));
    CHECK(d.Theta[Side::Left][3] == doctest::Approx(2.5));
    CHECK(d.Theta[Side::Right][3] == doctest::Approx(1.5));
}

TEST_CASE("csv data sources") {
    const auto dir = scratch("csvdata");
    GridSpec g{1.0, 1.0, 8, 8};
    VectorField f(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) f.x[p] = 0.001 * static_cast<double>(p);
    write_field_csv((dir / "force.csv").string(), FileHeader{"none", 0, 0, g}, {"f_x", "f_y"}, {&f.x, &f.y});
    write_boundary_csv((dir / "theta.csv").string(), FileHeader{"none", 0, 0, g}, BoundaryFlux::constant(g, 1.25));
    put(dir / "c.cfg", "[grid]\nnx = 8\nny = 8\n[force]\npreset = csv\npath = force.csv\n[theta]\npreset = csv\npath = theta.csv\n");
    const auto cfg = load_config((dir / "c.cfg").string());
    const auto d = build_problem_data(cfg);
    CHECK(d.force.x == f.x);
    CHECK(d.Theta[Side::Top][2] == 1.25);
}

TEST_CASE("field files round-trip exactly and reject bad input") {
    const auto dir = scratch("roundtrip");
    GridSpec g{1.0, 2.0, 10, 9};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.1, 1.0);
    PhysicalState s;
    s.grid = g;
    s.M = 123.0;
    s.r.resize(g.size());
    s.u = VectorField(g.size());
    s.theta.resize(g.size());
    s.Y.assign(3, ScalarField(g.size()));
    for (std::size_t p = 0; p < g.size(); ++p) {
        s.r[p] = U(rng) - 0.5;
        s.u.x[p] = U(rng) * 1e-7;
        s.u.y[p] = -U(rng);
        s.theta[p] = U(rng);
        for (auto& y : s.Y) y[p] = U(rng) / 3;
    }
    const FileHeader h{"abc", 123.0, 0.01, g};
    write_state(dir.string(), h, s);
    const auto back = read_state(dir.string());
    CHECK(back.header.config_hash == "abc");
    CHECK(back.header.delta == 0.01);
    CHECK(back.state.r == s.r);
    CHECK(back.state.u.x == s.u.x);
    CHECK(back.state.theta == s.theta);
    CHECK(back.state.Y == s.Y);

    // Positivity violation names the node.
    std::string t = slurp(dir / "theta.csv");
    const auto pos = t.find("\n3,2,");
    REQUIRE(pos != std::string::npos);
    const auto end = t.find('\n', pos + 1);
    t.replace(pos, end - pos, "\n3,2,0.3,0.4444444444444444,-1");
    put(dir / "theta.csv", t);
    try {
        read_state(dir.string());
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("(i=3, j=2)") != std::string::npos);
    }

    put(dir / "r.csv", "# mixsteady-field/2 version=0\ni,j,x,y,r\n");
    CHECK_THROWS_AS(read_state(dir.string()), DataError);
}

TEST_CASE("exit codes are distinct per failure kind") {
    std::set<int> codes{exit_code::ok, exit_code::internal, exit_code::below_min_density, exit_code::parse,
                        exit_code::validation, exit_code::data, exit_code::usage};
    for (auto k : {SolverFailure::NonConvergence, SolverFailure::DensityExit, SolverFailure::SingularLinearSystem,
                   SolverFailure::OverflowGuard})
        CHECK(codes.insert(exit_code_for(k)).second);
    CHECK(exit_code_for(SolverFailure::MaxIterations) == exit_code_for(SolverFailure::NonConvergence));
}

TEST_CASE("solve, check and sweep on a small problem") {
    const auto dir = scratch("commands");
    put(dir / "small.cfg", kSmall);
    std::ostringstream log;
    CommandOptions o{(dir / "small.cfg").string(), (dir / "a").string(), 1, 0};
    REQUIRE(cmd_solve(o, log) == exit_code::ok);
    o.out = (dir / "b").string();
    REQUIRE(cmd_solve(o, log) == exit_code::ok);
    for (const auto& e : fs::directory_iterator(dir / "a"))
        CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));

    o.out = (dir / "check").string();
    REQUIRE(cmd_check(o, (dir / "a").string(), log) == exit_code::ok);
    CHECK(slurp(dir / "check" / "diagnostics.json") == slurp(dir / "a" / "diagnostics.json"));

    // The saved canonical config is accepted by check as well.
    CommandOptions oc{(dir / "a" / "config.cfg").string(), (dir / "check2").string(), 1, 0};
    REQUIRE(cmd_check(oc, (dir / "a").string(), log) == exit_code::ok);
    CHECK(slurp(dir / "check2" / "diagnostics.json") == slurp(dir / "a" / "diagnostics.json"));

    // A single-value sweep reproduces the solve.
    o.out = (dir / "sweep1").string();
    REQUIRE(cmd_sweep(o, "M", {50.0}, log) == exit_code::ok);
    for (const auto& e : fs::directory_iterator(dir / "a"))
        CHECK(slurp(e.path()) == slurp(dir / "sweep1" / "run_0" / e.path().filename()));

    // Parallel and chained sweeps agree.
    o.out = (dir / "s1").string();
    REQUIRE(cmd_sweep(o, "delta", {0.1, 0.03, 0.01}, log) == exit_code::ok);
    o.out = (dir / "s2").string();
    o.jobs = 3;
    REQUIRE(cmd_sweep(o, "delta", {0.1, 0.03, 0.01}, log) == exit_code::ok);
    CHECK(slurp(dir / "s1" / "ledger.csv") == slurp(dir / "s2" / "ledger.csv"));
    const std::string ledger = slurp(dir / "s1" / "ledger.csv");
    CHECK(ledger.rfind("# mixsteady-ledger/1", 0) == 0);
    CHECK(ledger.find("# slope log(mass_defect_l2) vs log(delta)") != std::string::npos);
}

TEST_CASE("command error paths") {
    const auto dir = scratch("errors");
    std::ostringstream log;
    put(dir / "low.cfg", "[continuation]\nM = 5\nM_min = 10\n");
    CommandOptions o{(dir / "low.cfg").string(), (dir / "out").string(), 1, 0};
    CHECK(cmd_solve(o, log) == exit_code::below_min_density);
    CHECK_FALSE(fs::exists(dir / "out" / "r.csv"));

    put(dir / "parse.cfg", "[grid]\nnx\n");
    o.config = (dir / "parse.cfg").string();
    CHECK(cmd_solve(o, log) == exit_code::parse);

    put(dir / "invalid.cfg", "[mixture]\ngamma = 0.5\n");
    o.config = (dir / "invalid.cfg").string();
    CHECK(cmd_solve(o, log) == exit_code::validation);

    o.config = (dir / "missing.cfg").string();
    CHECK(cmd_solve(o, log) == exit_code::data);

    put(dir / "ok.cfg", "[grid]\nnx = 8\nny = 8\n");
    o.config = (dir / "ok.cfg").string();
    CHECK(cmd_mms(o, "nope", log) == exit_code::usage);
    CHECK(cmd_sweep(o, "theta", {1.0}, log) == exit_code::usage);
    CHECK(cmd_check(o, (dir / "nowhere").string(), log) == exit_code::data);

    // Sweep rows below M_min are marked, the others still run.
    put(dir / "sw.cfg", "[grid]\nnx = 8\nny = 8\n[continuation]\nlambda_steps = 2\ndelta_schedule = 0.1\n");
    const auto cfg = load_config((dir / "sw.cfg").string());
    const auto rows = run_sweep(cfg, SweepAxis::M, {5.0, 100.0}, 1);
    CHECK(rows[0].status == "refused");
    CHECK(rows[1].status == "ok");
}

}
