#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>

#include "lpbf/config.hpp"
#include "lpbf/error.hpp"
#include "lpbf/field_io.hpp"
#include "support.hpp"

using namespace lpbf;

TEST(Config, ParsesKeysAndComments) {
    const auto cfg = parse_config(
        "# resolution\n"
        "grid_spacing = 2\n"
        "dt = 0.5   # halved\n"
        "flow = false\n"
        "jobs = 3\n"
        "response = snapshot\n");
    EXPECT_EQ(cfg.solver.grid_spacing, 2.0);
    EXPECT_EQ(cfg.solver.dt, 0.5);
    EXPECT_FALSE(cfg.solver.flow);
    EXPECT_EQ(cfg.jobs, 3);
    EXPECT_EQ(cfg.response, ResponseMode::snapshot);
    EXPECT_EQ(cfg.solver.t_end, SolverConfig{}.t_end);
}

TEST(Config, UnknownKeyNamesLine) {
    try {
        parse_config("dt = 1\nbogus = 2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
        EXPECT_EQ(e.row(), 2u);
    }
}

TEST(Config, BadValues) {
    EXPECT_THROW(parse_config("dt = fast\n"), ParseError);
    EXPECT_THROW(parse_config("max_substeps = 2.5\n"), ParseError);
    EXPECT_THROW(parse_config("flow = maybe\n"), ParseError);
    EXPECT_THROW(parse_config("dt\n"), ParseError);
    EXPECT_THROW(parse_config("dt = -1\n"), ValidationError);
    EXPECT_THROW(parse_config("jobs = 0\n"), ValidationError);
    EXPECT_THROW(parse_config("confidence = 1\n"), ValidationError);
}

TEST(Config, SerializeRoundTrip) {
    RunConfig c;
    c.solver.dt = 0.37;
    c.solver.insulated_bottom = true;
    c.solver.max_substeps = 17;
    c.jobs = 4;
    c.confidence = 0.9;
    const auto back = parse_config(serialize_config(c));
    EXPECT_EQ(back.solver, c.solver);
    EXPECT_EQ(back.jobs, 4);
    EXPECT_EQ(back.confidence, 0.9);
}

TEST(Config, HashSensitivity) {
    const auto pc = make_case("SS316", 90, 0.5);
    const SolverConfig base;
    const auto h = config_hash(base, pc);
    EXPECT_EQ(h, config_hash(base, pc));
    SolverConfig other = base;
    other.dt = 0.5;
    EXPECT_NE(h, config_hash(other, pc));
    EXPECT_NE(h, config_hash(coarse(base), pc));
    EXPECT_NE(h, config_hash(base, make_case("SS316", 90, 0.6)));
    auto wider = pc;
    wider.domain_width *= 2;
    EXPECT_NE(h, config_hash(base, wider));
    SolverConfig snaps = base;
    snaps.snapshot_every = 10;
    EXPECT_EQ(h, config_hash(snaps, pc));
    EXPECT_EQ(hash_hex(255), "00000000000000ff");
}

TEST(Config, CoarseDoublesSpacing) { EXPECT_EQ(coarse(SolverConfig{}).grid_spacing, 2.0); }

TEST(Snapshot, RoundTripIsExact) {
    test::TempDir dir;
    const auto cat = builtin_catalog();
    const auto pc = make_case("SS316", 90, 0.5);
    Grid g;
    g.nx = 4;
    g.ny = 3;
    g.nz = 2;
    g.hx = g.hy = g.hz = 0.5;
    auto s = SimState::uniform(g, 0.25, PhaseModel::from(cat.alloy("SS316"), pc));
    for (std::size_t i = 0; i < s.T.size(); ++i) s.T[i] = 0.1 * double(i) + 1e-17;
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] = -0.3 * double(i);
    s.w.back() = 7.0;
    s.t = 12.5;
    s.step = 25;
    write_snapshot(s, dir / "snap");
    const auto back = read_snapshot(dir / "snap");
    EXPECT_EQ(back.grid, s.grid);
    EXPECT_EQ(back.T, s.T);
    EXPECT_EQ(back.phi, s.phi);
    EXPECT_EQ(back.p, s.p);
    EXPECT_EQ(back.u, s.u);
    EXPECT_EQ(back.v, s.v);
    EXPECT_EQ(back.w, s.w);
    EXPECT_EQ(back.t, 12.5);
    EXPECT_EQ(back.step, 25u);
}

TEST(Snapshot, RejectsOtherVersion) {
    test::TempDir dir;
    const auto cat = builtin_catalog();
    Grid g;
    g.nx = g.ny = g.nz = 2;
    write_snapshot(SimState::uniform(g, 0.0, PhaseModel::from(cat.alloy("IN718"), make_case("IN718", 40, 0.5))),
                   dir / "s");
    auto meta = nlohmann::json::parse(read_text(dir / "s.json"));
    ASSERT_EQ(meta["version"], kSnapshotVersion);
    meta["version"] = kSnapshotVersion + 1;
    write_text(dir / "s.json", meta.dump());
    EXPECT_THROW(read_snapshot(dir / "s"), ParseError);
}

TEST(Snapshot, RejectsTruncatedData) {
    test::TempDir dir;
    const auto cat = builtin_catalog();
    Grid g;
    g.nx = g.ny = g.nz = 2;
    write_snapshot(SimState::uniform(g, 0.0, PhaseModel::from(cat.alloy("IN718"), make_case("IN718", 40, 0.5))),
                   dir / "s");
    std::filesystem::resize_file(dir / "s.bin", 16);
    EXPECT_THROW(read_snapshot(dir / "s"), ParseError);
}

TEST(TextIo, WriteReadAndProbeCsv) {
    test::TempDir dir;
    write_text(dir / "a.txt", "hello\n");
    EXPECT_EQ(read_text(dir / "a.txt"), "hello\n");
    EXPECT_THROW(read_text(dir / "missing.txt"), std::runtime_error);
    StepProbe p;
    p.step = 3;
    p.t = 1.5;
    p.Tmax = 2.0;
    p.melt_cells = 4;
    const auto csv = probes_csv({p});
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,t_tilde,Tmax_tilde,vmax_tilde,melt_cells");
    EXPECT_EQ(csv.substr(csv.find('\n') + 1), "3,1.5,2,0,4\n");
}

TEST(TextIo, PlaneAndCenterline) {
    const auto cat = builtin_catalog();
    Grid g;
    g.nx = 3;
    g.ny = 2;
    g.nz = 2;
    const auto s = SimState::uniform(g, 0.5, PhaseModel::from(cat.alloy("SS316"), make_case("SS316", 90, 0.5)));
    const auto plane = top_plane_csv(s);
    EXPECT_EQ(std::count(plane.begin(), plane.end(), '\n'), 1 + 6);
    const auto line = centerline_csv(s);
    EXPECT_EQ(std::count(line.begin(), line.end(), '\n'), 1 + 3);
}
