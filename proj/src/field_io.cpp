#include "lpbf/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lpbf/csv.hpp"
#include "lpbf/error.hpp"

namespace lpbf {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

struct ArraySpec {
    const char* name;
    const char* location;
    Field SimState::*member;
};

constexpr ArraySpec kArrays[] = {
    {"T", "cell", &SimState::T},   {"phi", "cell", &SimState::phi}, {"p", "cell", &SimState::p},
    {"u", "x_face", &SimState::u}, {"v", "y_face", &SimState::v},   {"w", "z_face", &SimState::w},
};

fs::path with_suffix(const fs::path& base, const char* suffix) { return fs::path(base.string() + suffix); }

}  // namespace

void write_snapshot(const SimState& s, const fs::path& base) {
    json meta;
    meta["format"] = "lpbf-snapshot";
    meta["version"] = kSnapshotVersion;
    meta["dims"] = {s.grid.nx, s.grid.ny, s.grid.nz};
    meta["spacing"] = {s.grid.hx, s.grid.hy, s.grid.hz};
    meta["t_tilde"] = s.t;
    meta["step"] = s.step;
    meta["dtype"] = "float64-le";

    std::string blob;
    for (const auto& a : kArrays) {
        const Field& f = s.*a.member;
        meta["fields"].push_back(
            {{"name", a.name}, {"location", a.location}, {"offset", blob.size()}, {"count", f.size()}});
        blob.append(reinterpret_cast<const char*>(f.data()), f.size() * sizeof(double));
    }
    write_text(with_suffix(base, ".bin"), blob);
    write_text(with_suffix(base, ".json"), meta.dump(2) + "\n");
}

SimState read_snapshot(const fs::path& base) {
    json meta;
    try {
        meta = json::parse(read_text(with_suffix(base, ".json")));
    } catch (const json::exception& e) {
        throw ParseError(0, "snapshot descriptor: " + std::string(e.what()));
    }
    if (meta.value("format", "") != "lpbf-snapshot") throw ParseError(0, "not an lpbf snapshot descriptor");
    if (meta.value("version", 0) != kSnapshotVersion)
        throw ParseError(0, "unsupported snapshot version " + meta.value("version", json(0)).dump());

    SimState s;
    s.grid.nx = meta["dims"][0];
    s.grid.ny = meta["dims"][1];
    s.grid.nz = meta["dims"][2];
    s.grid.hx = meta["spacing"][0];
    s.grid.hy = meta["spacing"][1];
    s.grid.hz = meta["spacing"][2];
    s.t = meta["t_tilde"];
    s.step = meta["step"];

    const std::string blob = read_text(with_suffix(base, ".bin"));
    for (const auto& a : kArrays) {
        const auto it = std::find_if(meta["fields"].begin(), meta["fields"].end(),
                                     [&](const json& f) { return f.value("name", "") == a.name; });
        if (it == meta["fields"].end()) throw ParseError(0, std::string("snapshot lacks field ") + a.name);
        const std::size_t offset = (*it)["offset"], count = (*it)["count"];
        if (offset + count * sizeof(double) > blob.size()) throw ParseError(0, "snapshot data truncated");
        Field& f = s.*a.member;
        f.resize(count);
        std::memcpy(f.data(), blob.data() + offset, count * sizeof(double));
    }
    if (s.T.size() != s.grid.cells() || s.u.size() != s.grid.u_size() || s.v.size() != s.grid.v_size() ||
        s.w.size() != s.grid.w_size())
        throw ParseError(0, "snapshot array sizes do not match its dimensions");
    return s;
}

std::string probes_csv(const std::vector<StepProbe>& probes) {
    using csv::fmt;
    std::string out = "step,t_tilde,Tmax_tilde,vmax_tilde,melt_cells\n";
    for (const auto& p : probes)
        out += std::to_string(p.step) + "," + fmt(p.t) + "," + fmt(p.Tmax) + "," + fmt(p.vmax) + "," +
               std::to_string(p.melt_cells) + "\n";
    return out;
}

std::string top_plane_csv(const SimState& s) {
    using csv::fmt;
    const Grid& g = s.grid;
    const Field speed = s.speed();
    std::string out = "x,y,T_tilde,phi,speed\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto c = g.idx(i, j, 0);
            out += fmt(g.x_center(i)) + "," + fmt(g.y_center(j)) + "," + fmt(s.T[c]) + "," + fmt(s.phi[c]) + "," +
                   fmt(speed[c]) + "\n";
        }
    return out;
}

std::string centerline_csv(const SimState& s) {
    using csv::fmt;
    const Grid& g = s.grid;
    const Field speed = s.speed();
    int row = 0;
    for (int j = 1; j < g.ny; ++j)
        if (std::abs(g.y_center(j)) < std::abs(g.y_center(row))) row = j;
    std::string out = "x,T_tilde,phi,speed\n";
    for (int i = 0; i < g.nx; ++i) {
        const auto c = g.idx(i, row, 0);
        out += fmt(g.x_center(i)) + "," + fmt(s.T[c]) + "," + fmt(s.phi[c]) + "," + fmt(speed[c]) + "\n";
    }
    return out;
}

}  // namespace lpbf
