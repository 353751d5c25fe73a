#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <string>
#include <unistd.h>

#include "lpbf/alloy_catalog.hpp"
#include "lpbf/csv.hpp"
#include "lpbf/field_io.hpp"
#include "lpbf/solver.hpp"

namespace lpbf::test {

inline std::filesystem::path data_dir() { return LPBF_TEST_DATA; }

/// name -> value from tests/data/scalar_oracle.csv.
inline const std::map<std::string, double>& oracle() {
    static const std::map<std::string, double> values = [] {
        std::map<std::string, double> m;
        const auto lines = csv::content_lines(read_text(data_dir() / "scalar_oracle.csv"));
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto cells = csv::split(lines[i].second);
            m[cells[0]] = *csv::to_double(cells[1]);
        }
        return m;
    }();
    return values;
}

inline double oracle(const std::string& name) { return oracle().at(name); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("lpbf_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// A small domain (40 x 16 x 10 layer thicknesses) for fast solver tests.
inline ProcessCase small_case(const std::string& alloy, double power, double speed) {
    ProcessCase pc = make_case(alloy, power, speed);
    pc.id = alloy + "-small";
    pc.domain_length = 40 * pc.layer_thickness;
    pc.domain_width = 16 * pc.layer_thickness;
    pc.domain_height = 10 * pc.layer_thickness;
    return pc;
}

inline SolverConfig short_run(double t_end = 20.0) {
    SolverConfig cfg;
    cfg.t_end = t_end;
    cfg.laser_x_start = 10.0;
    return cfg;
}

}  // namespace lpbf::test
