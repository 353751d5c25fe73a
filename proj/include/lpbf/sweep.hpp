#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpbf/alloy_catalog.hpp"
#include "lpbf/config.hpp"
#include "lpbf/metrics.hpp"
#include "lpbf/regression.hpp"

namespace lpbf {

struct SweepRecord {
    std::string case_id;
    std::string alloy;
    double power = 0.0;
    double scan_speed = 0.0;
    DimensionlessSet numbers;
    std::optional<MeltpoolMetrics> metrics;  // present iff done
    std::string config_hash;
    double wall_seconds = 0.0;
    bool done = false;
    std::string reason;  // failure reason, empty when done
    double max_divergence = 0.0;
    std::vector<std::string> warnings;

    /// Equality ignoring wall time.
    bool same_result(const SweepRecord& other) const;
};

/// One JSON object per line; NaN metrics are written as null.
std::string record_line(const SweepRecord& r);
SweepRecord parse_record_line(std::string_view line);

/// Reads a results store. A malformed final line (an interrupted write) is
/// ignored; a malformed line elsewhere throws ParseError. When a case id
/// appears more than once the last record wins.
std::vector<SweepRecord> load_records(const std::filesystem::path& store);

/// Runs one case and packages the outcome; solver failures become failed
/// records rather than exceptions.
SweepRecord run_record(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg);

struct SweepOptions {
    int jobs = 1;
    bool force = false;          // resume even when stored records carry another config hash
    std::size_t stop_after = 0;  // run at most this many new cases (0: no limit)
    std::function<void(const SweepRecord&)> on_record;
};

struct SweepSummary {
    std::vector<SweepRecord> records;  // one per requested case, in case order
    std::size_t done = 0, failed = 0;
    std::size_t resumed = 0;           // taken from the store without running
    std::size_t executed = 0;
    bool complete = false;             // every requested case has a record
};

/// Runs `cases` with up to `jobs` workers and appends each finished record to
/// `store` (JSON lines) through a single writer. Case ids already present with
/// the same config hash are skipped. Stored records with a different hash make
/// the sweep refuse (ValidationError on "config_hash") unless `force` is set,
/// in which case those cases are run again.
SweepSummary run_sweep(const Catalog& catalog, const std::vector<ProcessCase>& cases, const SolverConfig& cfg,
                       const std::filesystem::path& store, const SweepOptions& options = {});

struct AssembledDataset {
    std::vector<DatasetRow> rows;
    std::size_t excluded = 0;  // failed records
    std::vector<std::string> notes;
};

/// Regression table from the done records; throws ValidationError when none.
AssembledDataset assemble_dataset(const std::vector<SweepRecord>& records, ResponseMode mode);

/// case_id, alloy, P_W, v_p and every dimensionless field, one row per case.
std::string numbers_csv(const std::vector<ProcessCase>& cases, const std::vector<DimensionlessSet>& numbers);

std::string dataset_csv(const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> parse_dataset_csv(std::string_view text);

}  // namespace lpbf
