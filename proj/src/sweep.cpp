#include "lpbf/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "lpbf/csv.hpp"
#include "lpbf/error.hpp"
#include "lpbf/field_io.hpp"

namespace lpbf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

// Field tables shared by the JSON and CSV forms.
const std::vector<std::pair<const char*, double DimensionlessSet::*>>& number_fields() {
    static const std::vector<std::pair<const char*, double DimensionlessSet::*>> f = {
        {"Pr", &DimensionlessSet::Pr},
        {"Gr", &DimensionlessSet::Gr},
        {"Ra", &DimensionlessSet::Ra},
        {"Da", &DimensionlessSet::Da},
        {"Ma", &DimensionlessSet::Ma},
        {"Pe", &DimensionlessSet::Pe},
        {"Ste", &DimensionlessSet::Ste},
        {"Q", &DimensionlessSet::Q},
        {"E", &DimensionlessSet::E},
        {"Bi", &DimensionlessSet::Bi},
        {"rad_measure", &DimensionlessSet::rad_measure},
        {"Tc", &DimensionlessSet::Tc},
        {"Tc_over_Ste", &DimensionlessSet::Tc_over_Ste},
        {"alpha_th", &DimensionlessSet::thermal_diffusivity},
        {"dT_ref", &DimensionlessSet::dT_ref},
        {"t_p", &DimensionlessSet::char_time},
        {"ma_sign", &DimensionlessSet::marangoni_sign},
    };
    return f;
}

const std::vector<std::pair<const char*, double MeltpoolMetrics::*>>& metric_fields() {
    static const std::vector<std::pair<const char*, double MeltpoolMetrics::*>> f = {
        {"Tmax_t", &MeltpoolMetrics::Tmax_tilde},
        {"vmax_t", &MeltpoolMetrics::vmax_tilde},
        {"Tmax_probe", &MeltpoolMetrics::Tmax_probe},
        {"vmax_probe", &MeltpoolMetrics::vmax_probe},
        {"Gmax_t", &MeltpoolMetrics::Gmax_tilde},
        {"G_K_per_m", &MeltpoolMetrics::G_dim},
        {"coolrate_K_per_s", &MeltpoolMetrics::cooling_rate},
        {"l_m", &MeltpoolMetrics::length},
        {"w_m", &MeltpoolMetrics::width},
        {"d_m", &MeltpoolMetrics::depth},
        {"aspect", &MeltpoolMetrics::aspect_ratio},
        {"volume", &MeltpoolMetrics::volume},
        {"melt_volume", &MeltpoolMetrics::melt_volume},
        {"sdas_um", &MeltpoolMetrics::sdas_um},
    };
    return f;
}

bool same_number(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

bool SweepRecord::same_result(const SweepRecord& o) const {
    if (case_id != o.case_id || alloy != o.alloy || !same_number(power, o.power) ||
        !same_number(scan_speed, o.scan_speed) || !(numbers == o.numbers) || config_hash != o.config_hash ||
        done != o.done || reason != o.reason || !same_number(max_divergence, o.max_divergence) ||
        warnings != o.warnings || metrics.has_value() != o.metrics.has_value())
        return false;
    return !metrics || *metrics == *o.metrics;
}

std::string record_line(const SweepRecord& r) {
    json j;
    j["case_id"] = r.case_id;
    j["alloy"] = r.alloy;
    j["P_W"] = r.power;
    j["v_p"] = r.scan_speed;
    j["config_hash"] = r.config_hash;
    j["status"] = r.done ? "done" : "failed";
    if (!r.done) j["reason"] = r.reason;
    j["wall_s"] = r.wall_seconds;
    j["max_divergence"] = number(r.max_divergence);
    j["warnings"] = r.warnings;
    for (const auto& [name, member] : number_fields()) j["numbers"][name] = number(r.numbers.*member);
    if (r.metrics)
        for (const auto& [name, member] : metric_fields()) j["metrics"][name] = number((*r.metrics).*member);
    return j.dump();
}

SweepRecord parse_record_line(std::string_view line) {
    SweepRecord r;
    try {
        const json j = json::parse(line);
        r.case_id = j.at("case_id");
        r.alloy = j.at("alloy");
        r.power = j.at("P_W");
        r.scan_speed = j.at("v_p");
        r.config_hash = j.at("config_hash");
        const std::string status = j.at("status");
        if (status != "done" && status != "failed") throw ParseError(0, "unknown status '" + status + "'");
        r.done = status == "done";
        r.reason = j.value("reason", "");
        r.wall_seconds = j.value("wall_s", 0.0);
        r.max_divergence = number(j.value("max_divergence", json(0.0)));
        r.warnings = j.value("warnings", std::vector<std::string>{});
        for (const auto& [name, member] : number_fields()) r.numbers.*member = number(j.at("numbers").at(name));
        if (r.done) {
            MeltpoolMetrics m;
            for (const auto& [name, member] : metric_fields()) m.*member = number(j.at("metrics").at(name));
            r.metrics = m;
        } else if (r.reason.empty()) {
            throw ParseError(0, "failed record without a reason");
        }
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("sweep record: ") + e.what());
    }
    return r;
}

std::vector<SweepRecord> load_records(const fs::path& store) {
    std::vector<SweepRecord> out;
    if (!fs::exists(store)) return out;
    const std::string text = read_text(store);
    const auto lines = csv::content_lines(text);
    std::map<std::string, std::size_t> position;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        SweepRecord r;
        try {
            r = parse_record_line(lines[n].second);
        } catch (const ParseError& e) {
            if (n + 1 == lines.size()) break;  // torn final write
            throw ParseError(lines[n].first, e.what());
        }
        if (const auto it = position.find(r.case_id); it != position.end())
            out[it->second] = std::move(r);
        else {
            position[r.case_id] = out.size();
            out.push_back(std::move(r));
        }
    }
    return out;
}

SweepRecord run_record(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg) {
    SweepRecord r;
    r.case_id = pc.id;
    r.alloy = pc.alloy;
    r.power = pc.power;
    r.scan_speed = pc.scan_speed;
    r.config_hash = hash_hex(config_hash(cfg, pc));
    const auto start = std::chrono::steady_clock::now();
    try {
        r.numbers = compute_numbers(alloy, pc);
        const CaseRun run = run_case(alloy, pc, cfg);
        r.metrics = extract(run, alloy, pc, cfg.melt_threshold);
        r.max_divergence = run.max_divergence;
        r.warnings = run.warnings;
        r.done = true;
    } catch (const std::exception& e) {
        r.done = false;
        r.metrics.reset();
        r.reason = pc.id + ": " + e.what();
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

SweepSummary run_sweep(const Catalog& catalog, const std::vector<ProcessCase>& cases, const SolverConfig& cfg,
                       const fs::path& store, const SweepOptions& options) {
    if (options.jobs < 1) throw ValidationError("jobs", "must be at least 1");
    validate(cfg);
    for (const auto& pc : cases) validate(pc, catalog.alloy(pc.alloy));

    // Existing records: reuse matches, refuse stale ones unless forced.
    std::map<std::string, SweepRecord> existing;
    for (auto& r : load_records(store)) existing[r.case_id] = std::move(r);
    std::vector<std::string> hashes;
    for (const auto& pc : cases) hashes.push_back(hash_hex(config_hash(cfg, pc)));
    std::vector<std::size_t> pending;
    SweepSummary summary;
    std::vector<std::optional<SweepRecord>> results(cases.size());
    for (std::size_t n = 0; n < cases.size(); ++n) {
        const auto it = existing.find(cases[n].id);
        if (it != existing.end() && it->second.config_hash == hashes[n]) {
            results[n] = it->second;
            ++summary.resumed;
            continue;
        }
        if (it != existing.end() && !options.force)
            throw ValidationError("config_hash", "store " + store.string() + " holds " + cases[n].id +
                                                     " under config hash " + it->second.config_hash + ", now " +
                                                     hashes[n] + " (use force to re-run)");
        pending.push_back(n);
    }
    if (options.stop_after > 0 && pending.size() > options.stop_after) pending.resize(options.stop_after);

    // A torn final line would corrupt the next append, so rewrite valid lines first.
    if (fs::exists(store)) {
        const std::string text = read_text(store);
        if (!text.empty() && text.back() != '\n') {
            std::string clean;
            for (const auto& r : load_records(store)) clean += record_line(r) + "\n";
            write_text(store, clean);
        }
    } else if (store.has_parent_path()) {
        fs::create_directories(store.parent_path());
    }

    std::ofstream out(store, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + store.string());

    std::mutex mutex;
    std::condition_variable ready;
    std::deque<std::pair<std::size_t, SweepRecord>> finished;
    std::atomic<std::size_t> next{0};
    std::size_t active = std::min<std::size_t>(std::size_t(options.jobs), pending.size());

    const auto worker = [&] {
        for (std::size_t slot = next++; slot < pending.size(); slot = next++) {
            const std::size_t n = pending[slot];
            SweepRecord r = run_record(catalog.alloy(cases[n].alloy), cases[n], cfg);
            std::lock_guard lock(mutex);
            finished.emplace_back(n, std::move(r));
            ready.notify_one();
        }
        std::lock_guard lock(mutex);
        --active;
        ready.notify_one();
    };
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < active; ++w) workers.emplace_back(worker);

    // This thread is the only writer of the store.
    std::unique_lock lock(mutex);
    while (true) {
        ready.wait(lock, [&] { return !finished.empty() || active == 0; });
        while (!finished.empty()) {
            auto [n, r] = std::move(finished.front());
            finished.pop_front();
            lock.unlock();
            out << record_line(r) << '\n';
            out.flush();
            if (options.on_record) options.on_record(r);
            results[n] = std::move(r);
            ++summary.executed;
            lock.lock();
        }
        if (active == 0 && finished.empty()) break;
    }
    lock.unlock();
    for (auto& t : workers) t.join();
    if (!out) throw std::runtime_error("write to " + store.string() + " failed");

    summary.complete = true;
    for (auto& r : results) {
        if (!r) {
            summary.complete = false;
            continue;
        }
        (r->done ? summary.done : summary.failed)++;
        summary.records.push_back(std::move(*r));
    }
    return summary;
}

AssembledDataset assemble_dataset(const std::vector<SweepRecord>& records, ResponseMode mode) {
    AssembledDataset d;
    for (const auto& r : records) {
        if (!r.done || !r.metrics) {
            ++d.excluded;
            d.notes.push_back("excluded " + r.case_id + ": " + r.reason);
            continue;
        }
        DatasetRow row;
        row.case_id = r.case_id;
        row.alloy = r.alloy;
        row.power = r.power;
        row.scan_speed = r.scan_speed;
        row.numbers = r.numbers;
        row.metrics = *r.metrics;
        row.response = mode == ResponseMode::probe ? r.metrics->Tmax_probe : r.metrics->Tmax_tilde;
        row.vmax = mode == ResponseMode::probe ? r.metrics->vmax_probe : r.metrics->vmax_tilde;
        d.rows.push_back(std::move(row));
    }
    if (d.rows.empty()) throw ValidationError("records", "no completed records to assemble");
    if (d.excluded) d.notes.push_back(std::to_string(d.excluded) + " failed record(s) excluded");
    return d;
}

std::string numbers_csv(const std::vector<ProcessCase>& cases, const std::vector<DimensionlessSet>& numbers) {
    std::string out = "case_id,alloy,P_W,v_p";
    for (const auto& [name, member] : number_fields()) out += std::string(",") + name;
    out += "\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
        out += cases[i].id + "," + cases[i].alloy + "," + csv::fmt(cases[i].power) + "," + csv::fmt(cases[i].scan_speed);
        for (const auto& [name, member] : number_fields()) out += "," + csv::fmt(numbers[i].*member);
        out += "\n";
    }
    return out;
}

std::string dataset_csv(const std::vector<DatasetRow>& rows) {
    using csv::fmt;
    std::string out = "case_id,alloy,P_W,v_p";
    for (const auto& [name, member] : number_fields()) out += std::string(",") + name;
    out += ",Tmax_response,vmax_response";
    for (const auto& [name, member] : metric_fields()) out += std::string(",") + name;
    out += "\n";
    for (const auto& r : rows) {
        out += r.case_id + "," + r.alloy + "," + fmt(r.power) + "," + fmt(r.scan_speed);
        for (const auto& [name, member] : number_fields()) out += "," + fmt(r.numbers.*member);
        out += "," + fmt(r.response) + "," + fmt(r.vmax);
        for (const auto& [name, member] : metric_fields()) out += "," + fmt(r.metrics.*member);
        out += "\n";
    }
    return out;
}

std::vector<DatasetRow> parse_dataset_csv(std::string_view text) {
    const auto lines = csv::content_lines(text);
    std::vector<DatasetRow> rows;
    if (lines.empty()) return rows;
    const auto header = csv::split(lines[0].second);
    std::map<std::string, std::size_t> col;
    for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = c;
    const auto need = [&](const std::string& name) {
        const auto it = col.find(name);
        if (it == col.end()) throw ParseError(0, "dataset lacks column '" + name + "'");
        return it->second;
    };

    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto cells = csv::split(lines[n].second);
        if (cells.size() != header.size()) throw ParseError(n, "expected " + std::to_string(header.size()) + " cells");
        const auto value = [&](const std::string& name) {
            const auto& cell = cells[need(name)];
            const auto v = csv::to_double(cell);
            if (!v) throw ParseError(n, name + ": not a number ('" + cell + "')");
            return *v;
        };
        DatasetRow r;
        r.case_id = cells[need("case_id")];
        r.alloy = cells[need("alloy")];
        r.power = value("P_W");
        r.scan_speed = value("v_p");
        for (const auto& [name, member] : number_fields()) r.numbers.*member = value(name);
        r.response = value("Tmax_response");
        r.vmax = value("vmax_response");
        for (const auto& [name, member] : metric_fields()) r.metrics.*member = value(name);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace lpbf
