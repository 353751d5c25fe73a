#include "lpbf/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>

#include "lpbf/config.hpp"
#include "lpbf/correlations.hpp"
#include "lpbf/csv.hpp"
#include "lpbf/error.hpp"
#include "lpbf/field_io.hpp"
#include "lpbf/metrics.hpp"
#include "lpbf/regression.hpp"
#include "lpbf/sweep.hpp"
#include "lpbf/validation.hpp"

namespace lpbf {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config;
    fs::path out = "out";
    int jobs = 0;
    bool coarse = false;
    bool force = false;
};

struct CaseFlags {
    std::string alloy = "SS316";
    double power = 90.0;
    double speed = 0.5;
};

RunConfig load_config(const Globals& g) {
    RunConfig rc;
    if (!g.config.empty()) {
        if (!fs::exists(g.config)) throw ValidationError("config", "no such file: " + g.config);
        rc = parse_config(read_text(g.config));
    }
    if (g.jobs > 0) rc.jobs = g.jobs;
    if (g.coarse) rc.solver = coarse(rc.solver);
    validate(rc.solver);
    return rc;
}

// Refuses to replace existing outputs unless forced.
void claim(const std::vector<fs::path>& paths, bool force) {
    if (force) return;
    for (const auto& p : paths)
        if (fs::exists(p)) throw ValidationError("out", p.string() + " exists (use --force to overwrite)");
}

void emit(CommandResult& r, const fs::path& path, const std::string& text) {
    write_text(path, text);
    r.artifacts.push_back(path);
}

std::vector<DatasetRow> load_dataset(const fs::path& path) {
    if (!fs::exists(path)) throw ValidationError("dataset", "no such file: " + path.string());
    return parse_dataset_csv(read_text(path));
}

std::string coeffs_csv(const UhatCoefficients& c, const std::string& source) {
    return "source,a0,a1,a2\n" + source + "," + csv::fmt(c.a0) + "," + csv::fmt(c.a1) + "," + csv::fmt(c.a2) + "\n";
}

CommandResult cmd_numbers(const Globals&, const CaseFlags& cf, const std::string& cases_file, bool all, bool list,
                          std::ostream& out) {
    CommandResult r;
    const Catalog catalog = builtin_catalog();
    if (list) {
        for (const auto& a : catalog.alloys) out << a.name << "\n";
        r.summary = std::to_string(catalog.alloys.size()) + " alloys";
        return r;
    }
    std::vector<ProcessCase> cases;
    if (!cases_file.empty()) {
        if (!fs::exists(cases_file)) throw ValidationError("cases", "no such file: " + cases_file);
        cases = load_cases(read_text(cases_file), catalog);
    } else if (all) {
        cases = catalog.all_cases();
    } else {
        const auto& alloy = catalog.alloy(cf.alloy);
        ProcessCase pc = make_case(alloy.name, cf.power, cf.speed);
        pc.id = alloy.name + "-cli";
        validate(pc, alloy);
        cases.push_back(pc);
    }
    std::vector<DimensionlessSet> numbers;
    for (const auto& pc : cases) numbers.push_back(compute_numbers(catalog.alloy(pc.alloy), pc));
    out << numbers_csv(cases, numbers);
    r.summary = std::to_string(cases.size()) + " cases";
    return r;
}

CommandResult cmd_simulate(const Globals& g, const CaseFlags& cf, std::optional<double> spacing,
                           std::optional<double> t_end, std::ostream& out, std::ostream& err) {
    CommandResult r;
    RunConfig rc = load_config(g);
    if (spacing) rc.solver.grid_spacing = *spacing;
    if (t_end) rc.solver.t_end = *t_end;
    validate(rc.solver);

    const Catalog catalog = builtin_catalog();
    const auto& alloy = catalog.alloy(cf.alloy);
    ProcessCase pc = make_case(alloy.name, cf.power, cf.speed);
    pc.id = alloy.name + "-cli";
    validate(pc, alloy, true);

    const fs::path probes = g.out / "probes.csv", metrics = g.out / "metrics.csv", plane = g.out / "top_plane.csv",
                   line = g.out / "centerline.csv", final_state = g.out / "final_state";
    claim({probes, metrics, plane, line, final_state.string() + ".json"}, g.force);

    const auto observer = [&](const SimState& s, const StepProbe& p) {
        const int every = rc.solver.snapshot_every;
        if (every > 0 && p.step % std::size_t(every) == 0) {
            char name[32];
            std::snprintf(name, sizeof(name), "snapshot_%06zu", p.step);
            write_snapshot(s, g.out / name);
            r.artifacts.push_back(g.out / (std::string(name) + ".json"));
        }
    };
    const CaseRun run = run_case(alloy, pc, rc.solver, observer);
    for (const auto& w : run.warnings) err << "warning: " << w << "\n";
    const MeltpoolMetrics m = extract(run, alloy, pc, rc.solver.melt_threshold);

    emit(r, probes, probes_csv(run.probes));
    emit(r, metrics, metrics_csv_header() + "\n" + metrics_csv_row(pc, m) + "\n");
    emit(r, plane, top_plane_csv(run.state));
    emit(r, line, centerline_csv(run.state));
    write_snapshot(run.state, final_state);
    r.artifacts.push_back(final_state.string() + ".json");

    out << metrics_csv_header() << "\n" << metrics_csv_row(pc, m) << "\n";
    r.summary = "melt volume " + csv::fmt_g(m.melt_volume) + " l_p^3, cooling rate " + csv::fmt_g(m.cooling_rate) +
                " K/s";
    return r;
}

CommandResult cmd_sweep(const Globals& g, const std::string& cases_file, std::size_t stop_after, std::ostream& out,
                        std::ostream& err) {
    CommandResult r;
    const RunConfig rc = load_config(g);
    const Catalog catalog = builtin_catalog();
    std::vector<ProcessCase> cases;
    if (cases_file.empty()) {
        cases = catalog.all_cases();
    } else {
        if (!fs::exists(cases_file)) throw ValidationError("cases", "no such file: " + cases_file);
        cases = load_cases(read_text(cases_file), catalog);
    }
    const fs::path store = g.out / "sweep_results.jsonl", dataset = g.out / "sweep_dataset.csv";
    claim({dataset}, g.force);
    fs::create_directories(g.out);

    SweepOptions opt;
    opt.jobs = rc.jobs;
    opt.force = g.force;
    opt.stop_after = stop_after;
    std::size_t finished = 0;
    opt.on_record = [&](const SweepRecord& rec) {
        out << "[" << ++finished << "] " << rec.case_id << (rec.done ? " done " : " FAILED ")
            << csv::fmt_g(rec.wall_seconds, 3) << " s";
        if (!rec.done) out << " (" << rec.reason << ")";
        out << "\n";
    };
    const SweepSummary s = run_sweep(catalog, cases, rc.solver, store, opt);
    r.artifacts.push_back(store);
    for (const auto& rec : s.records)
        if (!rec.done) err << "failed: " << rec.case_id << ": " << rec.reason << "\n";

    r.summary = std::to_string(s.done) + " done, " + std::to_string(s.failed) + " failed, " +
                std::to_string(s.resumed) + " resumed of " + std::to_string(cases.size());
    if (!s.complete) {
        err << "sweep incomplete: " << r.summary << "; rerun to resume\n";
        r.exit_code = kExitPartial;
        return r;
    }
    if (s.done == 0) {
        err << "every case failed\n";
        r.exit_code = kExitRuntime;
        return r;
    }
    const AssembledDataset ds = assemble_dataset(s.records, rc.response);
    for (const auto& note : ds.notes) err << "note: " << note << "\n";
    emit(r, dataset, dataset_csv(ds.rows));
    if (s.failed > 0) r.exit_code = kExitPartial;
    return r;
}

CommandResult cmd_regress(const Globals& g, const fs::path& dataset, int attempt, std::ostream& out) {
    CommandResult r;
    const RunConfig rc = load_config(g);
    const auto rows = load_dataset(dataset);
    std::vector<int> attempts = attempt ? std::vector<int>{attempt} : std::vector<int>{1, 2, 3};
    std::vector<fs::path> targets;
    for (int a : attempts) targets.push_back(g.out / ("regression_attempt" + std::to_string(a) + ".csv"));
    claim(targets, g.force);
    for (std::size_t i = 0; i < attempts.size(); ++i) {
        const RegressionReport rep = run_attempt(attempts[i], rows, rc.confidence);
        out << format_report(rep) << "\n";
        emit(r, targets[i], report_csv_header() + "\n" + report_csv_rows(rep));
    }
    r.summary = std::to_string(attempts.size()) + " fits on " + std::to_string(rows.size()) + " rows";
    return r;
}

CommandResult cmd_report(const Globals& g, const fs::path& dataset, const std::string& coeff_source,
                         std::ostream& out, std::ostream& err) {
    CommandResult r;
    const RunConfig rc = load_config(g);
    const auto rows = load_dataset(dataset);
    const UhatCoefficients coeffs =
        coeff_source == "reference" ? UhatCoefficients{} : uhat_coefficients(run_attempt(3, rows, rc.confidence));
    const CorrelationTables tables = correlation_tables(rows, coeffs);

    const fs::path dir = g.out / "correlations", summary = g.out / "correlation_summary.csv",
                   coeff_file = g.out / "uhat_coefficients.csv";
    std::vector<fs::path> targets = {summary, coeff_file};
    for (const auto& s : tables.series) targets.push_back(dir / (s.pair + "__" + s.alloy + ".csv"));
    claim(targets, g.force);

    emit(r, coeff_file, coeffs_csv(coeffs, coeff_source));
    emit(r, summary, correlation_summary_csv(tables));
    for (std::size_t i = 0; i < tables.series.size(); ++i) emit(r, targets[i + 2], series_csv(tables.series[i]));
    for (const auto& w : tables.warnings) err << "warning: " << w << "\n";
    out << correlation_summary_csv(tables);
    r.summary = std::to_string(tables.series.size()) + " correlation series";
    return r;
}

CommandResult cmd_validate(const Globals&, bool quick, double diffusivity_error, std::ostream& out) {
    CommandResult r;
    ValidationOptions opt;
    opt.quick = quick;
    opt.diffusivity_error = diffusivity_error;
    const auto checks = run_validation(opt);
    out << format_checks(checks);
    const auto failed = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; });
    r.summary = std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks passed";
    if (failed) r.exit_code = kExitRuntime;
    return r;
}

}  // namespace

CommandResult run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dimensionless LPBF meltpool simulator and regression lab", "lpbf"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::string out_dir = g.out.string();
    app.add_option("--config", g.config, "Config file of key = value settings")->envname("LPBF_CONFIG");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads for sweeps [count]")->check(CLI::PositiveNumber);
    app.add_flag("--coarse", g.coarse, "Use the coarse grid (spacing 2 layer thicknesses)");
    app.add_flag("--force", g.force, "Overwrite existing outputs; rerun sweep cases stored under another config");

    CaseFlags cf;
    const auto add_case_flags = [&](CLI::App* sub) {
        sub->add_option("--alloy", cf.alloy, "Alloy name")->capture_default_str();
        sub->add_option("--power", cf.power, "Laser power [W]")->capture_default_str();
        sub->add_option("--speed", cf.speed, "Scan speed [m/s]")->capture_default_str();
    };

    auto* numbers = app.add_subcommand("numbers", "Print the dimensionless groups as CSV");
    add_case_flags(numbers);
    std::string cases_file;
    bool all = false, list = false;
    numbers->add_option("--cases", cases_file, "Case table CSV (alloy,P_W,v_p_m_s,...)");
    numbers->add_flag("--all", all, "Every built-in case");
    numbers->add_flag("--list-alloys", list, "List the built-in alloys");

    auto* simulate = app.add_subcommand("simulate", "Run one case and write probes, fields and metrics");
    add_case_flags(simulate);
    std::optional<double> spacing, t_end;
    simulate->add_option("--spacing", spacing, "Grid spacing [layer thicknesses]; overrides the config");
    simulate->add_option("--t-end", t_end, "End time [l_p / v_p]; overrides the config");

    auto* sweep = app.add_subcommand("sweep", "Run the case matrix into a resumable store and build the dataset");
    std::size_t stop_after = 0;
    sweep->add_option("--cases", cases_file, "Case table CSV; default is the built-in 60 cases");
    sweep->add_option("--stop-after", stop_after, "Stop after this many new cases [count]");

    std::string dataset;
    auto* regress = app.add_subcommand("regress", "Fit the regression attempts to a dataset");
    int attempt = 0;
    regress->add_option("dataset", dataset, "Dataset CSV from sweep [default: <out>/sweep_dataset.csv]");
    regress->add_option("--attempt", attempt, "Attempt 1, 2 or 3; default all")->check(CLI::Range(1, 3));

    auto* report = app.add_subcommand("report", "Write the correlation tables for every pair and alloy");
    std::string coeff_source = "fit";
    report->add_option("dataset", dataset, "Dataset CSV from sweep [default: <out>/sweep_dataset.csv]");
    report
        ->add_option("--coeffs", coeff_source,
                     "Uhat coefficients: fit (attempt 3 on the dataset) or reference (0.8146, 0.0082, -0.1654)")
        ->check(CLI::IsMember({"fit", "reference"}))
        ->capture_default_str();

    auto* validate_cmd = app.add_subcommand("validate", "Run the verification suite");
    bool quick = false;
    double diffusivity_error = 1.0;
    validate_cmd->add_flag("--quick", quick, "Coarse resolutions");
    validate_cmd->add_option("--inject-diffusivity-error", diffusivity_error,
                             "Scale the solver diffusivity by this factor [ratio] (negative control)")
        ->check(CLI::PositiveNumber);

    CommandResult result;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        result.exit_code = app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
        return result;
    }
    g.out = out_dir;
    if (dataset.empty()) dataset = (g.out / "sweep_dataset.csv").string();

    try {
        if (*numbers) result = cmd_numbers(g, cf, cases_file, all, list, out);
        else if (*simulate) result = cmd_simulate(g, cf, spacing, t_end, out, err);
        else if (*sweep) result = cmd_sweep(g, cases_file, stop_after, out, err);
        else if (*regress) result = cmd_regress(g, dataset, attempt, out);
        else if (*report) result = cmd_report(g, dataset, coeff_source, out, err);
        else if (*validate_cmd) result = cmd_validate(g, quick, diffusivity_error, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        result.exit_code = kExitValidation;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        result.exit_code = kExitValidation;
    } catch (const RankDeficientError& e) {
        err << "error: " << e.what() << "\n";
        result.exit_code = kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        result.exit_code = kExitRuntime;
    }
    if (!result.summary.empty()) err << result.summary << "\n";
    return result;
}

}  // namespace lpbf
