#include "lpbf/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lpbf/csv.hpp"

namespace lpbf {

std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

const std::vector<std::string>& correlation_pairs() {
    static const std::vector<std::string> pairs = {"PeVmax_vs_MaUhat", "aspect_vs_MaUhat", "volume_vs_SteUhat_over_Tc",
                                                   "Gmax_vs_Uhat", "coolrate_vs_Uhat"};
    return pairs;
}

namespace {

struct PairSpec {
    std::string name, x_name, y_name;
    Transform transform;
    double (*x)(const DatasetRow&, double uhat);
    double (*y)(const DatasetRow&);
};

const std::vector<PairSpec>& specs() {
    static const std::vector<PairSpec> s = {
        {"PeVmax_vs_MaUhat", "MaUhat", "Pe_vmax", Transform::log_log,
         [](const DatasetRow& r, double u) { return composite_measures(r.numbers, u).MaUhat; },
         [](const DatasetRow& r) { return r.numbers.Pe * r.vmax; }},
        {"aspect_vs_MaUhat", "MaUhat", "aspect_ratio", Transform::log_log,
         [](const DatasetRow& r, double u) { return composite_measures(r.numbers, u).MaUhat; },
         [](const DatasetRow& r) { return r.metrics.aspect_ratio; }},
        {"volume_vs_SteUhat_over_Tc", "SteUhat_over_Tc", "volume", Transform::log_log,
         [](const DatasetRow& r, double u) { return composite_measures(r.numbers, u).SteUhat_over_Tc; },
         [](const DatasetRow& r) { return r.metrics.volume; }},
        {"Gmax_vs_Uhat", "Uhat", "Gmax_tilde", Transform::linear,
         [](const DatasetRow&, double u) { return u; }, [](const DatasetRow& r) { return r.metrics.Gmax_tilde; }},
        {"coolrate_vs_Uhat", "Uhat", "coolrate_K_per_s", Transform::log_log,
         [](const DatasetRow&, double u) { return u; }, [](const DatasetRow& r) { return r.metrics.cooling_rate; }},
    };
    return s;
}

}  // namespace

CorrelationTables correlation_tables(const std::vector<DatasetRow>& rows, const UhatCoefficients& coeffs) {
    CorrelationTables out;
    out.coeffs = coeffs;

    std::vector<std::string> alloys;
    std::map<std::string, std::vector<const DatasetRow*>> by_alloy;
    for (const auto& r : rows) {
        if (!by_alloy.count(r.alloy)) alloys.push_back(r.alloy);
        by_alloy[r.alloy].push_back(&r);
    }

    for (const auto& spec : specs())
        for (const auto& alloy : alloys) {
            CorrelationSeries s;
            s.pair = spec.name;
            s.alloy = alloy;
            s.x_name = spec.x_name;
            s.y_name = spec.y_name;
            s.transform = spec.transform;
            std::vector<double> tx, ty;
            for (const DatasetRow* r : by_alloy[alloy]) {
                const double x = spec.x(*r, u_hat(r->numbers, coeffs));
                const double y = spec.y(*r);
                const bool usable = std::isfinite(x) && std::isfinite(y) &&
                                    (spec.transform == Transform::linear || (x > 0.0 && y > 0.0));
                if (!usable) {
                    s.notes.push_back("dropped " + r->case_id + " (" + csv::fmt_g(x) + ", " + csv::fmt_g(y) + ")");
                    continue;
                }
                s.case_ids.push_back(r->case_id);
                s.x.push_back(x);
                s.y.push_back(y);
                tx.push_back(spec.transform == Transform::linear ? x : std::log(x));
                ty.push_back(spec.transform == Transform::linear ? y : std::log(y));
            }
            for (const auto& note : s.notes) out.warnings.push_back(spec.name + "/" + alloy + ": " + note);
            if (s.x.size() < 3) {
                out.warnings.push_back(spec.name + "/" + alloy + ": skipped, only " + std::to_string(s.x.size()) +
                                       " usable points");
                continue;
            }
            s.trend = fit_line(tx, ty);
            s.r = pearson(tx, ty);
            if (!s.r) out.warnings.push_back(spec.name + "/" + alloy + ": correlation undefined (constant series)");
            out.series.push_back(std::move(s));
        }
    return out;
}

std::string series_csv(const CorrelationSeries& s) {
    using csv::fmt;
    std::string out = "# pair " + s.pair + ", alloy " + s.alloy + ", transform " +
                      (s.transform == Transform::log_log ? "log-log" : "linear") + "\n";
    if (s.trend)
        out += "# trend slope " + fmt(s.trend->slope) + " intercept " + fmt(s.trend->intercept) + "\n";
    else
        out += "# trend undefined\n";
    out += "# pearson_r " + (s.r ? fmt(*s.r) : std::string("undefined")) + "\n";
    out += "case_id," + s.x_name + "," + s.y_name + "\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) out += s.case_ids[i] + "," + fmt(s.x[i]) + "," + fmt(s.y[i]) + "\n";
    return out;
}

std::string correlation_summary_csv(const CorrelationTables& t) {
    using csv::fmt;
    std::string out = "pair,alloy,transform,points,slope,intercept,pearson_r\n";
    for (const auto& s : t.series) {
        out += s.pair + "," + s.alloy + "," + (s.transform == Transform::log_log ? "log-log" : "linear") + "," +
               std::to_string(s.x.size()) + "," + (s.trend ? fmt(s.trend->slope) : "nan") + "," +
               (s.trend ? fmt(s.trend->intercept) : "nan") + "," + (s.r ? fmt(*s.r) : "nan") + "\n";
    }
    return out;
}

}  // namespace lpbf
