#pragma once

#include "crlb/bounds.hpp"
#include "crlb/config.hpp"
#include "crlb/rademacher.hpp"
#include "crlb/risks.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace crlb {

struct ResultRow {
    std::uint64_t seed = 0;
    int n = 0, k = 0, d = 0, big_d = 0;
    std::string loss;
    std::string feature;
    double lambda = 0.0, radius = 0.0;
    double emp_risk = 0.0;
    double pop_risk = 0.0, pop_risk_se = 0.0;
    double gap = 0.0;
    double term_a = 0.0, term_a_se = 0.0;
    double term_b = 0.0, term_b_se = 0.0;
    double term_c = 0.0, term_c_se = 0.0;
    double bound_l2 = 0.0, bound_linf = 0.0, bound_sb = 0.0, baseline = 0.0;
    std::int64_t runtime_ms = 0;
};

extern const char* kResultCsvHeader;

struct SweepResult {
    ExperimentConfig config;
    std::vector<ResultRow> rows;
};

// One row per k in the grid: build data, train, estimate the three complexity
// terms, evaluate every bound, and measure the population gap. Deterministic
// per master seed; rows come back in grid order. runtime_ms stays 0 unless
// `timing` is set, keeping the default artifacts byte-reproducible.
SweepResult run_sweep(const ExperimentConfig& config, bool timing = false);

enum class ReportFormat { Csv, Json, PlotData };

ReportFormat report_format_from_string(const std::string& name);

std::string render_csv(const SweepResult& result);
std::string render_plot_data(const SweepResult& result);

nlohmann::ordered_json to_json(const SweepResult& result);
SweepResult sweep_from_json(const nlohmann::ordered_json& j);

// Recomputes every bound column from the row's echoed inputs through the
// calculators; throws if any stored value fails to reproduce bit-for-bit.
void recompute_check(const SweepResult& result);

// Writes report.csv / report.json / plot.csv into `out_dir`; returns the path.
std::string emit_report(const SweepResult& result, ReportFormat format,
                        const std::string& out_dir);

// JSON records for estimates, bounds, and verification reports.
nlohmann::ordered_json estimate_to_json(const RademacherEstimate& est,
                                        const std::string& term);
nlohmann::ordered_json bound_to_json(const BoundReport& report);

}  // namespace crlb
