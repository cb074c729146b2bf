#include "crlb/sweep.hpp"

#include "crlb/io.hpp"
#include "crlb/trainer.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

namespace crlb {

const char* kResultCsvHeader =
    "seed,n,k,d,D,loss,feature,lambda,R,emp_risk,pop_risk,pop_risk_se,gap,"
    "term_A,term_A_se,term_B,term_B_se,term_C,term_C_se,"
    "bound_l2,bound_linf,bound_sb,baseline,runtime_ms";

namespace {

ResultRow run_point(const ExperimentConfig& cfg, const LatentClassModel& model, int k,
                    std::size_t grid_index, bool timing) {
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t seed_k = derive_seed(cfg.seed, seedtag::kSweep, grid_index);

    const ContrastiveDataset dataset =
        build_dataset(model, cfg.n, k, derive_seed(seed_k, 1));

    TrainConfig train_cfg = cfg.train;
    train_cfg.seed = derive_seed(seed_k, 3);
    const FeatureMap init = initial_map(cfg.feature, model.dim(), derive_seed(seed_k, 2));
    const TrainResult trained = train(init, dataset, cfg.loss, train_cfg);
    const FeatureMap& f = trained.best;

    const RiskEstimate emp = empirical_unsup_risk(f, dataset, cfg.loss);
    const RiskEstimate pop =
        population_unsup_risk(f, model, cfg.loss, k, cfg.mc.pop_draws, derive_seed(seed_k, 4));

    // complexity terms over the raw (un-projected) class; the bound for the
    // projected class is controlled by the raw-class sign sums
    const FeatureMap raw_class = feature_prototype(cfg.feature, model.dim(), false);
    TermConfig term_cfg;
    term_cfg.sign_draws = cfg.mc.sign_draws;
    term_cfg.solver.kind = raw_class.is_linear() ? InnerSolverKind::ClosedFormDual
                                                 : InnerSolverKind::ProjectedAscent;
    const RademacherEstimate est_a =
        estimate_term(ComplexityTerm::A, dataset, raw_class, term_cfg, derive_seed(seed_k, 5));
    const RademacherEstimate est_b =
        estimate_term(ComplexityTerm::B, dataset, raw_class, term_cfg, derive_seed(seed_k, 6));
    const RademacherEstimate est_c =
        estimate_term(ComplexityTerm::C, dataset, raw_class, term_cfg, derive_seed(seed_k, 7));

    const double radius = cfg.feature.radius;
    const double b = uniform_bound(cfg.loss, radius, k);

    ResultRow row;
    row.seed = cfg.seed;
    row.n = cfg.n;
    row.k = k;
    row.d = cfg.feature.dim;
    row.big_d = model.dim();
    row.loss = to_string(cfg.loss);
    row.feature = cfg.feature.kind;
    row.lambda = cfg.feature.lambda;
    row.radius = radius;
    row.emp_risk = emp.value;
    row.pop_risk = pop.value;
    row.pop_risk_se = pop.std_error.value_or(0.0);
    row.gap = pop.value - emp.value;
    row.term_a = est_a.value;
    row.term_a_se = est_a.std_error.value_or(0.0);
    row.term_b = est_b.value;
    row.term_b_se = est_b.std_error.value_or(0.0);
    row.term_c = est_c.value;
    row.term_c_se = est_c.std_error.value_or(0.0);

    row.bound_l2 = bound_l2(emp.value, est_a.value, radius, lipschitz_l2(cfg.loss), b, cfg.n,
                            cfg.delta)
                       .total;
    row.bound_linf = bound_linf(emp.value, est_c.value, radius, lipschitz_linf(cfg.loss), b,
                                cfg.n, k, cfg.delta)
                         .total;
    if (selfbounding_constant(cfg.loss)) {
        const double rad_h =
            std::sqrt(12.0) * radius * est_c.value / (static_cast<double>(cfg.n) * k);
        row.bound_sb =
            bound_selfbounding(emp.value, rad_h, radius, cfg.loss, b, cfg.n, k, cfg.delta)
                .total;
    } else {
        row.bound_sb = std::numeric_limits<double>::quiet_NaN();
    }
    row.baseline = baseline_bound(emp.value, est_b.value, radius, lipschitz_l2(cfg.loss), b,
                                  cfg.n, k, cfg.delta)
                       .total;

    if (timing)
        row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    return row;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, bool timing) {
    const LatentClassModel model = model_from_config(config.model, config.seed);
    SweepResult result;
    result.config = config;

    std::vector<std::future<ResultRow>> futures;
    futures.reserve(config.k_grid.size());
    for (std::size_t g = 0; g < config.k_grid.size(); ++g)
        futures.push_back(std::async(std::launch::async, [&, g]() {
            return run_point(config, model, config.k_grid[g], g, timing);
        }));
    for (auto& fut : futures) result.rows.push_back(fut.get());
    return result;
}

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    if (name == "plot") return ReportFormat::PlotData;
    throw ConfigError("unknown report format '" + name + "' (csv | json | plot)");
}

namespace {

void append_row_csv(std::ostringstream& out, const ResultRow& r) {
    out << r.seed << ',' << r.n << ',' << r.k << ',' << r.d << ',' << r.big_d << ','
        << r.loss << ',' << r.feature << ',' << format_double(r.lambda) << ','
        << format_double(r.radius) << ',' << format_double(r.emp_risk) << ','
        << format_double(r.pop_risk) << ',' << format_double(r.pop_risk_se) << ','
        << format_double(r.gap) << ',' << format_double(r.term_a) << ','
        << format_double(r.term_a_se) << ',' << format_double(r.term_b) << ','
        << format_double(r.term_b_se) << ',' << format_double(r.term_c) << ','
        << format_double(r.term_c_se) << ',' << format_double(r.bound_l2) << ','
        << format_double(r.bound_linf) << ',' << format_double(r.bound_sb) << ','
        << format_double(r.baseline) << ',' << r.runtime_ms << '\n';
}

}  // namespace

std::string render_csv(const SweepResult& result) {
    std::ostringstream out;
    out << kResultCsvHeader << '\n';
    for (const auto& row : result.rows) append_row_csv(out, row);
    return out.str();
}

std::string render_plot_data(const SweepResult& result) {
    std::ostringstream out;
    out << "series,k,value\n";
    const std::pair<const char*, double ResultRow::*> series[] = {
        {"bound_l2", &ResultRow::bound_l2},
        {"bound_linf", &ResultRow::bound_linf},
        {"bound_sb", &ResultRow::bound_sb},
        {"baseline", &ResultRow::baseline},
    };
    for (const auto& [name, member] : series)
        for (const auto& row : result.rows)
            out << name << ',' << row.k << ',' << format_double(row.*member) << '\n';
    return out.str();
}

nlohmann::ordered_json to_json(const SweepResult& result) {
    nlohmann::ordered_json j;
    const auto& cfg = result.config;
    j["config"] = {
        {"seed", cfg.seed},
        {"loss", to_string(cfg.loss)},
        {"n", cfg.n},
        {"k_grid", cfg.k_grid},
        {"delta", cfg.delta},
        {"feature_kind", cfg.feature.kind},
        {"feature_dim", cfg.feature.dim},
        {"lambda", cfg.feature.lambda},
        {"radius", cfg.feature.radius},
        {"model_classes", cfg.model.classes},
        {"model_dim", cfg.model.dim},
        {"model_sigma", cfg.model.sigma},
    };
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : result.rows) {
        nlohmann::ordered_json row;
        row["seed"] = r.seed;
        row["n"] = r.n;
        row["k"] = r.k;
        row["d"] = r.d;
        row["D"] = r.big_d;
        row["loss"] = r.loss;
        row["feature"] = r.feature;
        row["lambda"] = r.lambda;
        row["R"] = r.radius;
        row["emp_risk"] = r.emp_risk;
        row["pop_risk"] = r.pop_risk;
        row["pop_risk_se"] = r.pop_risk_se;
        row["gap"] = r.gap;
        row["term_A"] = r.term_a;
        row["term_A_se"] = r.term_a_se;
        row["term_B"] = r.term_b;
        row["term_B_se"] = r.term_b_se;
        row["term_C"] = r.term_c;
        row["term_C_se"] = r.term_c_se;
        row["bound_l2"] = r.bound_l2;
        row["bound_linf"] = r.bound_linf;
        row["bound_sb"] = r.bound_sb;
        row["baseline"] = r.baseline;
        row["runtime_ms"] = r.runtime_ms;
        j["rows"].push_back(std::move(row));
    }
    return j;
}

SweepResult sweep_from_json(const nlohmann::ordered_json& j) {
    SweepResult result;
    const auto& cfg = j.at("config");
    result.config.seed = cfg.at("seed").get<std::uint64_t>();
    result.config.loss = loss_from_string(cfg.at("loss").get<std::string>());
    result.config.n = cfg.at("n").get<int>();
    result.config.k_grid = cfg.at("k_grid").get<std::vector<int>>();
    result.config.delta = cfg.at("delta").get<double>();
    result.config.feature.kind = cfg.at("feature_kind").get<std::string>();
    result.config.feature.dim = cfg.at("feature_dim").get<int>();
    result.config.feature.lambda = cfg.at("lambda").get<double>();
    result.config.feature.radius = cfg.at("radius").get<double>();
    result.config.model.classes = cfg.at("model_classes").get<int>();
    result.config.model.dim = cfg.at("model_dim").get<int>();
    result.config.model.sigma = cfg.at("model_sigma").get<double>();
    for (const auto& row : j.at("rows")) {
        ResultRow r;
        r.seed = row.at("seed").get<std::uint64_t>();
        r.n = row.at("n").get<int>();
        r.k = row.at("k").get<int>();
        r.d = row.at("d").get<int>();
        r.big_d = row.at("D").get<int>();
        r.loss = row.at("loss").get<std::string>();
        r.feature = row.at("feature").get<std::string>();
        r.lambda = row.at("lambda").get<double>();
        r.radius = row.at("R").get<double>();
        r.emp_risk = row.at("emp_risk").get<double>();
        r.pop_risk = row.at("pop_risk").get<double>();
        r.pop_risk_se = row.at("pop_risk_se").get<double>();
        r.gap = row.at("gap").get<double>();
        r.term_a = row.at("term_A").get<double>();
        r.term_a_se = row.at("term_A_se").get<double>();
        r.term_b = row.at("term_B").get<double>();
        r.term_b_se = row.at("term_B_se").get<double>();
        r.term_c = row.at("term_C").get<double>();
        r.term_c_se = row.at("term_C_se").get<double>();
        r.bound_l2 = row.at("bound_l2").get<double>();
        r.bound_linf = row.at("bound_linf").get<double>();
        r.bound_sb = row.at("bound_sb").get<double>();
        r.baseline = row.at("baseline").get<double>();
        r.runtime_ms = row.at("runtime_ms").get<std::int64_t>();
        result.rows.push_back(std::move(r));
    }
    return result;
}

void recompute_check(const SweepResult& result) {
    const double delta = result.config.delta;
    for (const auto& r : result.rows) {
        const LossKind loss = loss_from_string(r.loss);
        const double b = uniform_bound(loss, r.radius, r.k);
        const double l2 =
            bound_l2(r.emp_risk, r.term_a, r.radius, lipschitz_l2(loss), b, r.n, delta).total;
        const double linf = bound_linf(r.emp_risk, r.term_c, r.radius, lipschitz_linf(loss), b,
                                       r.n, r.k, delta)
                                .total;
        const double base = baseline_bound(r.emp_risk, r.term_b, r.radius, lipschitz_l2(loss),
                                           b, r.n, r.k, delta)
                                .total;
        double sb = std::numeric_limits<double>::quiet_NaN();
        if (selfbounding_constant(loss)) {
            const double rad_h =
                std::sqrt(12.0) * r.radius * r.term_c / (static_cast<double>(r.n) * r.k);
            sb = bound_selfbounding(r.emp_risk, rad_h, r.radius, loss, b, r.n, r.k, delta).total;
        }
        const bool sb_ok = (std::isnan(sb) && std::isnan(r.bound_sb)) || sb == r.bound_sb;
        if (l2 != r.bound_l2 || linf != r.bound_linf || base != r.baseline || !sb_ok)
            throw std::runtime_error(
                "recompute_check: stored bound columns do not reproduce from row inputs (k=" +
                std::to_string(r.k) + ")");
    }
}

std::string emit_report(const SweepResult& result, ReportFormat format,
                        const std::string& out_dir) {
    if (result.rows.empty()) throw std::invalid_argument("emit_report: no rows");
    std::filesystem::create_directories(out_dir);
    std::string path;
    std::string payload;
    switch (format) {
        case ReportFormat::Csv:
            path = out_dir + "/report.csv";
            payload = render_csv(result);
            break;
        case ReportFormat::Json:
            path = out_dir + "/report.json";
            payload = to_json(result).dump(2) + "\n";
            break;
        case ReportFormat::PlotData:
            path = out_dir + "/plot.csv";
            payload = render_plot_data(result);
            break;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot write '" + path + "'");
    out << payload;
    return path;
}

nlohmann::ordered_json estimate_to_json(const RademacherEstimate& est,
                                        const std::string& term) {
    nlohmann::ordered_json j;
    j["term"] = term;
    j["value"] = est.value;
    if (est.std_error)
        j["std_error"] = *est.std_error;
    else
        j["std_error"] = nullptr;
    j["method"] = to_string(est.method);
    j["solver"] = {
        {"kind", to_string(est.solver.kind)},
        {"ascent_steps", est.solver.ascent_steps},
        {"ascent_restarts", est.solver.ascent_restarts},
    };
    j["n_sign_draws"] = est.n_sign_draws;
    j["lower_bound_only"] = est.solver.kind == InnerSolverKind::ProjectedAscent;
    return j;
}

nlohmann::ordered_json bound_to_json(const BoundReport& report) {
    nlohmann::ordered_json j;
    j["theorem"] = to_string(report.theorem_id);
    nlohmann::ordered_json comps;
    for (const auto& [name, value] : report.components) comps[name] = value;
    j["components"] = std::move(comps);
    j["total"] = report.total;
    nlohmann::ordered_json inputs;
    for (const auto& [name, value] : report.inputs) inputs[name] = value;
    j["inputs"] = std::move(inputs);
    if (!report.complexity_source.empty()) j["complexity_source"] = report.complexity_source;
    if (!report.downstream_of.empty()) j["downstream_of"] = report.downstream_of;
    return j;
}

}  // namespace crlb
