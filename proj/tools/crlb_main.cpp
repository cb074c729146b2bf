// Command-line front end: gen, train, complexity, bounds, verify, sweep,
// report. Exit codes: 0 success, 1 verification failure, 2 config error.

#include "crlb/bounds.hpp"
#include "crlb/config.hpp"
#include "crlb/io.hpp"
#include "crlb/rademacher.hpp"
#include "crlb/sweep.hpp"
#include "crlb/trainer.hpp"
#include "crlb/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using crlb::ExperimentConfig;
using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& payload) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << payload;
}

void write_json(const std::string& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

ExperimentConfig load_config(const std::string& path, std::uint64_t* seed_override) {
    ExperimentConfig cfg = crlb::parse_config_file(path);
    if (seed_override) cfg.seed = *seed_override;
    return cfg;
}

struct PointArtifacts {
    crlb::ContrastiveDataset dataset;
    crlb::LatentClassModel model;
    crlb::TrainResult trained;
    int k = 0;
};

// Shared gen+train pipeline for the single-k subcommands (first grid entry),
// seeded identically to sweep grid point 0.
PointArtifacts run_point_pipeline(const ExperimentConfig& cfg) {
    PointArtifacts art;
    art.model = crlb::model_from_config(cfg.model, cfg.seed);
    art.k = cfg.k_grid.front();
    const std::uint64_t seed_k = crlb::derive_seed(cfg.seed, crlb::seedtag::kSweep, 0);
    art.dataset = crlb::build_dataset(art.model, cfg.n, art.k, crlb::derive_seed(seed_k, 1));
    crlb::TrainConfig train_cfg = cfg.train;
    train_cfg.seed = crlb::derive_seed(seed_k, 3);
    const crlb::FeatureMap init =
        crlb::initial_map(cfg.feature, art.model.dim(), crlb::derive_seed(seed_k, 2));
    art.trained = crlb::train(init, art.dataset, cfg.loss, train_cfg);
    return art;
}

crlb::TermConfig term_config(const ExperimentConfig& cfg, const crlb::FeatureMap& raw_class) {
    crlb::TermConfig term_cfg;
    term_cfg.sign_draws = cfg.mc.sign_draws;
    term_cfg.solver.kind = raw_class.is_linear() ? crlb::InnerSolverKind::ClosedFormDual
                                                 : crlb::InnerSolverKind::ProjectedAscent;
    return term_cfg;
}

int cmd_gen(const ExperimentConfig& cfg, const std::string& out_dir) {
    const auto model = crlb::model_from_config(cfg.model, cfg.seed);
    const std::uint64_t seed_k = crlb::derive_seed(cfg.seed, crlb::seedtag::kSweep, 0);
    const auto dataset =
        crlb::build_dataset(model, cfg.n, cfg.k_grid.front(), crlb::derive_seed(seed_k, 1));
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/dataset.csv";
    crlb::write_dataset_csv(dataset, path);
    std::cout << "wrote " << path << " (" << dataset.size() << " blocks, k="
              << dataset.negatives_per_block() << ")\n";
    return 0;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& out_dir) {
    const PointArtifacts art = run_point_pipeline(cfg);
    std::filesystem::create_directories(out_dir);

    std::string trace = "step,risk\n";
    const auto& best_trace = art.trained.best_trace();
    for (std::size_t t = 0; t < best_trace.size(); ++t)
        trace += std::to_string(t) + "," + crlb::format_double(best_trace[t]) + "\n";
    write_text(out_dir + "/trace.csv", trace);
    crlb::write_checkpoint(art.trained.best, out_dir + "/checkpoint.bin");
    crlb::export_checkpoint_csv(art.trained.best, out_dir + "/checkpoint.csv");

    ordered_json summary;
    summary["k"] = art.k;
    summary["best_risk"] = art.trained.best_risk;
    summary["best_restart"] = art.trained.best_restart;
    summary["best_step"] = art.trained.best_step;
    summary["steps"] = cfg.train.steps;
    write_json(out_dir + "/train.json", summary);
    std::cout << "best risk " << art.trained.best_risk << " (restart "
              << art.trained.best_restart << ", step " << art.trained.best_step << ")\n";
    return 0;
}

int cmd_complexity(const ExperimentConfig& cfg, const std::string& term_name,
                   const std::string& out_dir) {
    crlb::ComplexityTerm term;
    if (term_name == "A")
        term = crlb::ComplexityTerm::A;
    else if (term_name == "B")
        term = crlb::ComplexityTerm::B;
    else if (term_name == "C")
        term = crlb::ComplexityTerm::C;
    else
        throw crlb::ConfigError("--term must be A, B or C");

    const auto model = crlb::model_from_config(cfg.model, cfg.seed);
    const std::uint64_t seed_k = crlb::derive_seed(cfg.seed, crlb::seedtag::kSweep, 0);
    const auto dataset =
        crlb::build_dataset(model, cfg.n, cfg.k_grid.front(), crlb::derive_seed(seed_k, 1));
    const auto raw_class = crlb::feature_prototype(cfg.feature, model.dim(), false);
    const auto est = crlb::estimate_term(
        term, dataset, raw_class, term_config(cfg, raw_class),
        crlb::derive_seed(seed_k, term == crlb::ComplexityTerm::A   ? 5
                                  : term == crlb::ComplexityTerm::B ? 6
                                                                    : 7));
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/complexity_" + term_name + ".json";
    write_json(path, crlb::estimate_to_json(est, term_name));
    std::cout << "term " << term_name << " = " << est.value << " +- "
              << est.std_error.value_or(0.0) << "\n";
    return 0;
}

int cmd_bounds(const ExperimentConfig& cfg, const std::string& out_dir) {
    const PointArtifacts art = run_point_pipeline(cfg);
    const ExperimentConfig& c = cfg;
    const int k = art.k;
    const std::uint64_t seed_k = crlb::derive_seed(c.seed, crlb::seedtag::kSweep, 0);
    const auto& f = art.trained.best;

    const auto emp = crlb::empirical_unsup_risk(f, art.dataset, c.loss);
    const auto pop = crlb::population_unsup_risk(f, art.model, c.loss, k, c.mc.pop_draws,
                                                 crlb::derive_seed(seed_k, 4));
    const auto raw_class = crlb::feature_prototype(c.feature, art.model.dim(), false);
    const auto tcfg = term_config(c, raw_class);
    const auto est_a = crlb::estimate_term(crlb::ComplexityTerm::A, art.dataset, raw_class,
                                           tcfg, crlb::derive_seed(seed_k, 5));
    const auto est_b = crlb::estimate_term(crlb::ComplexityTerm::B, art.dataset, raw_class,
                                           tcfg, crlb::derive_seed(seed_k, 6));
    const auto est_c = crlb::estimate_term(crlb::ComplexityTerm::C, art.dataset, raw_class,
                                           tcfg, crlb::derive_seed(seed_k, 7));

    const double radius = c.feature.radius;
    const double b = crlb::uniform_bound(c.loss, radius, k);
    const std::string source = "mc_" + crlb::to_string(tcfg.solver.kind);

    auto l2 = crlb::bound_l2(emp.value, est_a.value, radius, crlb::lipschitz_l2(c.loss), b,
                             c.n, c.delta);
    l2.complexity_source = source;
    auto linf = crlb::bound_linf(emp.value, est_c.value, radius, crlb::lipschitz_linf(c.loss),
                                 b, c.n, k, c.delta);
    linf.complexity_source = source + (c.feature.kind == "linear" ? "_linear" : "_mlp");
    auto base = crlb::baseline_bound(emp.value, est_b.value, radius, crlb::lipschitz_l2(c.loss),
                                     b, c.n, k, c.delta);
    base.complexity_source = source;

    ordered_json j;
    j["k"] = k;
    j["emp_risk"] = emp.value;
    j["pop_risk"] = pop.value;
    j["pop_risk_se"] = pop.std_error.value_or(0.0);
    j["estimates"] = {crlb::estimate_to_json(est_a, "A"), crlb::estimate_to_json(est_b, "B"),
                      crlb::estimate_to_json(est_c, "C")};
    j["bounds"] = ordered_json::array();
    j["bounds"].push_back(crlb::bound_to_json(l2));
    j["bounds"].push_back(crlb::bound_to_json(linf));
    if (crlb::selfbounding_constant(c.loss)) {
        const double rad_h = std::sqrt(12.0) * radius * est_c.value /
                             (static_cast<double>(c.n) * k);
        auto sb = crlb::bound_selfbounding(emp.value, rad_h, radius, c.loss, b, c.n, k, c.delta);
        sb.complexity_source = source;
        j["bounds"].push_back(crlb::bound_to_json(sb));
    }
    j["bounds"].push_back(crlb::bound_to_json(base));
    j["downstream"] = crlb::bound_to_json(crlb::downstream_bound(linf));

    std::filesystem::create_directories(out_dir);
    write_json(out_dir + "/bounds.json", j);
    std::cout << "bounds written to " << out_dir << "/bounds.json (gap = "
              << pop.value - emp.value << ")\n";
    return 0;
}

int cmd_verify(const std::string& lemma, int instances, std::uint64_t seed,
               const std::string& out_dir) {
    std::vector<crlb::LemmaId> ids;
    if (lemma == "all")
        ids = crlb::all_lemmas();
    else
        ids = {crlb::lemma_from_string(lemma)};

    std::filesystem::create_directories(out_dir);
    crlb::VerifyConfig cfg;
    cfg.instances = instances;
    bool any_fail = false;
    ordered_json summary = ordered_json::array();
    for (crlb::LemmaId id : ids) {
        const auto report = crlb::verify_inequality(id, cfg, seed);
        ordered_json j;
        j["lemma"] = crlb::to_string(id);
        j["instances"] = report.instances;
        j["violations"] = report.violations;
        j["max_slack"] = report.max_slack;
        j["status"] = report.pass() ? "pass" : "fail";
        write_json(out_dir + "/verify_" + crlb::to_string(id) + ".json", j);
        summary.push_back(j);
        any_fail = any_fail || !report.pass();
        std::printf("%-20s %4d instances %3d violations  slack %.6g  %s\n",
                    crlb::to_string(id).c_str(), report.instances, report.violations,
                    report.max_slack, report.pass() ? "pass" : "FAIL");
    }
    write_json(out_dir + "/verify_summary.json", summary);
    return any_fail ? 1 : 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir, bool timing) {
    const crlb::SweepResult result = crlb::run_sweep(cfg, timing);
    std::filesystem::create_directories(out_dir);
    write_json(out_dir + "/rows.json", crlb::to_json(result));
    write_text(out_dir + "/results.csv", crlb::render_csv(result));
    std::cout << "wrote " << result.rows.size() << " rows to " << out_dir << "\n";
    return 0;
}

int cmd_report(const std::string& out_dir, const std::string& format_name) {
    std::ifstream in(out_dir + "/rows.json");
    if (!in) throw crlb::ConfigError("report: missing " + out_dir + "/rows.json (run sweep)");
    ordered_json j;
    in >> j;
    const crlb::SweepResult result = crlb::sweep_from_json(j);
    crlb::recompute_check(result);
    const std::string path =
        crlb::emit_report(result, crlb::report_format_from_string(format_name), out_dir);
    std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contrastive representation learning bound calculators"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", term = "A", lemma = "all", format = "csv";
    std::uint64_t seed_flag = 0;
    bool seed_set = false, timing = false;
    int instances = 30;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_flag, "override the config master seed")
            ->each([&](const std::string&) { seed_set = true; });
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a dataset CSV");
    add_common(gen, true);
    CLI::App* train = app.add_subcommand("train", "run the optimizer, save trace/checkpoint");
    add_common(train, true);
    CLI::App* complexity = app.add_subcommand("complexity", "estimate one complexity term");
    add_common(complexity, true);
    complexity->add_option("--term", term, "A | B | C");
    CLI::App* bounds = app.add_subcommand("bounds", "full single-k bound report");
    add_common(bounds, true);
    CLI::App* verify = app.add_subcommand("verify", "numerical lemma verification");
    add_common(verify, false);
    verify->add_option("--lemma", lemma, "lemma id or 'all'");
    verify->add_option("--instances", instances, "instances per lemma");
    CLI::App* sweep = app.add_subcommand("sweep", "k-grid experiment sweep");
    add_common(sweep, true);
    sweep->add_flag("--timing", timing, "record wall-clock runtime per row");
    CLI::App* report = app.add_subcommand("report", "re-render sweep rows");
    add_common(report, false);
    report->add_option("--format", format, "csv | json | plot");

    CLI11_PARSE(app, argc, argv);

    try {
        std::uint64_t* seed_override = seed_set ? &seed_flag : nullptr;
        if (gen->parsed()) return cmd_gen(load_config(config_path, seed_override), out_dir);
        if (train->parsed()) return cmd_train(load_config(config_path, seed_override), out_dir);
        if (complexity->parsed())
            return cmd_complexity(load_config(config_path, seed_override), term, out_dir);
        if (bounds->parsed()) return cmd_bounds(load_config(config_path, seed_override), out_dir);
        if (verify->parsed()) return cmd_verify(lemma, instances, seed_set ? seed_flag : 1, out_dir);
        if (sweep->parsed())
            return cmd_sweep(load_config(config_path, seed_override), out_dir, timing);
        if (report->parsed()) return cmd_report(out_dir, format);
    } catch (const crlb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
