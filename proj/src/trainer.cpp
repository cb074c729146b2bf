#include "crlb/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

namespace crlb {

StepSchedule schedule_from_string(const std::string& name) {
    if (name == "constant") return StepSchedule::Constant;
    if (name == "invsqrt") return StepSchedule::InvSqrt;
    throw std::invalid_argument("unknown step schedule '" + name + "'");
}

std::string to_string(StepSchedule schedule) {
    return schedule == StepSchedule::Constant ? "constant" : "invsqrt";
}

namespace {

ParamGradient risk_gradient(const FeatureMap& f, const ContrastiveDataset& dataset,
                            LossKind loss, const std::vector<int>& block_ids) {
    ParamGradient grad = zeros_like(f);
    const double scale = 1.0 / static_cast<double>(block_ids.size());
    for (int j : block_ids) {
        const auto& block = dataset.blocks[static_cast<std::size_t>(j)];
        const VectorXd scores = block_scores(f, block);
        const VectorXd g = subgradient(loss, scores);
        for (std::size_t i = 0; i < block.negatives.size(); ++i) {
            const double w = g[static_cast<int>(i)] * scale;
            if (w == 0.0) continue;
            accumulate_score_gradient(f, block.anchor, block.positive, block.negatives[i], w,
                                      grad);
        }
    }
    return grad;
}

struct RestartOutcome {
    FeatureMap best;
    double best_risk;
    int best_step;
    std::vector<double> trace;
};

RestartOutcome run_restart(FeatureMap start, const ContrastiveDataset& dataset,
                           LossKind loss, const TrainConfig& cfg, int restart) {
    const int n = dataset.size();
    std::vector<int> full(static_cast<std::size_t>(n));
    std::iota(full.begin(), full.end(), 0);

    RestartOutcome out{start, empirical_unsup_risk(start, dataset, loss).value, 0, {}};
    out.trace.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    out.trace.push_back(out.best_risk);

    FeatureMap current = std::move(start);
    for (int t = 1; t <= cfg.steps; ++t) {
        std::vector<int> batch_ids;
        const std::vector<int>* ids = &full;
        if (cfg.batch > 0 && cfg.batch < n) {
            Rng rng(derive_seed(cfg.seed, seedtag::kBatch, static_cast<std::uint64_t>(restart),
                                static_cast<std::uint64_t>(t)));
            batch_ids.resize(static_cast<std::size_t>(cfg.batch));
            for (auto& id : batch_ids) id = rng.below(n);
            ids = &batch_ids;
        }
        const ParamGradient grad = risk_gradient(current, dataset, loss, *ids);
        const double eta = cfg.schedule == StepSchedule::Constant
                               ? cfg.step_size
                               : cfg.step_size / std::sqrt(static_cast<double>(t));
        axpy_params(current, grad, -eta);
        current = project_params(current);
        const double risk = empirical_unsup_risk(current, dataset, loss).value;
        if (!std::isfinite(risk))
            throw std::runtime_error("train: non-finite risk at restart " +
                                     std::to_string(restart) + ", step " + std::to_string(t));
        out.trace.push_back(risk);
        if (risk < out.best_risk) {
            out.best_risk = risk;
            out.best_step = t;
            out.best = current;
        }
    }
    return out;
}

}  // namespace

TrainResult train(const FeatureMap& init, const ContrastiveDataset& dataset, LossKind loss,
                  const TrainConfig& cfg) {
    dataset.validate();
    if (cfg.steps < 1) throw std::invalid_argument("train: steps must be >= 1");
    if (cfg.step_size <= 0.0) throw std::invalid_argument("train: step_size must be > 0");
    if (cfg.restarts < 1) throw std::invalid_argument("train: restarts must be >= 1");
    if (!params_feasible(init))
        throw std::invalid_argument("train: init violates its norm constraints");

    // restarts are independent; gather in index order so scheduling never
    // affects the result
    std::vector<std::future<RestartOutcome>> futures;
    futures.reserve(static_cast<std::size_t>(cfg.restarts));
    for (int r = 0; r < cfg.restarts; ++r) {
        futures.push_back(std::async(std::launch::async, [&, r]() {
            FeatureMap start = init;
            if (r > 0) {
                Rng rng(derive_seed(cfg.seed, seedtag::kRestart, static_cast<std::uint64_t>(r)));
                start = random_member(init, rng);
            }
            return run_restart(std::move(start), dataset, loss, cfg, r);
        }));
    }

    TrainResult result{init, std::numeric_limits<double>::infinity(), 0, 0, {}};
    for (int r = 0; r < cfg.restarts; ++r) {
        RestartOutcome outcome = futures[static_cast<std::size_t>(r)].get();
        result.traces.push_back(std::move(outcome.trace));
        if (outcome.best_risk < result.best_risk) {
            result.best_risk = outcome.best_risk;
            result.best_restart = r;
            result.best_step = outcome.best_step;
            result.best = std::move(outcome.best);
        }
    }
    return result;
}

GradCheckReport gradient_check(const FeatureMap& f, const ContrastiveDataset& dataset,
                               LossKind loss, double fd_step, int max_coords,
                               std::uint64_t seed) {
    if (loss == LossKind::Hinge) return {false, 0.0, 0};
    dataset.validate();

    std::vector<int> full(static_cast<std::size_t>(dataset.size()));
    std::iota(full.begin(), full.end(), 0);
    const ParamGradient analytic = risk_gradient(f, dataset, loss, full);

    const int total = param_count(f);
    const int coords = std::min(max_coords, total);
    Rng rng(derive_seed(seed, seedtag::kDraw));

    auto risk_at = [&](const FeatureMap& g) {
        return empirical_unsup_risk(g, dataset, loss).value;
    };

    double max_rel = 0.0;
    for (int c = 0; c < coords; ++c) {
        const int flat = coords == total ? c : rng.below(total);
        // locate (matrix, row, col) for the flat index
        int remaining = flat;
        std::size_t mat = 0;
        auto mats = param_matrices(f);
        while (remaining >= static_cast<int>(mats[mat]->size())) {
            remaining -= static_cast<int>(mats[mat]->size());
            ++mat;
        }
        const int row = remaining % static_cast<int>(mats[mat]->rows());
        const int col = remaining / static_cast<int>(mats[mat]->rows());

        FeatureMap plus = f;
        (*param_matrices(plus)[mat])(row, col) += fd_step;
        FeatureMap minus = f;
        (*param_matrices(minus)[mat])(row, col) -= fd_step;
        const double fd = (risk_at(plus) - risk_at(minus)) / (2.0 * fd_step);
        const double an = analytic.mats[mat](row, col);
        const double rel = std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
        max_rel = std::max(max_rel, rel);
    }
    return {true, max_rel, coords};
}

}  // namespace crlb
