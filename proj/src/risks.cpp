#include "crlb/risks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crlb {

double triplet_score(const FeatureMap& f, const VectorXd& x, const VectorXd& xp,
                     const VectorXd& xn) {
    return apply(f, x).dot(apply(f, xp) - apply(f, xn));
}

VectorXd block_scores(const FeatureMap& f, const ContrastiveBlock& block) {
    const VectorXd yx = apply(f, block.anchor);
    const VectorXd yp = apply(f, block.positive);
    VectorXd scores(static_cast<int>(block.negatives.size()));
    for (std::size_t i = 0; i < block.negatives.size(); ++i)
        scores[static_cast<int>(i)] = yx.dot(yp - apply(f, block.negatives[i]));
    return scores;
}

RiskEstimate empirical_unsup_risk(const FeatureMap& f, const ContrastiveDataset& dataset,
                                  LossKind loss) {
    dataset.validate();
    double acc = 0.0;
    for (const auto& block : dataset.blocks) acc += evaluate(loss, block_scores(f, block));
    return {acc / dataset.size(), std::nullopt, dataset.size()};
}

RiskEstimate population_unsup_risk(const FeatureMap& f, const LatentClassModel& model,
                                   LossKind loss, int k, int reps, std::uint64_t seed) {
    model.validate();
    if (reps < 2) throw std::invalid_argument("population_unsup_risk: reps must be >= 2");
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < reps; ++r) {
        Rng rng(derive_seed(seed, seedtag::kDraw, static_cast<std::uint64_t>(r)));
        ContrastiveBlock block;
        auto pair = sample_similar_pair(model, rng);
        block.anchor = std::move(pair.first);
        block.positive = std::move(pair.second);
        block.negatives = sample_negatives(model, k, rng);
        const double v = evaluate(loss, block_scores(f, block));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / reps;
    const double var = std::max(0.0, (sumsq - reps * mean * mean) / (reps - 1));
    return {mean, std::sqrt(var / reps), reps};
}

MeanClassifier mean_classifier(const FeatureMap& f, const LatentClassModel& model,
                               const std::vector<int>& task_classes, int reps,
                               std::uint64_t seed) {
    model.validate();
    if (reps < 1) throw std::invalid_argument("mean_classifier: reps must be >= 1");
    for (int c : task_classes)
        if (c < 0 || c >= model.num_classes())
            throw std::invalid_argument("mean_classifier: class id out of range");
    MeanClassifier cls;
    cls.weights = MatrixXd::Zero(static_cast<int>(task_classes.size()), f.output_dim());
    for (std::size_t row = 0; row < task_classes.size(); ++row) {
        Rng rng(derive_seed(seed, seedtag::kClassMean,
                            static_cast<std::uint64_t>(task_classes[row])));
        VectorXd acc = VectorXd::Zero(f.output_dim());
        for (int r = 0; r < reps; ++r)
            acc += apply(f, sample_from_class(model, task_classes[row], rng));
        cls.weights.row(static_cast<int>(row)) = (acc / reps).transpose();
    }
    return cls;
}

RiskEstimate supervised_risk(const MeanClassifier& classifier, const FeatureMap& f,
                             const std::vector<SupervisedSample>& samples, LossKind loss_s) {
    if (samples.empty()) throw std::invalid_argument("supervised_risk: no samples");
    const int n_classes = static_cast<int>(classifier.weights.rows());
    double acc = 0.0;
    for (const auto& s : samples) {
        if (s.label < 0 || s.label >= n_classes)
            throw std::invalid_argument("supervised_risk: label out of range");
        const VectorXd g = classifier.weights * apply(f, s.x);
        VectorXd margins(n_classes - 1);
        int out = 0;
        for (int c = 0; c < n_classes; ++c)
            if (c != s.label) margins[out++] = g[s.label] - g[c];
        acc += evaluate(loss_s, margins);
    }
    return {acc / static_cast<double>(samples.size()), std::nullopt,
            static_cast<int>(samples.size())};
}

namespace {

void enumerate_subsets(int c_total, int size, std::vector<int>& current,
                       std::vector<std::vector<int>>& out, int start) {
    if (static_cast<int>(current.size()) == size) {
        out.push_back(current);
        return;
    }
    for (int c = start; c < c_total; ++c) {
        current.push_back(c);
        enumerate_subsets(c_total, size, current, out, c + 1);
        current.pop_back();
    }
}

}  // namespace

RiskEstimate average_sup_risk(const FeatureMap& f, const LatentClassModel& model,
                              int task_size, int samples_per_task, int mean_reps,
                              std::uint64_t seed, int task_samples) {
    model.validate();
    const int c_total = model.num_classes();
    if (task_size < 2 || task_size > c_total)
        throw std::invalid_argument("average_sup_risk: task_size must be in [2, C]");

    auto risk_of_task = [&](const std::vector<int>& classes, std::uint64_t task_seed) {
        const MeanClassifier cls = mean_classifier(f, model, classes, mean_reps, task_seed);
        Rng rng(derive_seed(task_seed, seedtag::kTask));
        VectorXd restricted(task_size);
        for (int i = 0; i < task_size; ++i) restricted[i] = model.prior[classes[static_cast<std::size_t>(i)]];
        restricted /= restricted.sum();
        std::vector<SupervisedSample> samples;
        samples.reserve(static_cast<std::size_t>(samples_per_task));
        for (int i = 0; i < samples_per_task; ++i) {
            const int label = rng.discrete(restricted);
            samples.push_back(
                {sample_from_class(model, classes[static_cast<std::size_t>(label)], rng), label});
        }
        return supervised_risk(cls, f, samples, LossKind::Logistic).value;
    };

    if (c_total <= 8) {
        // exact outer expectation: weight each unordered subset by the
        // probability of drawing it as distinct iid prior samples
        std::vector<std::vector<int>> subsets;
        std::vector<int> current;
        enumerate_subsets(c_total, task_size, current, subsets, 0);
        double weight_sum = 0.0, acc = 0.0;
        for (std::size_t s = 0; s < subsets.size(); ++s) {
            double w = 1.0;
            for (int c : subsets[s]) w *= model.prior[c];
            weight_sum += w;
            acc += w * risk_of_task(subsets[s], derive_seed(seed, seedtag::kTask, s));
        }
        return {acc / weight_sum, std::nullopt, static_cast<int>(subsets.size())};
    }

    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < task_samples; ++t) {
        const std::uint64_t task_seed = derive_seed(seed, seedtag::kTask, static_cast<std::uint64_t>(t));
        const SupervisedTask task = sample_supervised_task(model, task_size, 1, task_seed);
        const double v = risk_of_task(task.classes, task_seed);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / task_samples;
    const double var = std::max(0.0, (sumsq - task_samples * mean * mean) / (task_samples - 1));
    return {mean, std::sqrt(var / task_samples), task_samples};
}

}  // namespace crlb
