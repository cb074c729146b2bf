#include "crlb/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace crlb {

void LatentClassModel::validate() const {
    if (prior.size() == 0) throw std::invalid_argument("model: empty prior");
    if (class_means.rows() != prior.size())
        throw std::invalid_argument("model: one mean row per class required");
    if (noise_scale <= 0.0) throw std::invalid_argument("model: noise_scale must be > 0");
    if (prior.minCoeff() < 0.0) throw std::invalid_argument("model: negative prior entry");
    if (std::abs(prior.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("model: prior must sum to 1 within 1e-12");
}

MatrixXd preset_means(const std::string& kind, int num_classes, int dim, std::uint64_t seed) {
    if (num_classes < 1 || dim < 1)
        throw std::invalid_argument("preset_means: sizes must be positive");
    if (kind == "simplex") {
        if (dim < num_classes)
            throw std::invalid_argument("preset_means: simplex preset needs dim >= classes");
        MatrixXd m = MatrixXd::Zero(num_classes, dim);
        for (int c = 0; c < num_classes; ++c) m(c, c) = 1.0;
        return m;
    }
    if (kind == "sphere") {
        Rng rng(derive_seed(seed, seedtag::kMeans));
        MatrixXd m(num_classes, dim);
        for (int c = 0; c < num_classes; ++c) {
            VectorXd v = rng.gaussian_vector(dim);
            double norm = v.norm();
            if (norm < 1e-12) {
                v.setZero();
                v[0] = 1.0;
                norm = 1.0;
            }
            m.row(c) = (v / norm).transpose();
        }
        return m;
    }
    throw std::invalid_argument("preset_means: unknown preset '" + kind + "'");
}

LatentClassModel make_model(int num_classes, int dim, double sigma,
                            const std::string& means_preset, std::uint64_t seed) {
    LatentClassModel model;
    model.prior = VectorXd::Constant(num_classes, 1.0 / num_classes);
    model.class_means = preset_means(means_preset, num_classes, dim, seed);
    model.noise_scale = sigma;
    model.validate();
    return model;
}

void ContrastiveDataset::validate() const {
    if (blocks.empty()) throw std::invalid_argument("dataset: no blocks");
    const int k = static_cast<int>(blocks.front().negatives.size());
    const int d = static_cast<int>(blocks.front().anchor.size());
    for (const auto& b : blocks) {
        if (static_cast<int>(b.negatives.size()) != k)
            throw std::invalid_argument("dataset: ragged negative counts");
        if (b.anchor.size() != d || b.positive.size() != d)
            throw std::invalid_argument("dataset: inconsistent dimensions");
        for (const auto& neg : b.negatives)
            if (neg.size() != d) throw std::invalid_argument("dataset: inconsistent dimensions");
    }
}

int sample_class(const LatentClassModel& model, Rng& rng) {
    return rng.discrete(model.prior);
}

VectorXd sample_from_class(const LatentClassModel& model, int c, Rng& rng) {
    VectorXd x = model.class_means.row(c).transpose();
    for (int i = 0; i < x.size(); ++i) x[i] += model.noise_scale * rng.gaussian();
    return x;
}

std::pair<VectorXd, VectorXd> sample_similar_pair(const LatentClassModel& model, Rng& rng) {
    model.validate();
    const int c = sample_class(model, rng);
    VectorXd x = sample_from_class(model, c, rng);
    VectorXd xp = sample_from_class(model, c, rng);
    return {std::move(x), std::move(xp)};
}

std::vector<VectorXd> sample_negatives(const LatentClassModel& model, int k, Rng& rng) {
    model.validate();
    if (k < 1) throw std::invalid_argument("sample_negatives: k must be >= 1");
    std::vector<VectorXd> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const int c = sample_class(model, rng);
        out.push_back(sample_from_class(model, c, rng));
    }
    return out;
}

ContrastiveDataset build_dataset(const LatentClassModel& model, int n, int k,
                                 std::uint64_t seed) {
    model.validate();
    if (n < 1 || k < 1) throw std::invalid_argument("build_dataset: n and k must be >= 1");
    ContrastiveDataset ds;
    ds.blocks.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Rng rng(derive_seed(seed, seedtag::kBlock, static_cast<std::uint64_t>(j)));
        auto& block = ds.blocks[static_cast<std::size_t>(j)];
        auto pair = sample_similar_pair(model, rng);
        block.anchor = std::move(pair.first);
        block.positive = std::move(pair.second);
        block.negatives = sample_negatives(model, k, rng);
    }
    return ds;
}

ExpandedTripletSet expand_to_triplets(const ContrastiveDataset& dataset) {
    dataset.validate();
    ExpandedTripletSet out;
    out.source_n = dataset.size();
    out.source_k = dataset.negatives_per_block();
    out.triples.reserve(static_cast<std::size_t>(out.source_n) * out.source_k);
    for (const auto& block : dataset.blocks)
        for (const auto& neg : block.negatives)
            out.triples.push_back({block.anchor, block.positive, neg});
    return out;
}

SupervisedTask sample_supervised_task(const LatentClassModel& model, int task_size,
                                      int num_samples, std::uint64_t seed) {
    model.validate();
    const int c_total = model.num_classes();
    if (task_size < 1 || task_size > c_total)
        throw std::invalid_argument("sample_supervised_task: task_size must be in [1, C]");
    if (num_samples < 1)
        throw std::invalid_argument("sample_supervised_task: num_samples must be >= 1");

    Rng rng(derive_seed(seed, seedtag::kTask));
    SupervisedTask task;

    // i.i.d. prior draws conditioned on distinctness; capped to avoid hanging
    // on priors that concentrate on fewer than task_size classes.
    constexpr int kMaxTries = 1000000;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxTries)
            throw std::runtime_error("sample_supervised_task: could not draw distinct classes");
        std::vector<int> classes;
        classes.reserve(static_cast<std::size_t>(task_size));
        bool distinct = true;
        for (int i = 0; i < task_size && distinct; ++i) {
            const int c = sample_class(model, rng);
            if (std::find(classes.begin(), classes.end(), c) != classes.end())
                distinct = false;
            else
                classes.push_back(c);
        }
        if (distinct) {
            task.classes = std::move(classes);
            break;
        }
    }

    VectorXd restricted = VectorXd::Zero(task_size);
    for (int i = 0; i < task_size; ++i) restricted[i] = model.prior[task.classes[static_cast<std::size_t>(i)]];
    const double total = restricted.sum();
    if (total <= 0.0)
        throw std::runtime_error("sample_supervised_task: task classes carry no prior mass");
    restricted /= total;

    task.samples.reserve(static_cast<std::size_t>(num_samples));
    for (int i = 0; i < num_samples; ++i) {
        const int label = rng.discrete(restricted);
        task.samples.push_back(
            {sample_from_class(model, task.classes[static_cast<std::size_t>(label)], rng), label});
    }
    return task;
}

}  // namespace crlb
