#pragma once

#include "crlb/common.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crlb {

// Latent-class generative model: classes c ~ prior, points from an isotropic
// Gaussian around the class mean.
struct LatentClassModel {
    VectorXd prior;       // length C, nonnegative, sums to 1 within 1e-12
    MatrixXd class_means; // C x D, one row per class
    double noise_scale;   // sigma > 0

    int num_classes() const { return static_cast<int>(prior.size()); }
    int dim() const { return static_cast<int>(class_means.cols()); }
    void validate() const;
};

// Mean presets: "simplex" = orthonormal basis rows (needs D >= C),
// "sphere" = unit-normalized Gaussian rows drawn from `seed`.
MatrixXd preset_means(const std::string& kind, int num_classes, int dim, std::uint64_t seed);

LatentClassModel make_model(int num_classes, int dim, double sigma,
                            const std::string& means_preset, std::uint64_t seed);

struct ContrastiveBlock {
    VectorXd anchor;
    VectorXd positive;
    std::vector<VectorXd> negatives;
};

struct ContrastiveDataset {
    std::vector<ContrastiveBlock> blocks;

    int size() const { return static_cast<int>(blocks.size()); }
    int negatives_per_block() const {
        return blocks.empty() ? 0 : static_cast<int>(blocks.front().negatives.size());
    }
    int dim() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().anchor.size()); }
    void validate() const;
};

struct Triplet {
    VectorXd anchor;
    VectorXd positive;
    VectorXd negative;
};

// The n*k per-negative expansion of a dataset, grouped by source block with
// negatives in their original order.
struct ExpandedTripletSet {
    std::vector<Triplet> triples;
    int source_n = 0;
    int source_k = 0;
};

struct SupervisedSample {
    VectorXd x;
    int label;  // index into the task's class subset
};

struct SupervisedTask {
    std::vector<int> classes;  // distinct class ids, in draw order
    std::vector<SupervisedSample> samples;
};

int sample_class(const LatentClassModel& model, Rng& rng);
VectorXd sample_from_class(const LatentClassModel& model, int c, Rng& rng);

// One similar pair: c ~ prior, then x, x+ i.i.d. from N(mean_c, sigma^2 I).
std::pair<VectorXd, VectorXd> sample_similar_pair(const LatentClassModel& model, Rng& rng);

// k independent draws from the class-marginal mixture.
std::vector<VectorXd> sample_negatives(const LatentClassModel& model, int k, Rng& rng);

// n blocks, each one similar pair plus k fresh negatives. Block j draws from
// the subseed (seed, kBlock, j), so generation order never matters.
ContrastiveDataset build_dataset(const LatentClassModel& model, int n, int k,
                                 std::uint64_t seed);

// Triple j*k + i = (anchor_j, positive_j, negative_{j,i}); deterministic.
ExpandedTripletSet expand_to_triplets(const ContrastiveDataset& dataset);

// Distinct task classes drawn as i.i.d. prior samples conditioned on
// distinctness; labels from the prior renormalized to the subset.
SupervisedTask sample_supervised_task(const LatentClassModel& model, int task_size,
                                      int num_samples, std::uint64_t seed);

}  // namespace crlb
