#pragma once

#include "crlb/common.hpp"
#include "crlb/features.hpp"
#include "crlb/losses.hpp"
#include "crlb/synthgen.hpp"

#include <optional>

namespace crlb {

struct RiskEstimate {
    double value = 0.0;
    std::optional<double> std_error;  // present only for Monte Carlo estimates
    int n_used = 0;
};

// Downstream linear classifier whose rows are per-class mean embeddings.
struct MeanClassifier {
    MatrixXd weights;  // (K+1) x d, row order matches the task's class list
};

// f(x) . (f(xp) - f(xn))
double triplet_score(const FeatureMap& f, const VectorXd& x, const VectorXd& xp,
                     const VectorXd& xn);

VectorXd block_scores(const FeatureMap& f, const ContrastiveBlock& block);

// Average loss of the k-score vectors over the dataset's blocks.
RiskEstimate empirical_unsup_risk(const FeatureMap& f, const ContrastiveDataset& dataset,
                                  LossKind loss);

// Unbiased Monte Carlo estimate (fresh pair + k negatives per rep, per-rep
// subseeds) with a standard error; reps >= 2.
RiskEstimate population_unsup_risk(const FeatureMap& f, const LatentClassModel& model,
                                   LossKind loss, int k, int reps, std::uint64_t seed);

// Rows are Monte Carlo estimates of E_{x ~ class c}[f(x)].
MeanClassifier mean_classifier(const FeatureMap& f, const LatentClassModel& model,
                               const std::vector<int>& task_classes, int reps,
                               std::uint64_t seed);

// Average multi-class margin loss of x -> W f(x) over labeled samples; the
// per-sample score vector is {g_y - g_c : c != y}.
RiskEstimate supervised_risk(const MeanClassifier& classifier, const FeatureMap& f,
                             const std::vector<SupervisedSample>& samples, LossKind loss_s);

// Mean-classifier supervised risk averaged over distinct task subsets,
// weighted by the conditional probability of drawing the subset; enumerates
// all subsets when C <= 8, otherwise samples `task_samples` subsets.
RiskEstimate average_sup_risk(const FeatureMap& f, const LatentClassModel& model,
                              int task_size, int samples_per_task, int mean_reps,
                              std::uint64_t seed, int task_samples = 64);

}  // namespace crlb
