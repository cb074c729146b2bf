#pragma once

#include "crlb/common.hpp"
#include "crlb/features.hpp"
#include "crlb/losses.hpp"
#include "crlb/synthgen.hpp"
#include "crlb/trainer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crlb {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    int classes = 2;
    int dim = 2;
    double sigma = 0.5;
    std::string means = "sphere";  // sphere | simplex
    std::string means_file;        // optional explicit C x D CSV, overrides preset
};

struct FeatureConfig {
    std::string kind = "linear";  // linear | mlp
    MatrixNormKind constraint = MatrixNormKind::MixedL2p;
    double p = 2.0;
    double lambda = 1.0;
    int dim = 2;                   // number of output features d
    double radius = 1.0;           // output-ball radius R for risk evaluation
    std::vector<int> widths;       // mlp hidden widths
    std::vector<double> budgets;   // mlp per-layer Frobenius budgets
};

struct McSection {
    int sign_draws = 200;
    int pop_draws = 2000;
    int mean_reps = 10000;
};

struct ExperimentConfig {
    std::uint64_t seed = 42;
    LossKind loss = LossKind::Logistic;
    ModelConfig model;
    int n = 100;
    std::vector<int> k_grid = {4};
    FeatureConfig feature;
    TrainConfig train;
    McSection mc;
    double delta = 0.05;
};

// Flat key=value file with dotted sections and '#' comments; unknown keys are
// configuration errors. The full schema is documented in the README.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

LatentClassModel model_from_config(const ModelConfig& cfg, std::uint64_t seed);

// Zero-weight prototype of the configured constraint class (risk evaluation
// carries the output radius; pass with_radius = false for complexity terms,
// which are taken over the raw class).
FeatureMap feature_prototype(const FeatureConfig& cfg, int data_dim, bool with_radius = true);

FeatureMap initial_map(const FeatureConfig& cfg, int data_dim, std::uint64_t seed);

}  // namespace crlb
