#pragma once

#include "crlb/common.hpp"
#include "crlb/features.hpp"
#include "crlb/losses.hpp"
#include "crlb/risks.hpp"
#include "crlb/synthgen.hpp"

#include <string>
#include <vector>

namespace crlb {

enum class StepSchedule { Constant, InvSqrt };

StepSchedule schedule_from_string(const std::string& name);
std::string to_string(StepSchedule schedule);

struct TrainConfig {
    int steps = 200;
    double step_size = 0.5;
    StepSchedule schedule = StepSchedule::InvSqrt;
    int batch = 0;  // 0 = full batch
    std::uint64_t seed = 0;
    int restarts = 1;
};

struct TrainResult {
    FeatureMap best;
    double best_risk = 0.0;
    int best_restart = 0;
    int best_step = 0;
    // traces[r][t] = full empirical risk of restart r's iterate after t steps
    // (entry 0 is the restart's initial risk)
    std::vector<std::vector<double>> traces;

    const std::vector<double>& best_trace() const {
        return traces[static_cast<std::size_t>(best_restart)];
    }
};

// Projected subgradient descent on the empirical risk; returns the feasible
// iterate with the smallest recorded risk across all restarts (restart 0
// starts from `init`, later restarts from random members of the same class).
// Aborts with a diagnostic if the risk turns non-finite.
TrainResult train(const FeatureMap& init, const ContrastiveDataset& dataset, LossKind loss,
                  const TrainConfig& cfg);

struct GradCheckReport {
    bool smooth = true;          // false when skipped for a nonsmooth loss
    double max_rel_error = 0.0;  // over the sampled coordinates
    int coords_checked = 0;
};

// Analytic full-batch gradient vs. central finite differences on up to
// `max_coords` randomly chosen coordinates (logistic only; hinge reports
// smooth = false and checks nothing).
GradCheckReport gradient_check(const FeatureMap& f, const ContrastiveDataset& dataset,
                               LossKind loss, double fd_step = 1e-5, int max_coords = 50,
                               std::uint64_t seed = 0);

}  // namespace crlb
