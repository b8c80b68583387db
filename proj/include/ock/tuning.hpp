#pragma once

#include "ock/datasets.hpp"
#include "ock/ode_learner.hpp"

namespace ock {

// Median of pairwise distances over a deterministic subsample of at most
// max_points states; the default lengthscale grid is multiples of this.
double median_pairwise_distance(const std::vector<SnapshotSeries>& series, int max_points = 500);

struct TrainOptions {
    KernelKind kind = KernelKind::Gaussian;
    // absolute lengthscales; when empty, lengthscale_multipliers times the
    // median-distance heuristic
    std::vector<double> lengthscales;
    std::vector<double> lengthscale_multipliers{0.1, 1.0, 10.0, 100.0};
    std::vector<double> lambdas{1e-6, 1e-4, 1e-2, 1.0};
    int feature_count = 2000;       // RandomFourier only
    std::uint64_t rff_seed = 0;     // RandomFourier only
    int substeps = 10;              // validation rollouts
};

struct GridScore {
    double lengthscale = 0.0;
    double lambda = 0.0;
    double val_err = 0.0;  // mean Err over validation series, +inf on divergence
};

struct TrainOutcome {
    OckModel model;
    std::vector<GridScore> scores;
    double chosen_lengthscale = 0.0;
    double chosen_lambda = 0.0;
    double median_distance = 0.0;
    double seconds_search = 0.0;
    double seconds_final_fit = 0.0;
    int train_segments = 0;
};

// Grid search scored by validation Err, then a refit on train + validation at
// the winner. A 1 x 1 grid skips the search; a larger grid with no validation
// series is an error.
TrainOutcome train_model(const std::vector<SnapshotSeries>& train,
                         const std::vector<SnapshotSeries>& validation, const TrainOptions& opts);

// Search only: scores every grid point without the final refit.
TrainOutcome tune_model(const std::vector<SnapshotSeries>& train,
                        const std::vector<SnapshotSeries>& validation, const TrainOptions& opts);

}  // namespace ock
