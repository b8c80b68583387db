#pragma once

#include "ock/ode_learner.hpp"

namespace ock {

// Precomputed evaluation state for a fitted model. Building one hoists the
// endpoint table out of the per-step field calls; cheap to copy into the
// VectorField closure.
class FieldEvaluator {
public:
    explicit FieldEvaluator(const OckModel& model);

    // states: p x d, returns p x d field values
    Eigen::MatrixXd operator()(const Eigen::Ref<const Eigen::MatrixXd>& states) const;
    VectorField as_field() const;

private:
    ModelPath path_;
    KernelSpec kernel_;
    Eigen::MatrixXd points_;      // implicit: deduplicated segment endpoints
    Eigen::MatrixXd combine_;     // implicit: n_points x d, folds gather + alpha into one product
    FeatureMap feature_map_;      // explicit
    Eigen::MatrixXd weights_;     // explicit
};

// One-shot convenience around FieldEvaluator.
Eigen::MatrixXd eval_field(const OckModel& model, const Eigen::Ref<const Eigen::MatrixXd>& states);

// Rollout result. times/states hold the finite prefix of the requested grid;
// on divergence first_bad_index is the index of the first requested time with
// a non-finite state.
struct PredictedTrajectory {
    std::vector<double> times;
    Eigen::MatrixXd states;
    bool diverged = false;
    int first_bad_index = -1;
};

// Classic RK4 with substeps equal steps inside each grid interval. The first
// output state is exactly x0.
PredictedTrajectory integrate(const VectorField& field, const Eigen::Ref<const Eigen::VectorXd>& x0,
                              const std::vector<double>& times, int substeps = 10);

// Err = sqrt(sum over i >= 2 of (t_i - t_{i-1}) * ||y_i - yhat_i||^2).
// Time grids must match exactly.
double err_metric(const SnapshotSeries& truth, const PredictedTrajectory& pred);

// Mean over consecutive pairs of the one-interval Err: the model is restarted
// from the true state at the left end of each interval.
double one_step_err(const SnapshotSeries& truth, const OckModel& model, int substeps = 10);

// Err of the frozen predictor yhat(t) = y_1.
double null_model_err(const SnapshotSeries& truth);

// Mean/median aggregation; divergent trajectories enter as +infinity.
struct EvalSummary {
    std::vector<double> errs;
    double mean = 0.0;
    double median = 0.0;
    int diverged_count = 0;
};

EvalSummary summarize_errs(const std::vector<double>& errs, int diverged_count = 0);

}  // namespace ock
