#include "ock/tuning.hpp"

#include "ock/ode_inference.hpp"
#include "ock/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace ock {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double validation_err(const OckModel& model, const std::vector<SnapshotSeries>& validation,
                      int substeps) {
    VectorField field = FieldEvaluator(model).as_field();
    double acc = 0.0;
    for (const SnapshotSeries& s : validation) {
        PredictedTrajectory pred =
            integrate(field, s.states.row(0).transpose(), s.times, substeps);
        if (pred.diverged) return std::numeric_limits<double>::infinity();
        acc += err_metric(s, pred);
    }
    return acc / static_cast<double>(validation.size());
}

KernelSpec make_spec(const TrainOptions& opts, double lengthscale) {
    return opts.kind == KernelKind::Gaussian
               ? KernelSpec::gaussian(lengthscale)
               : KernelSpec::random_fourier(lengthscale, opts.feature_count, opts.rff_seed);
}

OckModel fit_for(const TrainingSet& train, const KernelSpec& spec, double lambda) {
    return spec.kind == KernelKind::Gaussian ? fit_implicit(train, spec, lambda)
                                             : fit_explicit(train, spec, lambda);
}

TrainOutcome run(const std::vector<SnapshotSeries>& train,
                 const std::vector<SnapshotSeries>& validation, const TrainOptions& opts,
                 bool refit) {
    require(!train.empty(), "training set is empty");
    require(opts.substeps >= 1, "substeps must be >= 1");
    require(!opts.lambdas.empty(), "lambda grid is empty");
    for (double l : opts.lambdas) require(std::isfinite(l) && l > 0.0, "lambdas must be positive");

    TrainOutcome out;
    std::vector<double> lengthscales = opts.lengthscales;
    if (lengthscales.empty()) {
        require(!opts.lengthscale_multipliers.empty(), "lengthscale grid is empty");
        out.median_distance = median_pairwise_distance(train);
        for (double m : opts.lengthscale_multipliers)
            lengthscales.push_back(m * out.median_distance);
    }
    for (double l : lengthscales)
        require(std::isfinite(l) && l > 0.0, "lengthscales must be positive");

    const bool single = lengthscales.size() == 1 && opts.lambdas.size() == 1;
    require(single || !validation.empty(),
            "grid search needs a validation split; pass single hyperparameters for a direct fit");

    auto t0 = std::chrono::steady_clock::now();
    TrainingSet train_set = reshape_snapshots(train);
    out.train_segments = train_set.size();

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_at = 0;
    if (!single || !refit) {  // tune scores even a 1 x 1 grid
        for (double ls : lengthscales) {
            KernelSpec spec = make_spec(opts, ls);
            // the Gram depends only on the lengthscale; reuse it across lambdas
            Eigen::MatrixXd m;
            if (spec.kind == KernelKind::Gaussian)
                m = double_quadrature_gram(train_set.segments, spec);
            for (double lambda : opts.lambdas) {
                OckModel model;
                if (spec.kind == KernelKind::Gaussian) {
                    model.path = ModelPath::Implicit;
                    model.kernel = spec;
                    model.lambda = lambda;
                    model.dimension = train_set.dimension;
                    model.segments = train_set.segments;
                    model.alpha = solve_regularized_spd(
                        m, train_set.y, lambda * static_cast<double>(train_set.size()));
                } else {
                    model = fit_explicit(train_set, spec, lambda);
                }
                GridScore score;
                score.lengthscale = ls;
                score.lambda = lambda;
                score.val_err = validation_err(model, validation, opts.substeps);
                if (score.val_err < best) {
                    best = score.val_err;
                    best_at = out.scores.size();
                }
                out.scores.push_back(score);
            }
        }
        out.chosen_lengthscale = out.scores[best_at].lengthscale;
        out.chosen_lambda = out.scores[best_at].lambda;
    } else {
        out.chosen_lengthscale = lengthscales[0];
        out.chosen_lambda = opts.lambdas[0];
    }
    out.seconds_search = seconds_since(t0);

    if (refit) {
        auto t1 = std::chrono::steady_clock::now();
        std::vector<SnapshotSeries> all = train;
        all.insert(all.end(), validation.begin(), validation.end());
        TrainingSet final_set = reshape_snapshots(all);
        out.model = fit_for(final_set, make_spec(opts, out.chosen_lengthscale), out.chosen_lambda);
        out.seconds_final_fit = seconds_since(t1);
    }
    return out;
}

}  // namespace

double median_pairwise_distance(const std::vector<SnapshotSeries>& series, int max_points) {
    require(max_points >= 2, "median_pairwise_distance needs max_points >= 2");
    int total = 0;
    for (const SnapshotSeries& s : series) total += s.size();
    require(total >= 2, "median_pairwise_distance needs at least 2 states");

    const int d = series.front().dimension();
    int keep = std::min(total, max_points);
    int stride = std::max(total / keep, 1);
    Eigen::MatrixXd pts(keep, d);
    int seen = 0, taken = 0;
    for (const SnapshotSeries& s : series)
        for (int i = 0; i < s.size() && taken < keep; ++i, ++seen)
            if (seen % stride == 0) pts.row(taken++) = s.states.row(i);
    pts.conservativeResize(taken, d);

    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(taken) * (taken - 1) / 2);
    for (int i = 0; i < taken; ++i)
        for (int j = i + 1; j < taken; ++j) {
            double v = (pts.row(i) - pts.row(j)).norm();
            if (v > 0.0) dist.push_back(v);
        }
    require(!dist.empty(), "all sampled states coincide");
    std::sort(dist.begin(), dist.end());
    return dist[dist.size() / 2];
}

TrainOutcome train_model(const std::vector<SnapshotSeries>& train,
                         const std::vector<SnapshotSeries>& validation,
                         const TrainOptions& opts) {
    return run(train, validation, opts, true);
}

TrainOutcome tune_model(const std::vector<SnapshotSeries>& train,
                        const std::vector<SnapshotSeries>& validation, const TrainOptions& opts) {
    require(!validation.empty(), "tuning needs a validation split");
    return run(train, validation, opts, false);
}

}  // namespace ock
