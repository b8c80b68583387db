#include "ock/ode_inference.hpp"

#include "ock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ock {

FieldEvaluator::FieldEvaluator(const OckModel& model) : path_(model.path), kernel_(model.kernel) {
    model.validate();
    if (path_ == ModelPath::Implicit) {
        SegmentPoints sp = collect_segment_points(model.segments);
        points_ = sp.points;
        // f(z) = sum_i alpha_i * (h_i / 2) * (k(z, s_i) + k(z, e_i)) collapses
        // to G(z, points) * combine with per-point accumulated weights.
        combine_ = Eigen::MatrixXd::Zero(points_.rows(), model.dimension);
        for (std::size_t i = 0; i < model.segments.size(); ++i) {
            Eigen::RowVectorXd w = model.segments[i].duration() / 2.0 * model.alpha.row(i);
            combine_.row(sp.start_index[i]) += w;
            combine_.row(sp.end_index[i]) += w;
        }
    } else {
        feature_map_ = model.feature_map;
        weights_ = model.weights;
    }
}

Eigen::MatrixXd FieldEvaluator::operator()(const Eigen::Ref<const Eigen::MatrixXd>& states) const {
    if (path_ == ModelPath::Implicit) {
        require(states.cols() == points_.cols(), "field evaluation dimension mismatch");
        return pairwise_gram(states, points_, kernel_) * combine_;
    }
    return rff_eval(feature_map_, states) * weights_;
}

VectorField FieldEvaluator::as_field() const {
    return [ev = *this](const Eigen::Ref<const Eigen::MatrixXd>& states) { return ev(states); };
}

Eigen::MatrixXd eval_field(const OckModel& model, const Eigen::Ref<const Eigen::MatrixXd>& states) {
    return FieldEvaluator(model)(states);
}

PredictedTrajectory integrate(const VectorField& field, const Eigen::Ref<const Eigen::VectorXd>& x0,
                              const std::vector<double>& times, int substeps) {
    require(!times.empty(), "integrate needs at least one time");
    require(substeps >= 1, "integrate needs substeps >= 1");
    require(x0.allFinite(), "integrate needs a finite initial state");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        require(times[i + 1] > times[i], "integration times must be strictly increasing");

    const Eigen::Index d = x0.size();
    const int nt = static_cast<int>(times.size());
    PredictedTrajectory out;
    out.states.resize(nt, d);
    out.states.row(0) = x0;
    out.times.push_back(times[0]);

    auto rhs = [&field](const Eigen::RowVectorXd& x) -> Eigen::RowVectorXd {
        return field(x).row(0);
    };

    Eigen::RowVectorXd x = x0.transpose();
    for (int i = 1; i < nt; ++i) {
        double h = (times[i] - times[i - 1]) / substeps;
        bool bad = false;
        for (int s = 0; s < substeps && !bad; ++s) {
            Eigen::RowVectorXd k1 = rhs(x);
            Eigen::RowVectorXd k2 = rhs(x + h / 2.0 * k1);
            Eigen::RowVectorXd k3 = rhs(x + h / 2.0 * k2);
            Eigen::RowVectorXd k4 = rhs(x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            bad = !x.allFinite();
        }
        if (bad) {
            out.diverged = true;
            out.first_bad_index = i;
            break;
        }
        out.states.row(i) = x;
        out.times.push_back(times[i]);
    }
    out.states.conservativeResize(static_cast<Eigen::Index>(out.times.size()), d);
    return out;
}

double err_metric(const SnapshotSeries& truth, const PredictedTrajectory& pred) {
    truth.validate();
    require(truth.size() == static_cast<int>(pred.times.size()), "time grid length mismatch");
    require(truth.dimension() == pred.states.cols(), "state dimension mismatch");
    for (int i = 0; i < truth.size(); ++i)
        require(truth.times[i] == pred.times[i], "time grids differ");

    double acc = 0.0;
    for (int i = 1; i < truth.size(); ++i) {
        double dt = truth.times[i] - truth.times[i - 1];
        acc += dt * (truth.states.row(i) - pred.states.row(i)).squaredNorm();
    }
    return std::sqrt(acc);
}

double one_step_err(const SnapshotSeries& truth, const OckModel& model, int substeps) {
    truth.validate();
    require(truth.size() >= 2, "one_step_err needs at least two snapshots");
    VectorField field = FieldEvaluator(model).as_field();

    double acc = 0.0;
    for (int i = 1; i < truth.size(); ++i) {
        PredictedTrajectory step = integrate(field, truth.states.row(i - 1).transpose(),
                                             {truth.times[i - 1], truth.times[i]}, substeps);
        if (step.diverged) return std::numeric_limits<double>::infinity();
        double dt = truth.times[i] - truth.times[i - 1];
        acc += std::sqrt(dt * (truth.states.row(i) - step.states.row(1)).squaredNorm());
    }
    return acc / static_cast<double>(truth.size() - 1);
}

double null_model_err(const SnapshotSeries& truth) {
    truth.validate();
    double acc = 0.0;
    for (int i = 1; i < truth.size(); ++i) {
        double dt = truth.times[i] - truth.times[i - 1];
        acc += dt * (truth.states.row(i) - truth.states.row(0)).squaredNorm();
    }
    return std::sqrt(acc);
}

EvalSummary summarize_errs(const std::vector<double>& errs, int diverged_count) {
    require(!errs.empty() || diverged_count > 0, "summarize_errs needs at least one entry");
    EvalSummary s;
    s.errs = errs;
    s.diverged_count = diverged_count;
    for (int i = 0; i < diverged_count; ++i)
        s.errs.push_back(std::numeric_limits<double>::infinity());

    double acc = 0.0;
    for (double e : s.errs) acc += e;
    s.mean = acc / static_cast<double>(s.errs.size());

    std::vector<double> sorted = s.errs;
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return s;
}

}  // namespace ock
