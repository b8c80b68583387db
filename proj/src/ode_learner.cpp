#include "ock/ode_learner.hpp"

#include "ock/quadrature.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

namespace ock {

TrainingSet reshape_snapshots(const std::vector<SnapshotSeries>& series) {
    require(!series.empty(), "reshape_snapshots needs at least one series");
    TrainingSet out;
    int n = 0, d = -1;
    for (const SnapshotSeries& s : series) {
        s.validate();
        if (d < 0) d = s.dimension();
        require(s.dimension() == d, "series dimensions differ");
        if (s.size() < 2) {
            ++out.skipped_series;
            continue;
        }
        n += s.size() - 1;
    }
    require(n > 0, "no series has two or more snapshots");

    out.dimension = d;
    out.segments.reserve(n);
    out.y.resize(n, d);
    int row = 0;
    for (const SnapshotSeries& s : series) {
        for (int i = 0; i + 1 < s.size(); ++i) {
            Segment seg;
            seg.t_start = s.times[i];
            seg.t_end = s.times[i + 1];
            seg.x_start = s.states.row(i);
            seg.x_end = s.states.row(i + 1);
            seg.series_id = s.series_id;
            seg.index_in_series = i;
            out.y.row(row) = seg.x_end - seg.x_start;
            out.segments.push_back(std::move(seg));
            ++row;
        }
    }
    return out;
}

void OckModel::validate() const {
    kernel.validate();
    require(std::isfinite(lambda) && lambda > 0.0, "model lambda must be positive");
    require(dimension > 0, "model dimension must be positive");
    if (path == ModelPath::Implicit) {
        require(!segments.empty(), "implicit model has no segments");
        require(alpha.rows() == static_cast<Eigen::Index>(segments.size()) &&
                    alpha.cols() == dimension,
                "implicit model coefficient shape mismatch");
        require(alpha.allFinite(), "model coefficients must be finite");
    } else {
        feature_map.validate();
        require(feature_map.dim() == dimension, "feature map dimension mismatch");
        require(weights.rows() == feature_map.count() && weights.cols() == dimension,
                "explicit model weight shape mismatch");
        require(weights.allFinite(), "model weights must be finite");
    }
}

Eigen::MatrixXd solve_regularized_spd(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                      const Eigen::Ref<const Eigen::MatrixXd>& B, double ridge,
                                      SolveReport* report) {
    require(A.rows() == A.cols(), "solve_regularized_spd needs a square matrix");
    require(A.rows() == B.rows(), "solve_regularized_spd shape mismatch");
    require(std::isfinite(ridge) && ridge >= 0.0, "ridge must be non-negative");
    const Eigen::Index n = A.rows();

    Eigen::MatrixXd system = A;
    system.diagonal().array() += ridge;

    SolveReport rep;
    Eigen::MatrixXd x;
    Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() == Eigen::Success) {
        x = llt.solve(B);
    } else {
        rep.jittered = true;
        rep.jitter = 1e-10 * system.trace() / static_cast<double>(n);
        Eigen::MatrixXd bumped = system;
        bumped.diagonal().array() += rep.jitter;
        Eigen::LLT<Eigen::MatrixXd> llt2(bumped);
        if (llt2.info() == Eigen::Success) {
            x = llt2.solve(B);
        } else {
            rep.used_ldlt = true;
            x = bumped.ldlt().solve(B);
        }
    }

    double bnorm = B.norm();
    double resid = (system * x - B).norm();
    rep.relative_residual = bnorm > 0.0 ? resid / bnorm : resid;
    if (report) *report = rep;

    if (!x.allFinite() || !std::isfinite(rep.relative_residual) || rep.relative_residual > 1e-8) {
        std::ostringstream msg;
        msg << "regularized solve failed: relative residual " << rep.relative_residual
            << ", n " << n << ", ridge " << ridge << ", trace " << A.trace()
            << ", diag range [" << A.diagonal().minCoeff() << ", " << A.diagonal().maxCoeff()
            << "]" << (rep.jittered ? ", jittered" : "") << (rep.used_ldlt ? ", ldlt" : "");
        throw NumericalError(msg.str());
    }
    return x;
}

namespace {

void check_fit_inputs(const TrainingSet& train, const KernelSpec& spec, double lambda) {
    spec.validate();
    require(train.size() >= 1, "fit needs at least one segment");
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
    require(train.y.rows() == train.size() && train.y.cols() == train.dimension,
            "training set target shape mismatch");
}

}  // namespace

OckModel fit_implicit(const TrainingSet& train, const KernelSpec& spec, double lambda) {
    check_fit_inputs(train, spec, lambda);
    Eigen::MatrixXd m = double_quadrature_gram(train.segments, spec);
    double ridge = lambda * static_cast<double>(train.size());

    OckModel model;
    model.path = ModelPath::Implicit;
    model.kernel = spec;
    model.lambda = lambda;
    model.dimension = train.dimension;
    model.segments = train.segments;
    model.alpha = solve_regularized_spd(m, train.y, ridge);
    return model;
}

OckModel fit_explicit(const TrainingSet& train, const KernelSpec& spec, double lambda) {
    check_fit_inputs(train, spec, lambda);
    require(spec.kind == KernelKind::RandomFourier, "fit_explicit needs a random Fourier spec");

    FeatureMap map = rff_build(spec, train.dimension);
    SegmentPoints sp = collect_segment_points(train.segments);
    Eigen::MatrixXd point_phi = rff_eval(map, sp.points);

    const int n = train.size();
    Eigen::MatrixXd phi(n, map.count());
    for (int i = 0; i < n; ++i) {
        phi.row(i) = train.segments[i].duration() / 2.0 *
                     (point_phi.row(sp.start_index[i]) + point_phi.row(sp.end_index[i]));
    }

    Eigen::MatrixXd gram = phi.transpose() * phi;
    Eigen::MatrixXd rhs = phi.transpose() * train.y;
    double ridge = lambda * static_cast<double>(n);

    OckModel model;
    model.path = ModelPath::Explicit;
    model.kernel = spec;
    model.lambda = lambda;
    model.dimension = train.dimension;
    model.feature_map = std::move(map);
    model.weights = solve_regularized_spd(gram, rhs, ridge);
    return model;
}

double training_objective(const Eigen::Ref<const Eigen::MatrixXd>& alpha,
                          const TrainingSet& train, const Eigen::Ref<const Eigen::MatrixXd>& M,
                          double lambda) {
    const int n = train.size();
    require(n >= 1, "training_objective needs segments");
    require(M.rows() == n && M.cols() == n, "Gram shape mismatch");
    require(alpha.rows() == n && alpha.cols() == train.dimension, "coefficient shape mismatch");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be non-negative");

    Eigen::MatrixXd malpha = M * alpha;
    double data = (malpha - train.y).squaredNorm() / static_cast<double>(n);
    double reg = (alpha.array() * malpha.array()).sum();  // trace(alpha^T M alpha)
    return data + lambda * reg;
}

double weak_loss(const VectorField& field, const std::vector<SnapshotSeries>& series) {
    TrainingSet train = reshape_snapshots(series);
    SegmentPoints sp = collect_segment_points(train.segments);
    Eigen::MatrixXd values = field(sp.points);
    require(values.rows() == sp.points.rows() && values.cols() == train.dimension,
            "field output shape mismatch");

    const int n = train.size();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd defect =
            train.segments[i].duration() / 2.0 *
                (values.row(sp.start_index[i]) + values.row(sp.end_index[i])).transpose() -
            train.y.row(i).transpose();
        acc += defect.squaredNorm();
    }
    return acc / static_cast<double>(n);
}

}  // namespace ock
