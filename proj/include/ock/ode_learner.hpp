#pragma once

#include "ock/kernels.hpp"
#include "ock/types.hpp"

#include <functional>

namespace ock {

// Batched vector field: takes p x d states, returns p x d values.
using VectorField = std::function<Eigen::MatrixXd(const Eigen::Ref<const Eigen::MatrixXd>&)>;

// Segments plus their increment targets y[i] = x_end - x_start, one row each.
struct TrainingSet {
    std::vector<Segment> segments;
    Eigen::MatrixXd y;  // n x d
    int dimension = 0;
    int skipped_series = 0;  // series with fewer than 2 snapshots

    int size() const { return static_cast<int>(segments.size()); }
};

// Splits every series into consecutive-snapshot segments. Series with fewer
// than two points are counted in skipped_series, not an error.
TrainingSet reshape_snapshots(const std::vector<SnapshotSeries>& series);

enum class ModelPath { Implicit, Explicit };

// Fitted vector field. The implicit path keeps the training segments and the
// coefficient matrix alpha (n x d); the explicit path keeps a feature map and
// weights (q x d). Evaluation lives in ode_inference.
struct OckModel {
    ModelPath path = ModelPath::Implicit;
    KernelSpec kernel;
    double lambda = 0.0;
    int dimension = 0;
    std::vector<Segment> segments;
    Eigen::MatrixXd alpha;
    FeatureMap feature_map;
    Eigen::MatrixXd weights;

    void validate() const;
};

// Diagnostics from solve_regularized_spd.
struct SolveReport {
    double relative_residual = 0.0;
    bool jittered = false;
    double jitter = 0.0;
    bool used_ldlt = false;
};

// Solves (A + ridge * I) X = B for symmetric positive semidefinite A.
// Cholesky first; on failure one jitter of 1e-10 * trace(A) / n is added and
// retried; after that LDLT. A relative residual above 1e-8 or a non-finite
// solution raises NumericalError with diagnostics.
Eigen::MatrixXd solve_regularized_spd(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                      const Eigen::Ref<const Eigen::MatrixXd>& B, double ridge,
                                      SolveReport* report = nullptr);

// Kernel path: (M + lambda * n * I) alpha = y with M the double-quadrature
// Gram over the training segments.
OckModel fit_implicit(const TrainingSet& train, const KernelSpec& spec, double lambda);

// Feature path: rows of Phi are (h_i / 2) * (phi(x_start) + phi(x_end));
// solves (Phi^T Phi + lambda * n * I) W = Phi^T y. spec must be RandomFourier.
OckModel fit_explicit(const TrainingSet& train, const KernelSpec& spec, double lambda);

// (1/n) * ||M alpha - y||_F^2 + lambda * trace(alpha^T M alpha), evaluable at
// lambda = 0.
double training_objective(const Eigen::Ref<const Eigen::MatrixXd>& alpha,
                          const TrainingSet& train, const Eigen::Ref<const Eigen::MatrixXd>& M,
                          double lambda);

// Weak-form loss of an arbitrary field against observed series:
// (1/n) * sum over segments of || (h/2) (f(x_start) + f(x_end)) - (x_end - x_start) ||^2.
// At the fitted coefficients this equals the data term of the objective.
double weak_loss(const VectorField& field, const std::vector<SnapshotSeries>& series);

}  // namespace ock
