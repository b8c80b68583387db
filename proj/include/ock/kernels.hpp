#pragma once

#include "ock/types.hpp"

namespace ock {

// Gaussian kernel: exp(-||x - y||^2 / (2 * lengthscale^2))
double gaussian_eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y,
                     double lengthscale);

// G[i][j] = k(X.row(i), Y.row(j)). Rows are parallelized; each entry is a
// contiguous dot product, so pairwise_gram(X, Y) is the exact transpose of
// pairwise_gram(Y, X) and a call with X == Y is exactly symmetric.
Eigen::MatrixXd pairwise_gram(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::MatrixXd>& Y,
                              const KernelSpec& spec);

// Frozen random Fourier feature map: phi(x) = scale * cos(frequencies * x + phases).
struct FeatureMap {
    Eigen::MatrixXd frequencies;  // feature_count x dim
    Eigen::VectorXd phases;       // feature_count
    double scale = 1.0;           // sqrt(2 / feature_count)

    int dim() const { return static_cast<int>(frequencies.cols()); }
    int count() const { return static_cast<int>(frequencies.rows()); }
    void validate() const;
};

// Draws frequencies ~ N(0, 1/lengthscale^2) per coordinate and phases
// ~ U[0, 2*pi), deterministically from spec.seed.
FeatureMap rff_build(const KernelSpec& spec, int dim);

// Phi[i] = phi(X.row(i)); output is n x feature_count.
Eigen::MatrixXd rff_eval(const FeatureMap& map, const Eigen::Ref<const Eigen::MatrixXd>& X);

}  // namespace ock
