#pragma once

#include "ock/kernels.hpp"
#include "ock/types.hpp"

// Serial, loop-by-definition implementations of the hot kernels. These stay
// deliberately naive: tests compare the production paths against them, and the
// benchmark tool reports the spread. Do not optimize.
namespace ock::reference {

Eigen::MatrixXd pairwise_gram(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::MatrixXd>& Y,
                              const KernelSpec& spec);

// M[i][j] = (h_i * h_j / 4) * sum of k over the four endpoint pairs
Eigen::MatrixXd double_quadrature_gram(const std::vector<Segment>& segments,
                                       const KernelSpec& spec);

Eigen::MatrixXd rff_eval(const FeatureMap& map, const Eigen::Ref<const Eigen::MatrixXd>& X);

}  // namespace ock::reference
