#pragma once

#include "ock/types.hpp"

#include <functional>

namespace ock {

using ScalarKernel = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

// Deduplicated table of segment endpoints. Consecutive segments of one series
// share a snapshot, so n segments from a single series give n + 1 points, not
// 2n; start_index/end_index map each segment back into points.
struct SegmentPoints {
    Eigen::MatrixXd points;  // n_unique x d
    std::vector<int> start_index;
    std::vector<int> end_index;
};

SegmentPoints collect_segment_points(const std::vector<Segment>& segments);

// Trapezoid rule for the occupation-kernel pairing against a point evaluation:
// integral over [a, b] of k(z, x(t)) dt ~ (b - a) / 2 * (k(z, x_a) + k(z, x_b))
double single_quadrature(const Eigen::Ref<const Eigen::VectorXd>& z, const Segment& seg,
                         const KernelSpec& spec);
double single_quadrature(const Eigen::Ref<const Eigen::VectorXd>& z, const Segment& seg,
                         const ScalarKernel& kernel);

// Gram matrix of occupation kernels under the trapezoid rule on both
// integrals: M[i][j] = (h_i * h_j / 4) * sum of k over the 4 endpoint pairs.
// The production overload builds one Gram over the deduplicated endpoint set
// and gathers, which keeps the cost at one kernel call per point pair. Output
// is exactly symmetric (upper triangle is mirrored).
Eigen::MatrixXd double_quadrature_gram(const std::vector<Segment>& segments,
                                       const KernelSpec& spec);
Eigen::MatrixXd double_quadrature_gram(const std::vector<Segment>& segments,
                                       const ScalarKernel& kernel);

// Trapezoid rule on one rectangular cell from its corner values:
// hx * hy / 4 * (v00 + v10 + v01 + v11)
double cell_trapezoid_2d(double v00, double v10, double v01, double v11, double hx, double hy);

}  // namespace ock
