#include "ock/quadrature.hpp"

#include "ock/kernels.hpp"

#include <cmath>

namespace ock {

namespace {

bool bitwise_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

// Symmetric Gram over a point set; mirrored so G(i, j) and G(j, i) are the
// same double. Gaussian entries go through the squared-distance identity
// ||x||^2 + ||y||^2 - 2 <x, y>, computed once as a rank update.
Eigen::MatrixXd gram_points_symmetric(const Eigen::MatrixXd& pts, const KernelSpec& spec) {
    const Eigen::Index n = pts.rows();
    Eigen::MatrixXd g(n, n);
    if (spec.kind == KernelKind::RandomFourier) {
        FeatureMap map = rff_build(spec, static_cast<int>(pts.cols()));
        Eigen::MatrixXd phi = rff_eval(map, pts).transpose();  // q x n, contiguous columns
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) g(i, j) = phi.col(i).dot(phi.col(j));
    } else {
        Eigen::MatrixXd cross = pts * pts.transpose();
        Eigen::VectorXd sq = cross.diagonal();
        const double inv = 1.0 / (2.0 * spec.lengthscale * spec.lengthscale);
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                double d2 = (sq(i) + sq(j)) - 2.0 * cross(i, j);
                if (d2 < 0.0) d2 = 0.0;
                g(i, j) = std::exp(-d2 * inv);
            }
        }
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
}

}  // namespace

SegmentPoints collect_segment_points(const std::vector<Segment>& segments) {
    require(!segments.empty(), "collect_segment_points needs at least one segment");
    const Eigen::Index d = segments.front().x_start.size();
    SegmentPoints sp;
    sp.points.resize(2 * segments.size(), d);
    sp.start_index.reserve(segments.size());
    sp.end_index.reserve(segments.size());
    Eigen::Index count = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Segment& s = segments[i];
        s.validate();
        require(s.x_start.size() == d, "collect_segment_points dimension mismatch");
        bool chained = i > 0 && s.series_id == segments[i - 1].series_id &&
                       bitwise_equal(s.x_start, segments[i - 1].x_end);
        if (chained) {
            sp.start_index.push_back(sp.end_index.back());
        } else {
            sp.points.row(count) = s.x_start;
            sp.start_index.push_back(static_cast<int>(count++));
        }
        sp.points.row(count) = s.x_end;
        sp.end_index.push_back(static_cast<int>(count++));
    }
    sp.points.conservativeResize(count, d);
    return sp;
}

double single_quadrature(const Eigen::Ref<const Eigen::VectorXd>& z, const Segment& seg,
                         const KernelSpec& spec) {
    spec.validate();
    if (spec.kind == KernelKind::RandomFourier) {
        FeatureMap map = rff_build(spec, static_cast<int>(z.size()));
        return single_quadrature(z, seg, [&map](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            return (rff_eval(map, a.transpose()) * rff_eval(map, b.transpose()).transpose())(0, 0);
        });
    }
    double ls = spec.lengthscale;
    return single_quadrature(z, seg, [ls](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return gaussian_eval(a, b, ls);
    });
}

double single_quadrature(const Eigen::Ref<const Eigen::VectorXd>& z, const Segment& seg,
                         const ScalarKernel& kernel) {
    seg.validate();
    require(z.size() == seg.x_start.size(), "single_quadrature dimension mismatch");
    return seg.duration() / 2.0 * (kernel(z, seg.x_start) + kernel(z, seg.x_end));
}

Eigen::MatrixXd double_quadrature_gram(const std::vector<Segment>& segments,
                                       const KernelSpec& spec) {
    spec.validate();
    SegmentPoints sp = collect_segment_points(segments);
    Eigen::MatrixXd g = gram_points_symmetric(sp.points, spec);

    const Eigen::Index n = static_cast<Eigen::Index>(segments.size());
    Eigen::MatrixXd m(n, n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        const int si = sp.start_index[i], ei = sp.end_index[i];
        const double hi = segments[i].duration();
        for (Eigen::Index j = i; j < n; ++j) {
            const int sj = sp.start_index[j], ej = sp.end_index[j];
            double sum = g(si, sj) + g(si, ej) + g(ei, sj) + g(ei, ej);
            m(i, j) = hi * segments[j].duration() / 4.0 * sum;
        }
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) m(i, j) = m(j, i);
    return m;
}

Eigen::MatrixXd double_quadrature_gram(const std::vector<Segment>& segments,
                                       const ScalarKernel& kernel) {
    require(!segments.empty(), "double_quadrature_gram needs at least one segment");
    const Eigen::Index n = static_cast<Eigen::Index>(segments.size());
    for (const Segment& s : segments) s.validate();
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Segment &a = segments[i], &b = segments[j];
            double sum = kernel(a.x_start, b.x_start) + kernel(a.x_start, b.x_end) +
                         kernel(a.x_end, b.x_start) + kernel(a.x_end, b.x_end);
            m(i, j) = a.duration() * b.duration() / 4.0 * sum;
            m(j, i) = m(i, j);
        }
    }
    return m;
}

double cell_trapezoid_2d(double v00, double v10, double v01, double v11, double hx, double hy) {
    require(std::isfinite(hx) && hx > 0.0 && std::isfinite(hy) && hy > 0.0,
            "cell_trapezoid_2d needs positive spacings");
    require(std::isfinite(v00) && std::isfinite(v10) && std::isfinite(v01) && std::isfinite(v11),
            "cell_trapezoid_2d corner values must be finite");
    return hx * hy / 4.0 * (v00 + v10 + v01 + v11);
}

}  // namespace ock
