#include "ock/reference.hpp"

#include <cmath>

namespace ock::reference {

namespace {

double kernel_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const KernelSpec& spec,
                    const FeatureMap* map) {
    if (spec.kind == KernelKind::Gaussian) return gaussian_eval(x, y, spec.lengthscale);
    double acc = 0.0;
    for (int f = 0; f < map->count(); ++f) {
        double ax = map->phases(f), ay = map->phases(f);
        for (int j = 0; j < map->dim(); ++j) {
            ax += map->frequencies(f, j) * x(j);
            ay += map->frequencies(f, j) * y(j);
        }
        acc += map->scale * std::cos(ax) * map->scale * std::cos(ay);
    }
    return acc;
}

}  // namespace

Eigen::MatrixXd pairwise_gram(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::MatrixXd>& Y,
                              const KernelSpec& spec) {
    spec.validate();
    require(X.cols() == Y.cols(), "pairwise_gram dimension mismatch");
    FeatureMap map;
    if (spec.kind == KernelKind::RandomFourier) map = rff_build(spec, static_cast<int>(X.cols()));
    Eigen::MatrixXd g(X.rows(), Y.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < Y.rows(); ++j)
            g(i, j) = kernel_value(X.row(i), Y.row(j), spec,
                                   spec.kind == KernelKind::RandomFourier ? &map : nullptr);
    return g;
}

Eigen::MatrixXd double_quadrature_gram(const std::vector<Segment>& segments,
                                       const KernelSpec& spec) {
    spec.validate();
    require(!segments.empty(), "double_quadrature_gram needs at least one segment");
    for (const Segment& s : segments) s.validate();
    FeatureMap map;
    if (spec.kind == KernelKind::RandomFourier)
        map = rff_build(spec, static_cast<int>(segments.front().x_start.size()));
    const FeatureMap* mp = spec.kind == KernelKind::RandomFourier ? &map : nullptr;

    const std::size_t n = segments.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Segment &a = segments[i], &b = segments[j];
            double sum = kernel_value(a.x_start, b.x_start, spec, mp) +
                         kernel_value(a.x_start, b.x_end, spec, mp) +
                         kernel_value(a.x_end, b.x_start, spec, mp) +
                         kernel_value(a.x_end, b.x_end, spec, mp);
            m(i, j) = a.duration() * b.duration() / 4.0 * sum;
        }
    }
    return m;
}

Eigen::MatrixXd rff_eval(const FeatureMap& map, const Eigen::Ref<const Eigen::MatrixXd>& X) {
    map.validate();
    require(X.cols() == map.dim(), "rff_eval dimension mismatch");
    Eigen::MatrixXd phi(X.rows(), map.count());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (int f = 0; f < map.count(); ++f) {
            double a = map.phases(f);
            for (int j = 0; j < map.dim(); ++j) a += map.frequencies(f, j) * X(i, j);
            phi(i, f) = map.scale * std::cos(a);
        }
    }
    return phi;
}

}  // namespace ock::reference
