#include "ock/kernels.hpp"

#include "ock/rng.hpp"

#include <cmath>

namespace ock {

double gaussian_eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y,
                     double lengthscale) {
    require(std::isfinite(lengthscale) && lengthscale > 0.0, "lengthscale must be positive");
    require(x.size() == y.size(), "gaussian_eval dimension mismatch");
    require(x.allFinite() && y.allFinite(), "gaussian_eval arguments must be finite");
    double d2 = (x - y).squaredNorm();
    return std::exp(-d2 / (2.0 * lengthscale * lengthscale));
}

Eigen::MatrixXd pairwise_gram(const Eigen::Ref<const Eigen::MatrixXd>& X,
                              const Eigen::Ref<const Eigen::MatrixXd>& Y,
                              const KernelSpec& spec) {
    spec.validate();
    require(X.cols() == Y.cols(), "pairwise_gram dimension mismatch");
    require(X.allFinite() && Y.allFinite(), "pairwise_gram inputs must be finite");
    const Eigen::Index n = X.rows(), m = Y.rows();

    if (spec.kind == KernelKind::RandomFourier) {
        FeatureMap map = rff_build(spec, static_cast<int>(X.cols()));
        Eigen::MatrixXd px = rff_eval(map, X), py = rff_eval(map, Y);
        Eigen::MatrixXd g(n, m);
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                g(i, j) = px.row(i).dot(py.row(j));
        return g;
    }

    // ||x - y||^2 = ||x||^2 - 2 <x, y> + ||y||^2, clamped at 0. Points are
    // transposed up front so every dot runs over a contiguous column; the
    // reduction order is then identical for (i, j) and (j, i).
    Eigen::MatrixXd xt = X.transpose(), yt = Y.transpose();
    Eigen::VectorXd sx = xt.colwise().squaredNorm(), sy = yt.colwise().squaredNorm();
    const double inv = 1.0 / (2.0 * spec.lengthscale * spec.lengthscale);
    Eigen::MatrixXd g(n, m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            double d2 = (sx(i) + sy(j)) - 2.0 * xt.col(i).dot(yt.col(j));
            if (d2 < 0.0) d2 = 0.0;
            g(i, j) = std::exp(-d2 * inv);
        }
    }
    return g;
}

void FeatureMap::validate() const {
    require(frequencies.rows() > 0 && frequencies.cols() > 0, "feature map is empty");
    require(frequencies.rows() == phases.size(), "feature map frequency/phase count mismatch");
    require(std::isfinite(scale) && scale > 0.0, "feature map scale must be positive");
    require(frequencies.allFinite() && phases.allFinite(), "feature map must be finite");
}

FeatureMap rff_build(const KernelSpec& spec, int dim) {
    spec.validate();
    require(spec.kind == KernelKind::RandomFourier, "rff_build needs a random Fourier spec");
    require(dim >= 1, "rff_build needs dim >= 1");

    Rng rng(spec.seed);
    FeatureMap map;
    map.frequencies.resize(spec.feature_count, dim);
    map.phases.resize(spec.feature_count);
    const double freq_sd = 1.0 / spec.lengthscale;
    for (int i = 0; i < spec.feature_count; ++i)
        for (int j = 0; j < dim; ++j) map.frequencies(i, j) = freq_sd * rng.normal();
    for (int i = 0; i < spec.feature_count; ++i) map.phases(i) = rng.uniform(0.0, 2.0 * M_PI);
    map.scale = std::sqrt(2.0 / spec.feature_count);
    return map;
}

Eigen::MatrixXd rff_eval(const FeatureMap& map, const Eigen::Ref<const Eigen::MatrixXd>& X) {
    map.validate();
    require(X.cols() == map.dim(), "rff_eval dimension mismatch");
    require(X.allFinite(), "rff_eval input must be finite");
    const Eigen::Index n = X.rows(), q = map.count();
    Eigen::MatrixXd phi = X * map.frequencies.transpose();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            phi(i, j) = map.scale * std::cos(phi(i, j) + map.phases(j));
    return phi;
}

}  // namespace ock
