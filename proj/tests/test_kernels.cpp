#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ock/kernels.hpp"
#include "ock/reference.hpp"
#include "ock/rng.hpp"

#include <cmath>

namespace {

template <typename A, typename B>
bool bitwise_equal(const A& a, const B& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.array() == Eigen::MatrixXd(b).array()).all();
}

Eigen::MatrixXd random_states(int n, int d, std::uint64_t seed) {
    ock::Rng rng(seed);
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
    return x;
}

}  // namespace

TEST_CASE("gaussian kernel hand values") {
    Eigen::VectorXd x(2), y(2);
    x << 0.0, 0.0;
    y << 1.0, 0.0;
    // ||x - y||^2 = 1, lengthscale 1: exp(-1/2)
    CHECK(ock::gaussian_eval(x, y, 1.0) == doctest::Approx(0.6065306597126334).epsilon(1e-15));
    CHECK(ock::gaussian_eval(x, x, 1.0) == 1.0);
    // lengthscale 2: exp(-1/8)
    CHECK(ock::gaussian_eval(x, y, 2.0) == doctest::Approx(std::exp(-0.125)).epsilon(1e-15));
    CHECK_THROWS_AS(ock::gaussian_eval(x, y, 0.0), std::invalid_argument);
    Eigen::VectorXd z(3);
    z.setZero();
    CHECK_THROWS_AS(ock::gaussian_eval(x, z, 1.0), std::invalid_argument);
}

TEST_CASE("gram matches the direct loop") {
    ock::KernelSpec spec = ock::KernelSpec::gaussian(1.7);
    Eigen::MatrixXd x = random_states(40, 3, 11);
    Eigen::MatrixXd y = random_states(25, 3, 12);
    Eigen::MatrixXd fast = ock::pairwise_gram(x, y, spec);
    Eigen::MatrixXd slow = ock::reference::pairwise_gram(x, y, spec);
    REQUIRE(fast.rows() == 40);
    REQUIRE(fast.cols() == 25);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gram transpose and symmetry are bitwise") {
    ock::KernelSpec spec = ock::KernelSpec::gaussian(0.9);
    Eigen::MatrixXd x = random_states(31, 4, 21);
    Eigen::MatrixXd y = random_states(17, 4, 22);

    Eigen::MatrixXd xy = ock::pairwise_gram(x, y, spec);
    Eigen::MatrixXd yx = ock::pairwise_gram(y, x, spec);
    CHECK(bitwise_equal(xy, yx.transpose()));  // exact, not approximate

    Eigen::MatrixXd g = ock::pairwise_gram(x, x, spec);
    CHECK(bitwise_equal(g, g.transpose()));
    CHECK(g.diagonal().isApproxToConstant(1.0, 1e-15));

    // repeat call is bitwise identical despite threading
    CHECK(bitwise_equal(xy, ock::pairwise_gram(x, y, spec)));
}

TEST_CASE("gram values stay in (0, 1] and clamp tiny negative distances") {
    ock::KernelSpec spec = ock::KernelSpec::gaussian(1.0);
    // near-duplicate rows provoke cancellation in the distance identity
    Eigen::MatrixXd x = random_states(12, 3, 31);
    Eigen::MatrixXd y = x;
    for (int i = 0; i < y.rows(); ++i) y(i, 0) += 1e-16 * (i % 2 == 0 ? 1.0 : -1.0);
    Eigen::MatrixXd g = ock::pairwise_gram(x, y, spec);
    CHECK(g.maxCoeff() <= 1.0);
    CHECK(g.minCoeff() > 0.0);
}

TEST_CASE("feature map construction is deterministic and validated") {
    ock::KernelSpec spec = ock::KernelSpec::random_fourier(1.3, 64, 77);
    ock::FeatureMap a = ock::rff_build(spec, 5);
    ock::FeatureMap b = ock::rff_build(spec, 5);
    CHECK(bitwise_equal(a.frequencies, b.frequencies));
    CHECK(bitwise_equal(a.phases, b.phases));
    CHECK(a.scale == b.scale);
    CHECK(a.dim() == 5);
    CHECK(a.count() == 64);
    CHECK(a.scale == doctest::Approx(std::sqrt(2.0 / 64.0)).epsilon(1e-15));
    CHECK(a.phases.minCoeff() >= 0.0);
    CHECK(a.phases.maxCoeff() < 2.0 * M_PI);

    ock::KernelSpec other = ock::KernelSpec::random_fourier(1.3, 64, 78);
    CHECK_FALSE(bitwise_equal(ock::rff_build(other, 5).frequencies, a.frequencies));

    // frequency std should be near 1/lengthscale
    double sd = std::sqrt(a.frequencies.array().square().mean());
    CHECK(sd == doctest::Approx(1.0 / 1.3).epsilon(0.15));
}

TEST_CASE("feature evaluation matches the scalar loop") {
    ock::FeatureMap map = ock::rff_build(ock::KernelSpec::random_fourier(0.8, 33, 5), 4);
    Eigen::MatrixXd x = random_states(19, 4, 41);
    Eigen::MatrixXd fast = ock::rff_eval(map, x);
    Eigen::MatrixXd slow = ock::reference::rff_eval(map, x);
    REQUIRE(fast.rows() == 19);
    REQUIRE(fast.cols() == 33);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(bitwise_equal(fast, ock::rff_eval(map, x)));

    Eigen::MatrixXd empty(0, 4);
    CHECK(ock::rff_eval(map, empty).rows() == 0);
}

TEST_CASE("large feature maps approximate the gaussian kernel") {
    int q = 20000;
    ock::FeatureMap map = ock::rff_build(ock::KernelSpec::random_fourier(1.0, q, 3), 2);
    Eigen::MatrixXd x = random_states(8, 2, 51);
    Eigen::MatrixXd phi = ock::rff_eval(map, x);
    Eigen::MatrixXd approx = phi * phi.transpose();
    Eigen::MatrixXd exact = ock::pairwise_gram(x, x, ock::KernelSpec::gaussian(1.0));
    CHECK((approx - exact).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("kernel spec validation") {
    CHECK_THROWS_AS(ock::KernelSpec::gaussian(-1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ock::KernelSpec::random_fourier(1.0, 0, 1).validate(), std::invalid_argument);
    CHECK_NOTHROW(ock::KernelSpec::gaussian(2.0).validate());
    Eigen::MatrixXd x = random_states(3, 2, 1);
    CHECK_THROWS_AS(ock::pairwise_gram(x, x, ock::KernelSpec::gaussian(0.0)),
                    std::invalid_argument);
}
