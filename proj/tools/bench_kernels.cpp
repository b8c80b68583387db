// Timing comparison of the parallel kernel paths against the serial reference
// implementations, plus a max-abs-difference check that they agree.

#include "ock/kernels.hpp"
#include "ock/quadrature.hpp"
#include "ock/reference.hpp"
#include "ock/rng.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::MatrixXd random_states(int n, int d, ock::Rng& rng) {
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
    return x;
}

std::vector<ock::Segment> random_segments(int n, int d, ock::Rng& rng) {
    std::vector<ock::Segment> segments(n);
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
        ock::Segment& s = segments[i];
        s.t_start = t;
        t += 0.01 + 0.01 * rng.uniform();
        s.t_end = t;
        s.x_start = Eigen::VectorXd::NullaryExpr(d, [&](Eigen::Index) { return rng.normal(); });
        s.x_end = Eigen::VectorXd::NullaryExpr(d, [&](Eigen::Index) { return rng.normal(); });
        s.series_id = 0;
        s.index_in_series = i;
    }
    return segments;
}

template <typename F>
double best_of(int repeats, F&& body) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = Clock::now();
        body();
        double s = seconds_since(t0);
        if (s < best) best = s;
    }
    return best;
}

void bench_gram(int n, int d, int repeats) {
    ock::Rng rng(ock::mix_seed(42, d));
    Eigen::MatrixXd x = random_states(n, d, rng);
    ock::KernelSpec spec = ock::KernelSpec::gaussian(2.0);

    Eigen::MatrixXd fast, slow;
    double t_fast = best_of(repeats, [&] { fast = ock::pairwise_gram(x, x, spec); });
    double t_slow = best_of(repeats, [&] { slow = ock::reference::pairwise_gram(x, x, spec); });
    double diff = (fast - slow).cwiseAbs().maxCoeff();
    std::printf("gram       n=%5d d=%4d   parallel %8.4fs   serial %8.4fs   max|diff| %.3g\n",
                n, d, t_fast, t_slow, diff);
}

void bench_quadrature(int n, int d, int repeats) {
    ock::Rng rng(ock::mix_seed(7, d));
    std::vector<ock::Segment> segments = random_segments(n, d, rng);
    ock::KernelSpec spec = ock::KernelSpec::gaussian(2.0);

    Eigen::MatrixXd fast, slow;
    double t_fast =
        best_of(repeats, [&] { fast = ock::double_quadrature_gram(segments, spec); });
    double t_slow =
        best_of(repeats, [&] { slow = ock::reference::double_quadrature_gram(segments, spec); });
    double diff = (fast - slow).cwiseAbs().maxCoeff();
    std::printf("quadrature n=%5d d=%4d   parallel %8.4fs   serial %8.4fs   max|diff| %.3g\n",
                n, d, t_fast, t_slow, diff);
}

void bench_rff(int n, int d, int q, int repeats) {
    ock::Rng rng(ock::mix_seed(99, d));
    Eigen::MatrixXd x = random_states(n, d, rng);
    ock::FeatureMap map = ock::rff_build(ock::KernelSpec::random_fourier(1.5, q, 123), d);

    Eigen::MatrixXd fast, slow;
    double t_fast = best_of(repeats, [&] { fast = ock::rff_eval(map, x); });
    double t_slow = best_of(repeats, [&] { slow = ock::reference::rff_eval(map, x); });
    double diff = (fast - slow).cwiseAbs().maxCoeff();
    std::printf("rff        n=%5d d=%4d q=%4d   parallel %8.4fs   serial %8.4fs   max|diff| %.3g\n",
                n, d, q, t_fast, t_slow, diff);
}

}  // namespace

int main(int argc, char** argv) {
    int n = 1000;
    int repeats = 3;
    if (argc > 1) n = std::stoi(argv[1]);
    if (argc > 2) repeats = std::stoi(argv[2]);

    std::printf("kernel benchmarks, n=%d, best of %d\n", n, repeats);
    for (int d : {2, 16, 128}) bench_gram(n, d, repeats);
    for (int d : {2, 16, 128}) bench_quadrature(n, d, repeats);
    for (int d : {2, 16}) bench_rff(n, d, 2000, repeats);
    return 0;
}
