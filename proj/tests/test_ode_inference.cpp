#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ock/datasets.hpp"
#include "ock/ode_inference.hpp"
#include "ock/ode_learner.hpp"

#include <cmath>
#include <limits>

namespace {

// x' = x, batched
Eigen::MatrixXd exponential_field(const Eigen::Ref<const Eigen::MatrixXd>& states) {
    return states;
}

ock::SnapshotSeries series_from(int id, const std::vector<double>& times,
                                const Eigen::MatrixXd& states) {
    ock::SnapshotSeries s;
    s.series_id = id;
    s.times = times;
    s.states = states;
    return s;
}

// explicit model whose field is identically zero: any feature map, zero weights
ock::OckModel zero_field_model(int dim) {
    ock::OckModel model;
    model.path = ock::ModelPath::Explicit;
    model.kernel = ock::KernelSpec::random_fourier(1.0, 8, 3);
    model.lambda = 1e-4;
    model.dimension = dim;
    model.feature_map = ock::rff_build(model.kernel, dim);
    model.weights = Eigen::MatrixXd::Zero(8, dim);
    return model;
}

}  // namespace

TEST_CASE("rk4 reproduces the exponential") {
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    ock::PredictedTrajectory pred =
        ock::integrate(exponential_field, x0, {0.0, 0.5, 1.0}, 200);
    REQUIRE(pred.times.size() == 3);
    CHECK_FALSE(pred.diverged);
    CHECK(pred.states(0, 0) == 1.0);  // first state is exactly x0
    CHECK(pred.states(2, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
}

TEST_CASE("rk4 halving the step cuts the error by about 16") {
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    double exact = std::exp(1.0);
    auto error_with = [&](int substeps) {
        ock::PredictedTrajectory p = ock::integrate(exponential_field, x0, {0.0, 1.0}, substeps);
        return std::abs(p.states(1, 0) - exact);
    };
    double coarse = error_with(4);
    double fine = error_with(8);
    CHECK(coarse / fine >= 8.0);  // fourth order; 16 in the limit
    CHECK(coarse / fine <= 32.0);
}

TEST_CASE("integration truncates on blow-up") {
    auto exploding = [](const Eigen::Ref<const Eigen::MatrixXd>& states) -> Eigen::MatrixXd {
        return 1e8 * states.array().cube().matrix();
    };
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.1 * i);
    ock::PredictedTrajectory pred = ock::integrate(exploding, x0, grid, 10);
    CHECK(pred.diverged);
    CHECK(pred.first_bad_index > 0);
    CHECK(pred.times.size() == static_cast<std::size_t>(pred.first_bad_index));
    CHECK(pred.states.allFinite());
}

TEST_CASE("integration validates its grid") {
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    // a single requested time returns just the initial state
    ock::PredictedTrajectory only = ock::integrate(exponential_field, x0, {0.0}, 10);
    CHECK(only.states.rows() == 1);
    CHECK(only.states(0, 0) == 1.0);
    CHECK_THROWS_AS(ock::integrate(exponential_field, x0, {}, 10), std::invalid_argument);
    CHECK_THROWS_AS(ock::integrate(exponential_field, x0, {0.0, 0.0}, 10), std::invalid_argument);
    CHECK_THROWS_AS(ock::integrate(exponential_field, x0, {0.0, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("trajectory error metric hand case") {
    // truth zero at t = 0, 1, 2; prediction off by 1 in one coordinate at the
    // last two times: Err = sqrt(1 * 1 + 1 * 1) = sqrt(2)
    Eigen::MatrixXd truth_states = Eigen::MatrixXd::Zero(3, 3);
    ock::SnapshotSeries truth = series_from(0, {0.0, 1.0, 2.0}, truth_states);

    ock::PredictedTrajectory pred;
    pred.times = {0.0, 1.0, 2.0};
    pred.states = Eigen::MatrixXd::Zero(3, 3);
    pred.states(1, 0) = 1.0;
    pred.states(2, 0) = 1.0;
    CHECK(ock::err_metric(truth, pred) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    // uneven spacing weights by the interval length
    ock::SnapshotSeries truth2 = series_from(0, {0.0, 0.25, 2.25}, truth_states);
    ock::PredictedTrajectory pred2 = pred;
    pred2.times = {0.0, 0.25, 2.25};
    CHECK(ock::err_metric(truth2, pred2) == doctest::Approx(std::sqrt(2.25)).epsilon(1e-14));

    pred2.times = {0.0, 0.3, 2.25};
    CHECK_THROWS_AS(ock::err_metric(truth2, pred2), std::invalid_argument);
}

TEST_CASE("null model error") {
    Eigen::MatrixXd states(3, 1);
    states << 2.0, 3.0, 4.0;
    ock::SnapshotSeries truth = series_from(0, {0.0, 1.0, 2.0}, states);
    // frozen at 2: deviations 1 and 2 -> sqrt(1 + 4)
    CHECK(ock::null_model_err(truth) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("one step error restarts from the truth") {
    // zero field: each one-interval prediction stays at the left endpoint, so
    // per-pair Err matches the interval null error
    Eigen::MatrixXd states(3, 2);
    states << 0.0, 0.0, 1.0, 0.0, 1.0, 3.0;
    ock::SnapshotSeries truth = series_from(0, {0.0, 1.0, 3.0}, states);
    ock::OckModel model = zero_field_model(2);
    // intervals: ||(1,0)|| * sqrt(1) = 1 and ||(0,3)|| * sqrt(2) = 3 sqrt(2)
    double expected = 0.5 * (1.0 + 3.0 * std::sqrt(2.0));
    CHECK(ock::one_step_err(truth, model, 4) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("field evaluator matches the quadrature expansion") {
    // hand-built implicit model with two segments and simple coefficients
    ock::OckModel model;
    model.path = ock::ModelPath::Implicit;
    model.kernel = ock::KernelSpec::gaussian(1.0);
    model.lambda = 1e-4;
    model.dimension = 1;
    ock::Segment s1, s2;
    s1.t_start = 0.0;
    s1.t_end = 1.0;
    s1.x_start = Eigen::VectorXd::Constant(1, 0.0);
    s1.x_end = Eigen::VectorXd::Constant(1, 1.0);
    s1.series_id = 0;
    s1.index_in_series = 0;
    s2.t_start = 1.0;
    s2.t_end = 3.0;
    s2.x_start = Eigen::VectorXd::Constant(1, 1.0);
    s2.x_end = Eigen::VectorXd::Constant(1, 2.0);
    s2.series_id = 0;
    s2.index_in_series = 1;
    model.segments = {s1, s2};
    model.alpha = Eigen::MatrixXd(2, 1);
    model.alpha << 2.0, -1.0;

    auto k = [](double a, double b) { return std::exp(-0.5 * (a - b) * (a - b)); };
    double z = 0.7;
    // f(z) = sum_i alpha_i * (h_i / 2) * (k(z, xs_i) + k(z, xe_i))
    double expected = 2.0 * 0.5 * (k(z, 0.0) + k(z, 1.0)) + (-1.0) * 1.0 * (k(z, 1.0) + k(z, 2.0));

    Eigen::MatrixXd state(1, 1);
    state << z;
    Eigen::MatrixXd got = ock::eval_field(model, state);
    CHECK(got(0, 0) == doctest::Approx(expected).epsilon(1e-13));

    // explicit model: field is Phi(z) * weights
    ock::OckModel em = zero_field_model(1);
    em.weights.setConstant(0.25);
    Eigen::MatrixXd feats = ock::rff_eval(em.feature_map, state);
    CHECK(ock::eval_field(em, state)(0, 0) ==
          doctest::Approx((feats * em.weights)(0, 0)).epsilon(1e-13));
}

TEST_CASE("error summaries aggregate divergences as infinity") {
    ock::EvalSummary s = ock::summarize_errs({1.0, 3.0}, 1);
    CHECK(s.errs.size() == 3);
    CHECK(std::isinf(s.mean));
    CHECK(s.median == 3.0);  // sorted: 1, 3, inf
    CHECK(s.diverged_count == 1);

    ock::EvalSummary t = ock::summarize_errs({2.0, 4.0, 9.0});
    CHECK(t.mean == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(t.median == 4.0);

    CHECK_THROWS_AS(ock::summarize_errs({}), std::invalid_argument);
}
