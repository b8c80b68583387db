#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ock/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

namespace {

template <typename A, typename B>
bool bitwise_equal(const A& a, const B& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.array() == Eigen::MatrixXd(b).array()).all();
}

ock::GeneratorConfig small_fhn(std::uint64_t seed, double noise) {
    ock::GeneratorConfig cfg = ock::GeneratorConfig::fhn();
    cfg.n_trajectories = 3;
    cfg.n_snapshots = 9;
    cfg.t_end = 2.0;
    cfg.noise_std = noise;
    cfg.seed = seed;
    return cfg;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/ock_dataset_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// RK4 over the same stepping pattern the generator uses, with the fhn
// right-hand side written out independently
Eigen::Vector2d fhn_oracle_step(Eigen::Vector2d x, double h, int substeps) {
    auto rhs = [](const Eigen::Vector2d& v) {
        double a = 0.7, b = 0.8, tau = 12.5, ri = 0.5;
        return Eigen::Vector2d(v(0) - v(0) * v(0) * v(0) / 3.0 - v(1) + ri,
                               (v(0) + a - b * v(1)) / tau);
    };
    double hs = h / substeps;
    for (int s = 0; s < substeps; ++s) {
        Eigen::Vector2d k1 = rhs(x);
        Eigen::Vector2d k2 = rhs(x + hs / 2.0 * k1);
        Eigen::Vector2d k3 = rhs(x + hs / 2.0 * k2);
        Eigen::Vector2d k4 = rhs(x + hs * k3);
        x = x + hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
    std::vector<ock::SnapshotSeries> a = ock::generate(small_fhn(4, 0.1));
    std::vector<ock::SnapshotSeries> b = ock::generate(small_fhn(4, 0.1));
    std::vector<ock::SnapshotSeries> c = ock::generate(small_fhn(5, 0.1));
    REQUIRE(a.size() == 3);
    REQUIRE(a[0].size() == 9);
    for (int i = 0; i < 3; ++i) {
        CHECK(bitwise_equal(a[i].states, b[i].states));
        CHECK(a[i].times == b[i].times);
    }
    CHECK_FALSE(bitwise_equal(a[0].states, c[0].states));
}

TEST_CASE("noise is observation noise on a clean trajectory") {
    std::vector<ock::SnapshotSeries> clean = ock::generate(small_fhn(4, 0.0));
    std::vector<ock::SnapshotSeries> noisy = ock::generate(small_fhn(4, 0.12));
    // same seed: the underlying trajectory matches, only the additive noise differs
    Eigen::MatrixXd diff = noisy[0].states - clean[0].states;
    CHECK(diff.cwiseAbs().maxCoeff() > 0.0);
    CHECK(diff.cwiseAbs().maxCoeff() < 1.0);
    // every stored value is perturbed independently, including the first snapshot
    CHECK(diff.cwiseAbs().minCoeff() > 0.0);
}

TEST_CASE("fhn snapshots follow the stated equations") {
    ock::GeneratorConfig cfg = small_fhn(11, 0.0);
    cfg.substeps = 20;
    std::vector<ock::SnapshotSeries> series = ock::generate(cfg);
    const ock::SnapshotSeries& s = series[0];
    double dt = s.times[1] - s.times[0];
    for (int i = 1; i < 4; ++i) {
        Eigen::Vector2d expect =
            fhn_oracle_step(s.states.row(i - 1).transpose(), dt, cfg.substeps);
        CHECK((expect - s.states.row(i).transpose()).norm() < 1e-10);
    }
}

TEST_CASE("lorenz96 stays at its equilibrium exactly") {
    ock::GeneratorConfig cfg = ock::GeneratorConfig::lorenz96(8);
    cfg.n_trajectories = 2;
    cfg.n_snapshots = 12;
    cfg.t_end = 1.0;
    cfg.seed = 3;
    cfg.init_box.assign(8, {8.0, 8.0});  // lock the start onto x = F
    std::vector<ock::SnapshotSeries> series = ock::generate(cfg);
    for (const ock::SnapshotSeries& s : series)
        CHECK((s.states.array() == 8.0).all());
}

TEST_CASE("lorenz96 default start perturbs one coordinate") {
    ock::GeneratorConfig cfg = ock::GeneratorConfig::lorenz96(12);
    cfg.n_trajectories = 4;
    cfg.n_snapshots = 2;
    cfg.t_end = 0.01;
    cfg.seed = 9;
    std::vector<ock::SnapshotSeries> series = ock::generate(cfg);
    for (const ock::SnapshotSeries& s : series) {
        int at_f = 0, off_f = 0;
        for (int j = 0; j < 12; ++j) {
            if (s.states(0, j) == 8.0)
                ++at_f;
            else
                ++off_f;
        }
        CHECK(at_f == 11);
        CHECK(off_f == 1);
    }
}

TEST_CASE("split is a deterministic partition by whole series") {
    std::vector<ock::SnapshotSeries> series;
    for (int i = 0; i < 10; ++i) {
        ock::SnapshotSeries s;
        s.series_id = 100 + i;
        s.times = {0.0, 1.0};
        s.states = Eigen::MatrixXd::Constant(2, 1, static_cast<double>(i));
        series.push_back(s);
    }
    ock::SplitResult a = ock::split_series(series, {0.7, 0.1, 0.2}, 42);
    CHECK(a.train.size() == 7);
    CHECK(a.validation.size() == 1);
    CHECK(a.test.size() == 2);

    std::set<int> seen;
    for (const auto& part : {a.train, a.validation, a.test})
        for (const ock::SnapshotSeries& s : part) seen.insert(s.series_id);
    CHECK(seen.size() == 10);

    ock::SplitResult b = ock::split_series(series, {0.7, 0.1, 0.2}, 42);
    CHECK(b.train[0].series_id == a.train[0].series_id);
    CHECK(b.test[1].series_id == a.test[1].series_id);

    ock::SplitResult c = ock::split_series(series, {0.7, 0.1, 0.2}, 43);
    bool same_order = true;
    for (std::size_t i = 0; i < a.train.size(); ++i)
        same_order = same_order && a.train[i].series_id == c.train[i].series_id;
    CHECK_FALSE(same_order);

    // every positive fraction keeps at least one series
    ock::SplitResult tiny = ock::split_series(series, {0.99, 0.0, 0.01}, 1);
    CHECK(tiny.validation.empty());
    CHECK(tiny.test.size() >= 1);

    CHECK_THROWS_AS(ock::split_series(series, {0.5, 0.2, 0.2}, 1), std::invalid_argument);
    CHECK_THROWS_AS(ock::split_series(series, {-0.1, 0.6, 0.5}, 1), std::invalid_argument);
    std::vector<ock::SnapshotSeries> two(series.begin(), series.begin() + 2);
    CHECK_THROWS_AS(ock::split_series(two, {0.4, 0.3, 0.3}, 1), std::invalid_argument);
}

TEST_CASE("csv round trip preserves every bit") {
    std::vector<ock::SnapshotSeries> series = ock::generate(small_fhn(8, 0.05));
    std::string path = temp_path("roundtrip.csv");
    ock::save_series_csv(path, series);
    ock::LoadedCsv back = ock::load_series_csv(path);
    REQUIRE(back.series.size() == series.size());
    CHECK_FALSE(back.has_diverged_column);
    for (std::size_t i = 0; i < series.size(); ++i) {
        CHECK(back.series[i].series_id == series[i].series_id);
        CHECK(back.series[i].times == series[i].times);
        CHECK(bitwise_equal(back.series[i].states, series[i].states));
    }
    std::remove(path.c_str());
}

TEST_CASE("prediction csv carries the diverged flag") {
    std::vector<ock::SnapshotSeries> series = ock::generate(small_fhn(8, 0.0));
    std::map<int, bool> diverged{{0, false}, {1, true}, {2, false}};
    std::string path = temp_path("preds.csv");
    ock::save_predictions_csv(path, series, diverged);
    ock::LoadedCsv back = ock::load_series_csv(path);
    CHECK(back.has_diverged_column);
    CHECK_FALSE(back.diverged[0]);
    CHECK(back.diverged[1]);
    std::remove(path.c_str());
}

TEST_CASE("csv loader reports precise parse failures") {
    std::string path = temp_path("bad.csv");

    write_file(path, "series_id,t,x_1\n0,0.0,1.0\n0,1.0\n");
    try {
        ock::load_series_csv(path);
        FAIL("expected a parse error");
    } catch (const ock::ParseError& e) {
        CHECK(e.line_number == 3);
    }

    write_file(path, "wrong,t,x_1\n0,0.0,1.0\n");
    CHECK_THROWS_AS(ock::load_series_csv(path), ock::ParseError);

    write_file(path, "series_id,t,x_1\n0,0.0,1.0\n0,0.0,2.0\n");
    CHECK_THROWS_AS(ock::load_series_csv(path), ock::ParseError);  // duplicate time

    write_file(path, "series_id,t,x_1\n0,0.0,nope\n");
    CHECK_THROWS_AS(ock::load_series_csv(path), ock::ParseError);

    write_file(path, "series_id,t,x_1\n");
    CHECK_THROWS_AS(ock::load_series_csv(path), ock::ParseError);  // no data rows

    write_file(path, "series_id,x_1\n0,1.0\n0,2.0\n");
    CHECK_THROWS_AS(ock::load_series_csv(path), ock::ParseError);  // no t, no fixed dt

    CHECK_THROWS_AS(ock::load_series_csv(temp_path("missing_file.csv")), ock::ParseError);
    std::remove(path.c_str());
}

TEST_CASE("csv loader synthesizes a uniform grid when asked") {
    std::string path = temp_path("fixed_dt.csv");
    write_file(path, "series_id,x_1\n0,1.0\n0,2.0\n0,3.0\n");
    ock::LoadedCsv got = ock::load_series_csv(path, 0.5);
    REQUIRE(got.series.size() == 1);
    CHECK(got.series[0].times == std::vector<double>{0.0, 0.5, 1.0});
    std::remove(path.c_str());
}

TEST_CASE("csv loader sorts rows by time within a series") {
    std::string path = temp_path("unsorted.csv");
    write_file(path, "series_id,t,x_1\n0,2.0,30.0\n0,0.0,10.0\n0,1.0,20.0\n");
    ock::LoadedCsv got = ock::load_series_csv(path);
    CHECK(got.series[0].times == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(got.series[0].states(0, 0) == 10.0);
    CHECK(got.series[0].states(2, 0) == 30.0);
    std::remove(path.c_str());
}

TEST_CASE("generator configs validate their inputs") {
    ock::GeneratorConfig cfg = ock::GeneratorConfig::fhn();
    cfg.n_snapshots = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ock::GeneratorConfig::fhn();
    cfg.t_end = cfg.t_start;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ock::GeneratorConfig::fhn();
    cfg.noise_std = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(ock::GeneratorConfig::lorenz96(3), std::invalid_argument);
    CHECK_THROWS_AS(ock::system_from_name("unknown"), std::invalid_argument);
    CHECK(ock::system_name(ock::SystemKind::Lorenz63) == "lorenz63");
}
