#pragma once

#include "ock/kernels.hpp"
#include "ock/ode_learner.hpp"
#include "ock/types.hpp"

#include <functional>

namespace ock {

// Gridded solution samples of alpha(x) u_x + u_y = f(u). u(i, j) is the value
// at (x_nodes[i], y_nodes[j]).
struct GridField {
    Eigen::VectorXd x_nodes;  // n + 1 increasing
    Eigen::VectorXd y_nodes;  // m + 1 increasing
    Eigen::MatrixXd u;        // (n + 1) x (m + 1)

    int cells_x() const { return static_cast<int>(x_nodes.size()) - 1; }
    int cells_y() const { return static_cast<int>(y_nodes.size()) - 1; }
    void validate() const;
};

// Learned coefficient pair: alpha(s) = phi1(s)^T gamma, f(z) = phi2(z)^T delta.
struct PdeModel {
    Eigen::VectorXd gamma;
    Eigen::VectorXd delta;
    FeatureMap map_alpha;  // over 1D x
    FeatureMap map_f;      // over 1D u
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    // source grid metadata, carried for provenance
    int grid_nx = 0, grid_ny = 0;
    std::array<double, 2> x_range{0.0, 0.0};
    std::array<double, 2> u_range{0.0, 0.0};

    void validate() const;
};

// Cells are indexed c = i + j * n with i the x-cell and j the y-cell.

// Cell integral of u_y: fundamental theorem in y, trapezoid in x:
// z[c] = (hx/2) * (u(i,j+1) + u(i+1,j+1) - u(i,j) - u(i+1,j))
Eigen::VectorXd cell_uy_integrals(const GridField& grid);

// u_x at every node: second-order central differences, one-sided at the
// x-boundaries. Needs at least 3 x-nodes (n >= 2).
Eigen::MatrixXd grid_ux(const GridField& grid);

// Column c = cell trapezoid of phi1(x) * u_x, one row per feature.
Eigen::MatrixXd cell_ux_weighted(const GridField& grid, const FeatureMap& map_alpha);

// Column c = cell trapezoid of phi2(u), one row per feature.
Eigen::MatrixXd cell_f_features(const GridField& grid, const FeatureMap& map_f);

// Minimizes ||Psi1^T gamma - Psi2^T delta + y||^2 + lambda1 |gamma|^2
// + lambda2 |delta|^2 via the stacked (q1+q2) normal equations.
PdeModel fit_pde(const GridField& grid, const FeatureMap& map_alpha, const FeatureMap& map_f,
                 double lambda1, double lambda2, SolveReport* report = nullptr);

Eigen::VectorXd eval_alpha(const PdeModel& model, const Eigen::Ref<const Eigen::VectorXd>& s);
Eigen::VectorXd eval_f(const PdeModel& model, const Eigen::Ref<const Eigen::VectorXd>& z);

// sum |pred - truth| / sum |truth| over eval_points.
using ScalarFn = std::function<double(double)>;
double pde_l1_error(const ScalarFn& pred, const ScalarFn& truth,
                    const Eigen::Ref<const Eigen::VectorXd>& eval_points);

// Closed-form benchmark problem: u(x,y) = 1 / (1 + exp(y + sin(4 pi (atan(x) - y))))
// on [-4,4] x [0,1], which satisfies (1 + x^2) u_x + u_y = -u (1 - u).
struct PdeTestCase {
    GridField grid;
    ScalarFn alpha;  // 1 + x^2
    ScalarFn f;      // -u (1 - u)
};
PdeTestCase make_benchmark_case(int n, int m);

// Fit the benchmark problem across grid resolutions and report L1 errors.
struct PdeStudyRow {
    int n = 0, m = 0;
    double alpha_err = 0.0, f_err = 0.0;
};
struct PdeStudyResult {
    std::vector<PdeStudyRow> rows;
    double alpha_slope = 0.0;  // log-log slope of alpha_err vs n*m
    double f_slope = 0.0;
};
struct PdeStudyConfig {
    std::vector<std::array<int, 2>> grids{{100, 10}, {200, 20}, {400, 40}, {800, 80}};
    int feature_count = 100;
    double lengthscale_alpha = 1.0;
    double lengthscale_f = 0.1;
    double lambda1 = 1e-8;
    double lambda2 = 1e-8;
    std::uint64_t seed = 0;
    int eval_points = 1001;
};
PdeStudyResult run_pde_study(const PdeStudyConfig& cfg);

// Grid CSV: header x,y,u; rows must form a complete lattice.
GridField load_grid_csv(const std::string& path);
void save_grid_csv(const std::string& path, const GridField& grid);

}  // namespace ock
