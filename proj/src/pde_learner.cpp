#include "ock/pde_learner.hpp"

#include "ock/quadrature.hpp"
#include "ock/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ock {

void GridField::validate() const {
    require(x_nodes.size() >= 2 && y_nodes.size() >= 2, "grid needs at least 2 nodes per axis");
    require(u.rows() == x_nodes.size() && u.cols() == y_nodes.size(),
            "grid value shape must be (n+1) x (m+1)");
    require(x_nodes.allFinite() && y_nodes.allFinite(), "grid nodes must be finite");
    require(u.allFinite(), "grid values must be finite");
    for (Eigen::Index i = 1; i < x_nodes.size(); ++i)
        require(x_nodes(i) > x_nodes(i - 1), "x nodes must be strictly increasing");
    for (Eigen::Index j = 1; j < y_nodes.size(); ++j)
        require(y_nodes(j) > y_nodes(j - 1), "y nodes must be strictly increasing");
}

void PdeModel::validate() const {
    map_alpha.validate();
    map_f.validate();
    require(map_alpha.dim() == 1 && map_f.dim() == 1, "PDE feature maps are 1-dimensional");
    require(gamma.size() == map_alpha.count(), "gamma size mismatch");
    require(delta.size() == map_f.count(), "delta size mismatch");
    require(gamma.allFinite() && delta.allFinite(), "PDE weights must be finite");
    require(lambda1 > 0.0 && lambda2 > 0.0, "PDE ridge weights must be positive");
}

Eigen::VectorXd cell_uy_integrals(const GridField& grid) {
    grid.validate();
    const int n = grid.cells_x(), m = grid.cells_y();
    Eigen::VectorXd z(n * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            double hx = grid.x_nodes(i + 1) - grid.x_nodes(i);
            z(i + j * n) = hx / 2.0 *
                           (grid.u(i, j + 1) + grid.u(i + 1, j + 1) - grid.u(i, j) -
                            grid.u(i + 1, j));
        }
    }
    return z;
}

Eigen::MatrixXd grid_ux(const GridField& grid) {
    grid.validate();
    require(grid.cells_x() >= 2, "u_x differences need at least 3 x nodes");
    const Eigen::Index nx = grid.x_nodes.size(), ny = grid.y_nodes.size();
    Eigen::MatrixXd ux(nx, ny);

    // 3-point Lagrange derivative weights: exact for quadratics, so second
    // order on interior and boundary alike
    auto stencil = [&](Eigen::Index at, Eigen::Index i0, Eigen::Index i1, Eigen::Index i2,
                       double& w0, double& w1, double& w2) {
        double x0 = grid.x_nodes(i0), x1 = grid.x_nodes(i1), x2 = grid.x_nodes(i2);
        double xa = grid.x_nodes(at);
        w0 = (2.0 * xa - x1 - x2) / ((x0 - x1) * (x0 - x2));
        w1 = (2.0 * xa - x0 - x2) / ((x1 - x0) * (x1 - x2));
        w2 = (2.0 * xa - x0 - x1) / ((x2 - x0) * (x2 - x1));
    };

    for (Eigen::Index i = 0; i < nx; ++i) {
        Eigen::Index i0 = i == 0 ? 0 : (i == nx - 1 ? nx - 3 : i - 1);
        double w0, w1, w2;
        stencil(i, i0, i0 + 1, i0 + 2, w0, w1, w2);
        ux.row(i) = w0 * grid.u.row(i0) + w1 * grid.u.row(i0 + 1) + w2 * grid.u.row(i0 + 2);
    }
    return ux;
}

Eigen::MatrixXd cell_ux_weighted(const GridField& grid, const FeatureMap& map_alpha) {
    require(map_alpha.dim() == 1, "map_alpha must be 1-dimensional");
    Eigen::MatrixXd ux = grid_ux(grid);
    Eigen::MatrixXd phi = rff_eval(map_alpha, grid.x_nodes).transpose();  // q1 x (n+1)

    const int n = grid.cells_x(), m = grid.cells_y();
    Eigen::MatrixXd psi1(map_alpha.count(), n * m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        double hy = grid.y_nodes(j + 1) - grid.y_nodes(j);
        for (int i = 0; i < n; ++i) {
            double hx = grid.x_nodes(i + 1) - grid.x_nodes(i);
            double left = ux(i, j) + ux(i, j + 1);
            double right = ux(i + 1, j) + ux(i + 1, j + 1);
            psi1.col(i + j * n) = hx * hy / 4.0 * (left * phi.col(i) + right * phi.col(i + 1));
        }
    }
    return psi1;
}

Eigen::MatrixXd cell_f_features(const GridField& grid, const FeatureMap& map_f) {
    grid.validate();
    require(map_f.dim() == 1, "map_f must be 1-dimensional");
    const Eigen::Index nx = grid.x_nodes.size(), ny = grid.y_nodes.size();

    // phi2 at every node's u value, one q2-column per node
    Eigen::MatrixXd uflat(nx * ny, 1);
    for (Eigen::Index j = 0; j < ny; ++j)
        for (Eigen::Index i = 0; i < nx; ++i) uflat(i + j * nx, 0) = grid.u(i, j);
    Eigen::MatrixXd phi = rff_eval(map_f, uflat).transpose();  // q2 x (nx*ny)

    const int n = grid.cells_x(), m = grid.cells_y();
    Eigen::MatrixXd psi2(map_f.count(), n * m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        double hy = grid.y_nodes(j + 1) - grid.y_nodes(j);
        for (int i = 0; i < n; ++i) {
            double hx = grid.x_nodes(i + 1) - grid.x_nodes(i);
            psi2.col(i + j * n) = hx * hy / 4.0 *
                                  (phi.col(i + j * nx) + phi.col(i + 1 + j * nx) +
                                   phi.col(i + (j + 1) * nx) + phi.col(i + 1 + (j + 1) * nx));
        }
    }
    return psi2;
}

PdeModel fit_pde(const GridField& grid, const FeatureMap& map_alpha, const FeatureMap& map_f,
                 double lambda1, double lambda2, SolveReport* report) {
    require(std::isfinite(lambda1) && lambda1 > 0.0, "lambda1 must be positive");
    require(std::isfinite(lambda2) && lambda2 > 0.0, "lambda2 must be positive");

    Eigen::VectorXd y = cell_uy_integrals(grid);
    Eigen::MatrixXd psi1 = cell_ux_weighted(grid, map_alpha);
    Eigen::MatrixXd psi2 = cell_f_features(grid, map_f);
    const int q1 = map_alpha.count(), q2 = map_f.count();

    // residual per cell: psi1^T gamma + y - psi2^T delta; the stacked design
    // is [psi1^T, -psi2^T], assembled here block-wise as normal equations
    Eigen::MatrixXd normal(q1 + q2, q1 + q2);
    normal.topLeftCorner(q1, q1) = psi1 * psi1.transpose();
    normal.topRightCorner(q1, q2) = -(psi1 * psi2.transpose());
    normal.bottomLeftCorner(q2, q1) = normal.topRightCorner(q1, q2).transpose();
    normal.bottomRightCorner(q2, q2) = psi2 * psi2.transpose();
    normal.diagonal().head(q1).array() += lambda1;
    normal.diagonal().tail(q2).array() += lambda2;
    Eigen::VectorXd rhs(q1 + q2);
    rhs.head(q1) = -(psi1 * y);
    rhs.tail(q2) = psi2 * y;

    PdeModel model;
    model.map_alpha = map_alpha;
    model.map_f = map_f;
    model.lambda1 = lambda1;
    model.lambda2 = lambda2;
    Eigen::VectorXd v = solve_regularized_spd(normal, rhs, 0.0, report);
    model.gamma = v.head(q1);
    model.delta = v.tail(q2);
    model.grid_nx = grid.cells_x();
    model.grid_ny = grid.cells_y();
    model.x_range = {grid.x_nodes(0), grid.x_nodes(grid.x_nodes.size() - 1)};
    model.u_range = {grid.u.minCoeff(), grid.u.maxCoeff()};
    return model;
}

Eigen::VectorXd eval_alpha(const PdeModel& model, const Eigen::Ref<const Eigen::VectorXd>& s) {
    model.validate();
    return rff_eval(model.map_alpha, s) * model.gamma;
}

Eigen::VectorXd eval_f(const PdeModel& model, const Eigen::Ref<const Eigen::VectorXd>& z) {
    model.validate();
    return rff_eval(model.map_f, z) * model.delta;
}

double pde_l1_error(const ScalarFn& pred, const ScalarFn& truth,
                    const Eigen::Ref<const Eigen::VectorXd>& eval_points) {
    require(eval_points.size() > 0, "pde_l1_error needs evaluation points");
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < eval_points.size(); ++i) {
        double t = truth(eval_points(i));
        num += std::abs(pred(eval_points(i)) - t);
        den += std::abs(t);
    }
    require(den > 0.0, "pde_l1_error truth is identically zero on the evaluation set");
    return num / den;
}

PdeTestCase make_benchmark_case(int n, int m) {
    require(n >= 2 && m >= 2, "benchmark grid needs n, m >= 2");
    PdeTestCase tc;
    tc.grid.x_nodes = Eigen::VectorXd::LinSpaced(n + 1, -4.0, 4.0);
    tc.grid.y_nodes = Eigen::VectorXd::LinSpaced(m + 1, 0.0, 1.0);
    tc.grid.u.resize(n + 1, m + 1);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= m; ++j) {
            double x = tc.grid.x_nodes(i), y = tc.grid.y_nodes(j);
            double w = y + std::sin(4.0 * M_PI * (std::atan(x) - y));
            tc.grid.u(i, j) = 1.0 / (1.0 + std::exp(w));
        }
    }
    tc.alpha = [](double x) { return 1.0 + x * x; };
    tc.f = [](double u) { return -u * (1.0 - u); };
    return tc;
}

PdeStudyResult run_pde_study(const PdeStudyConfig& cfg) {
    require(!cfg.grids.empty(), "study needs at least one grid");
    require(cfg.feature_count >= 1, "study needs feature_count >= 1");
    require(cfg.eval_points >= 2, "study needs eval_points >= 2");
    for (const auto& g : cfg.grids)
        require(g[0] >= 2 && g[1] >= 2, "study grids need n, m >= 2");

    // one frozen draw per function, shared across every grid size
    FeatureMap map_alpha = rff_build(
        KernelSpec::random_fourier(cfg.lengthscale_alpha, cfg.feature_count, mix_seed(cfg.seed, 1)),
        1);
    FeatureMap map_f = rff_build(
        KernelSpec::random_fourier(cfg.lengthscale_f, cfg.feature_count, mix_seed(cfg.seed, 2)), 1);

    PdeStudyResult out;
    Eigen::VectorXd alpha_pts, f_pts;
    for (std::size_t g = 0; g < cfg.grids.size(); ++g) {
        PdeTestCase tc = make_benchmark_case(cfg.grids[g][0], cfg.grids[g][1]);
        if (g == 0) {
            // evaluation sets frozen from the first grid so rows are comparable
            alpha_pts = Eigen::VectorXd::LinSpaced(cfg.eval_points, tc.grid.x_nodes(0),
                                                   tc.grid.x_nodes(tc.grid.x_nodes.size() - 1));
            f_pts = Eigen::VectorXd::LinSpaced(cfg.eval_points, tc.grid.u.minCoeff(),
                                               tc.grid.u.maxCoeff());
        }
        PdeModel model = fit_pde(tc.grid, map_alpha, map_f, cfg.lambda1, cfg.lambda2);
        PdeStudyRow row;
        row.n = cfg.grids[g][0];
        row.m = cfg.grids[g][1];
        row.alpha_err = pde_l1_error(
            [&model](double s) {
                return eval_alpha(model, Eigen::VectorXd::Constant(1, s))(0);
            },
            tc.alpha, alpha_pts);
        row.f_err = pde_l1_error(
            [&model](double z) { return eval_f(model, Eigen::VectorXd::Constant(1, z))(0); },
            tc.f, f_pts);
        out.rows.push_back(row);
    }

    auto slope = [&](auto pick) {
        const std::size_t k = out.rows.size();
        if (k < 2) return 0.0;
        double mx = 0.0, my = 0.0;
        std::vector<double> lx(k), ly(k);
        for (std::size_t i = 0; i < k; ++i) {
            lx[i] = std::log(static_cast<double>(out.rows[i].n) * out.rows[i].m);
            ly[i] = std::log(pick(out.rows[i]));
            mx += lx[i];
            my += ly[i];
        }
        mx /= k;
        my /= k;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        return num / den;
    };
    out.alpha_slope = slope([](const PdeStudyRow& r) { return r.alpha_err; });
    out.f_slope = slope([](const PdeStudyRow& r) { return r.f_err; });
    return out;
}

GridField load_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    {
        std::istringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        if (a != "x" || b != "y" || c != "u") throw ParseError(path, 1, "header must be x,y,u");
    }

    std::set<double> xs, ys;
    std::map<std::pair<double, double>, double> values;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string fx, fy, fu;
        if (!std::getline(ss, fx, ',') || !std::getline(ss, fy, ',') || !std::getline(ss, fu))
            throw ParseError(path, lineno, "expected 3 fields");
        double x, y, u;
        try {
            x = std::stod(fx);
            y = std::stod(fy);
            u = std::stod(fu);
        } catch (const std::exception&) {
            throw ParseError(path, lineno, "cannot parse number");
        }
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(u))
            throw ParseError(path, lineno, "non-finite value");
        if (!values.emplace(std::make_pair(x, y), u).second)
            throw ParseError(path, lineno, "duplicate grid point");
        xs.insert(x);
        ys.insert(y);
    }
    if (values.empty()) throw ParseError(path, lineno, "file has no data rows");
    if (values.size() != xs.size() * ys.size())
        throw ParseError(path, lineno, "grid points do not form a complete lattice");

    GridField grid;
    grid.x_nodes.resize(xs.size());
    grid.y_nodes.resize(ys.size());
    Eigen::Index i = 0;
    for (double x : xs) grid.x_nodes(i++) = x;
    Eigen::Index j = 0;
    for (double y : ys) grid.y_nodes(j++) = y;
    grid.u.resize(grid.x_nodes.size(), grid.y_nodes.size());
    for (Eigen::Index a = 0; a < grid.x_nodes.size(); ++a)
        for (Eigen::Index b = 0; b < grid.y_nodes.size(); ++b)
            grid.u(a, b) = values.at({grid.x_nodes(a), grid.y_nodes(b)});
    grid.validate();
    return grid;
}

void save_grid_csv(const std::string& path, const GridField& grid) {
    grid.validate();
    std::ofstream outf(path);
    if (!outf) throw std::invalid_argument("cannot open '" + path + "' for writing");
    outf << "x,y,u\n";
    char buf[200];
    for (Eigen::Index i = 0; i < grid.x_nodes.size(); ++i) {
        for (Eigen::Index j = 0; j < grid.y_nodes.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.x_nodes(i),
                          grid.y_nodes(j), grid.u(i, j));
            outf << buf;
        }
    }
}

}  // namespace ock
