#include "ock/datasets.hpp"

#include "ock/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

namespace ock {

std::string system_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::FitzHughNagumo: return "fhn";
        case SystemKind::Lorenz63: return "lorenz63";
        case SystemKind::Lorenz96: return "lorenz96";
    }
    throw std::invalid_argument("unknown system kind");
}

SystemKind system_from_name(const std::string& name) {
    if (name == "fhn") return SystemKind::FitzHughNagumo;
    if (name == "lorenz63") return SystemKind::Lorenz63;
    if (name == "lorenz96") return SystemKind::Lorenz96;
    throw std::invalid_argument("unknown system '" + name + "' (expected fhn, lorenz63, lorenz96)");
}

GeneratorConfig GeneratorConfig::fhn() {
    GeneratorConfig cfg;
    cfg.system = SystemKind::FitzHughNagumo;
    cfg.dimension = 2;
    cfg.params = {{"a", 0.7}, {"b", 0.8}, {"tau", 12.5}, {"RI", 0.5}};
    cfg.noise_std = 0.12;
    cfg.n_trajectories = 150;
    cfg.n_snapshots = 201;
    cfg.t_start = 0.0;
    cfg.t_end = 20.0;
    cfg.init_box = {{-2.0, 2.0}, {-2.0, 2.0}};
    return cfg;
}

GeneratorConfig GeneratorConfig::lorenz63() {
    GeneratorConfig cfg;
    cfg.system = SystemKind::Lorenz63;
    cfg.dimension = 3;
    cfg.params = {{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}};
    cfg.noise_std = 0.5;
    cfg.n_trajectories = 150;
    cfg.n_snapshots = 201;
    cfg.t_start = 0.0;
    cfg.t_end = 10.0;
    cfg.init_box = {{-10.0, 10.0}, {-10.0, 10.0}, {10.0, 30.0}};
    return cfg;
}

GeneratorConfig GeneratorConfig::lorenz96(int dimension) {
    GeneratorConfig cfg;
    cfg.system = SystemKind::Lorenz96;
    cfg.dimension = dimension;
    cfg.params = {{"F", 8.0}};
    cfg.noise_std = 0.0;
    cfg.n_trajectories = 100;
    cfg.n_snapshots = 243;
    cfg.t_start = 0.0;
    cfg.t_end = 5.0;
    // init_box empty: initial state is x = F everywhere with one uniformly
    // chosen coordinate nudged by Unif(-1, 1)
    cfg.validate();
    return cfg;
}

void GeneratorConfig::validate() const {
    if (system == SystemKind::FitzHughNagumo) require(dimension == 2, "fhn is 2-dimensional");
    if (system == SystemKind::Lorenz63) require(dimension == 3, "lorenz63 is 3-dimensional");
    if (system == SystemKind::Lorenz96) require(dimension >= 4, "lorenz96 needs dimension >= 4");
    require(n_trajectories >= 1, "n_trajectories must be >= 1");
    require(n_snapshots >= 2, "n_snapshots must be >= 2");
    require(std::isfinite(t_start) && std::isfinite(t_end) && t_end > t_start,
            "generator needs t_end > t_start");
    require(std::isfinite(noise_std) && noise_std >= 0.0, "noise_std must be >= 0");
    require(substeps >= 1, "substeps must be >= 1");
    if (!init_box.empty()) {
        require(static_cast<int>(init_box.size()) == dimension,
                "init_box size must match dimension");
        for (const auto& b : init_box)
            require(std::isfinite(b[0]) && std::isfinite(b[1]) && b[1] >= b[0],
                    "init_box bounds must be finite with hi >= lo");
    }
    for (const auto& [key, value] : params)
        require(std::isfinite(value), "parameter '" + key + "' must be finite");
}

namespace {

double param(const GeneratorConfig& cfg, const std::string& key) {
    auto it = cfg.params.find(key);
    require(it != cfg.params.end(), "missing parameter '" + key + "'");
    return it->second;
}

using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Eigen::VectorXd rk4_step(const Rhs& rhs, const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd k1 = rhs(x);
    Eigen::VectorXd k2 = rhs(x + h / 2.0 * k1);
    Eigen::VectorXd k3 = rhs(x + h / 2.0 * k2);
    Eigen::VectorXd k4 = rhs(x + h * k3);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<SnapshotSeries> run_generator(const GeneratorConfig& cfg, const Rhs& rhs) {
    cfg.validate();
    const int d = cfg.dimension, nt = cfg.n_trajectories, ns = cfg.n_snapshots;
    const double dt = (cfg.t_end - cfg.t_start) / (ns - 1);

    std::vector<Eigen::VectorXd> ics(nt);
    for (int traj = 0; traj < nt; ++traj) {
        Rng ic_rng(mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(traj)));
        Eigen::VectorXd x(d);
        if (!cfg.init_box.empty()) {
            for (int j = 0; j < d; ++j)
                x(j) = ic_rng.uniform(cfg.init_box[j][0], cfg.init_box[j][1]);
        } else {
            require(cfg.system == SystemKind::Lorenz96,
                    "init_box required for this system");
            // Lorenz96 default: equilibrium x = F with one perturbed coordinate
            x.setConstant(param(cfg, "F"));
            int k = std::min(static_cast<int>(ic_rng.uniform(0.0, d)), d - 1);
            x(k) += ic_rng.uniform(-1.0, 1.0);
        }
        ics[traj] = std::move(x);
    }

    std::vector<SnapshotSeries> out(nt);
#pragma omp parallel for schedule(static)
    for (int traj = 0; traj < nt; ++traj) {
        Rng noise_rng(mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(traj) + 1));
        Eigen::VectorXd x = ics[traj];

        SnapshotSeries s;
        s.series_id = traj;
        s.times.resize(ns);
        s.states.resize(ns, d);
        s.times[0] = cfg.t_start;
        s.states.row(0) = x;
        for (int i = 1; i < ns; ++i) {
            double h = dt / cfg.substeps;
            for (int sub = 0; sub < cfg.substeps; ++sub) x = rk4_step(rhs, x, h);
            s.times[i] = cfg.t_start + i * dt;
            s.states.row(i) = x;
        }
        if (cfg.noise_std > 0.0) {
            for (int i = 0; i < ns; ++i)
                for (int j = 0; j < d; ++j) s.states(i, j) += cfg.noise_std * noise_rng.normal();
        }
        out[traj] = std::move(s);
    }
    return out;
}

}  // namespace

std::vector<SnapshotSeries> gen_fhn(const GeneratorConfig& cfg) {
    require(cfg.system == SystemKind::FitzHughNagumo, "gen_fhn needs system=fhn");
    const double a = param(cfg, "a"), b = param(cfg, "b");
    const double tau = param(cfg, "tau"), ri = param(cfg, "RI");
    require(tau != 0.0, "fhn tau must be nonzero");
    return run_generator(cfg, [=](const Eigen::VectorXd& x) {
        Eigen::VectorXd dx(2);
        dx(0) = x(0) - x(0) * x(0) * x(0) / 3.0 - x(1) + ri;
        dx(1) = (x(0) + a - b * x(1)) / tau;
        return dx;
    });
}

std::vector<SnapshotSeries> gen_lorenz63(const GeneratorConfig& cfg) {
    require(cfg.system == SystemKind::Lorenz63, "gen_lorenz63 needs system=lorenz63");
    const double sigma = param(cfg, "sigma"), rho = param(cfg, "rho"), beta = param(cfg, "beta");
    return run_generator(cfg, [=](const Eigen::VectorXd& x) {
        Eigen::VectorXd dx(3);
        dx(0) = sigma * (x(1) - x(0));
        dx(1) = x(0) * (rho - x(2)) - x(1);
        dx(2) = x(0) * x(1) - beta * x(2);
        return dx;
    });
}

std::vector<SnapshotSeries> gen_lorenz96(const GeneratorConfig& cfg) {
    require(cfg.system == SystemKind::Lorenz96, "gen_lorenz96 needs system=lorenz96");
    const double f = param(cfg, "F");
    const int d = cfg.dimension;
    return run_generator(cfg, [f, d](const Eigen::VectorXd& x) {
        Eigen::VectorXd dx(d);
        for (int k = 0; k < d; ++k) {
            int kp1 = (k + 1) % d, km1 = (k - 1 + d) % d, km2 = (k - 2 + d) % d;
            dx(k) = (x(kp1) - x(km2)) * x(km1) - x(k) + f;
        }
        return dx;
    });
}

std::vector<SnapshotSeries> generate(const GeneratorConfig& cfg) {
    switch (cfg.system) {
        case SystemKind::FitzHughNagumo: return gen_fhn(cfg);
        case SystemKind::Lorenz63: return gen_lorenz63(cfg);
        case SystemKind::Lorenz96: return gen_lorenz96(cfg);
    }
    throw std::invalid_argument("unknown system kind");
}

SplitResult split_series(const std::vector<SnapshotSeries>& series,
                         const std::array<double, 3>& fractions, std::uint64_t seed) {
    double sum = 0.0;
    int parts = 0;
    for (double f : fractions) {
        require(std::isfinite(f) && f >= 0.0, "split fractions must be >= 0");
        sum += f;
        if (f > 0.0) ++parts;
    }
    require(std::abs(sum - 1.0) < 1e-9, "split fractions must sum to 1");
    require(parts >= 1, "at least one split fraction must be positive");
    const int n = static_cast<int>(series.size());
    require(n >= parts, "fewer series than split parts");

    // seeded Fisher-Yates; std::shuffle is implementation-defined
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (int i = n - 1; i > 0; --i) {
        int j = std::min(static_cast<int>(rng.uniform(0.0, static_cast<double>(i + 1))), i);
        std::swap(order[i], order[j]);
    }

    // floor counts, then distribute the remainder by largest fractional part;
    // every positive fraction keeps at least one series
    std::array<int, 3> counts{};
    std::array<double, 3> frac{};
    int used = 0;
    for (int p = 0; p < 3; ++p) {
        double want = fractions[p] * n;
        counts[p] = static_cast<int>(std::floor(want));
        frac[p] = want - counts[p];
        used += counts[p];
    }
    while (used < n) {
        int best = 0;
        for (int p = 1; p < 3; ++p)
            if (frac[p] > frac[best]) best = p;
        ++counts[best];
        frac[best] = -1.0;
        ++used;
    }
    for (int p = 0; p < 3; ++p) {
        if (fractions[p] > 0.0 && counts[p] == 0) {
            int donor = 0;
            for (int q = 1; q < 3; ++q)
                if (counts[q] > counts[donor]) donor = q;
            --counts[donor];
            ++counts[p];
        }
    }

    SplitResult out;
    int at = 0;
    for (int i = 0; i < counts[0]; ++i) out.train.push_back(series[order[at++]]);
    for (int i = 0; i < counts[1]; ++i) out.validation.push_back(series[order[at++]]);
    for (int i = 0; i < counts[2]; ++i) out.test.push_back(series[order[at++]]);
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& path, long line, const std::string& field) {
    try {
        std::size_t pos = 0;
        double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path, line, "cannot parse number '" + field + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

LoadedCsv load_series_csv(const std::string& path, std::optional<double> fixed_dt) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    if (fixed_dt) require(*fixed_dt > 0.0 && std::isfinite(*fixed_dt), "fixed_dt must be positive");

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    std::vector<std::string> header = split_line(line);
    for (std::string& h : header) h = trim(h);
    if (header.empty() || header[0] != "series_id")
        throw ParseError(path, 1, "header must start with series_id");

    std::size_t col = 1;
    bool has_time = col < header.size() && header[col] == "t";
    if (has_time) ++col;
    if (!has_time && !fixed_dt)
        throw ParseError(path, 1, "no t column; pass a fixed time step to synthesize times");

    std::size_t first_state = col;
    int d = 0;
    while (col < header.size() && header[col] == "x_" + std::to_string(d + 1)) {
        ++d;
        ++col;
    }
    if (d == 0) throw ParseError(path, 1, "no state columns x_1,... found");
    bool has_diverged = col < header.size() && header[col] == "diverged";
    if (has_diverged) ++col;
    if (col != header.size()) throw ParseError(path, 1, "unexpected column '" + header[col] + "'");
    const std::size_t ncols = header.size();

    struct Row {
        double t;
        Eigen::VectorXd x;
        long line;
    };
    std::map<int, std::vector<Row>> rows;
    LoadedCsv out;
    out.has_diverged_column = has_diverged;

    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != ncols)
            throw ParseError(path, lineno,
                             "expected " + std::to_string(ncols) + " fields, got " +
                                 std::to_string(fields.size()));
        double sid_raw = parse_double(path, lineno, trim(fields[0]));
        int sid = static_cast<int>(sid_raw);
        if (sid != sid_raw) throw ParseError(path, lineno, "series_id must be an integer");

        Row r;
        r.line = lineno;
        r.t = has_time ? parse_double(path, lineno, trim(fields[1])) : 0.0;
        r.x.resize(d);
        for (int j = 0; j < d; ++j)
            r.x(j) = parse_double(path, lineno, trim(fields[first_state + j]));
        if (!r.x.allFinite() || (has_time && !std::isfinite(r.t)))
            throw ParseError(path, lineno, "non-finite value");
        if (has_diverged) {
            std::string f = trim(fields[ncols - 1]);
            if (f != "0" && f != "1") throw ParseError(path, lineno, "diverged must be 0 or 1");
            bool flag = f == "1";
            auto [it, inserted] = out.diverged.emplace(sid, flag);
            if (!inserted && it->second != flag)
                throw ParseError(path, lineno, "diverged flag differs within one series");
        }
        rows[sid].push_back(std::move(r));
    }
    if (rows.empty()) throw ParseError(path, lineno, "file has no data rows");

    for (auto& [sid, rs] : rows) {
        if (!has_time)
            for (std::size_t i = 0; i < rs.size(); ++i) rs[i].t = *fixed_dt * i;
        std::stable_sort(rs.begin(), rs.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
        for (std::size_t i = 1; i < rs.size(); ++i)
            if (rs[i].t == rs[i - 1].t)
                throw ParseError(path, rs[i].line,
                                 "duplicate time in series " + std::to_string(sid));
        SnapshotSeries s;
        s.series_id = sid;
        s.times.resize(rs.size());
        s.states.resize(rs.size(), d);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            s.times[i] = rs[i].t;
            s.states.row(i) = rs[i].x;
        }
        s.validate();
        out.series.push_back(std::move(s));
    }
    return out;
}

namespace {

void write_series(std::ofstream& outf, const std::vector<SnapshotSeries>& series,
                  const std::map<int, bool>* diverged) {
    require(!series.empty(), "cannot save an empty series list");
    int d = series.front().dimension();
    outf << "series_id,t";
    for (int j = 1; j <= d; ++j) outf << ",x_" << j;
    if (diverged) outf << ",diverged";
    outf << "\n";
    for (const SnapshotSeries& s : series) {
        s.validate();
        require(s.dimension() == d, "series dimensions differ");
        const char* flag = nullptr;
        if (diverged) {
            auto it = diverged->find(s.series_id);
            flag = it != diverged->end() && it->second ? "1" : "0";
        }
        for (int i = 0; i < s.size(); ++i) {
            outf << s.series_id << ',' << format_double(s.times[i]);
            for (int j = 0; j < d; ++j) outf << ',' << format_double(s.states(i, j));
            if (flag) outf << ',' << flag;
            outf << "\n";
        }
    }
}

}  // namespace

void save_series_csv(const std::string& path, const std::vector<SnapshotSeries>& series) {
    std::ofstream outf(path);
    if (!outf) throw std::invalid_argument("cannot open '" + path + "' for writing");
    write_series(outf, series, nullptr);
}

void save_predictions_csv(const std::string& path, const std::vector<SnapshotSeries>& series,
                          const std::map<int, bool>& diverged) {
    std::ofstream outf(path);
    if (!outf) throw std::invalid_argument("cannot open '" + path + "' for writing");
    write_series(outf, series, &diverged);
}

}  // namespace ock
