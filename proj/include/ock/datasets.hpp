#pragma once

#include "ock/types.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>

namespace ock {

enum class SystemKind { FitzHughNagumo, Lorenz63, Lorenz96 };

std::string system_name(SystemKind kind);
SystemKind system_from_name(const std::string& name);

// Synthetic trajectory generation settings. params carries the system
// constants; factory functions fill the standard values. Noise is observation
// noise only: trajectories are integrated clean, then each stored coordinate
// gets an independent N(0, noise_std^2) draw.
struct GeneratorConfig {
    SystemKind system = SystemKind::FitzHughNagumo;
    int dimension = 2;  // used by Lorenz96, fixed for the other systems
    std::map<std::string, double> params;
    int n_trajectories = 10;
    int n_snapshots = 51;
    double t_start = 0.0;
    double t_end = 2.0;
    double noise_std = 0.0;
    std::vector<std::array<double, 2>> init_box;  // per-coordinate [lo, hi]
    std::uint64_t seed = 0;
    int substeps = 20;  // internal RK4 substeps per snapshot interval

    static GeneratorConfig fhn();
    static GeneratorConfig lorenz63();
    static GeneratorConfig lorenz96(int dimension);
    void validate() const;
};

// v' = v - v^3/3 - w + RI; w' = (v + a - b w) / tau
std::vector<SnapshotSeries> gen_fhn(const GeneratorConfig& cfg);
// x' = sigma (y - x); y' = x (rho - z) - y; z' = x y - beta z
std::vector<SnapshotSeries> gen_lorenz63(const GeneratorConfig& cfg);
// x_k' = (x_{k+1} - x_{k-2}) x_{k-1} - x_k + F, indices cyclic, dimension >= 4
std::vector<SnapshotSeries> gen_lorenz96(const GeneratorConfig& cfg);

std::vector<SnapshotSeries> generate(const GeneratorConfig& cfg);

// Shuffles whole series with a seeded Fisher-Yates pass, then cuts by
// fractions (must sum to 1; each positive part receives at least one series).
struct SplitResult {
    std::vector<SnapshotSeries> train, validation, test;
};
SplitResult split_series(const std::vector<SnapshotSeries>& series,
                         const std::array<double, 3>& fractions, std::uint64_t seed);

// CSV layout: header series_id,t,x_1,...,x_d. Predictions add a trailing
// diverged column (0/1, constant within a series). Values use %.17g.
struct LoadedCsv {
    std::vector<SnapshotSeries> series;
    std::map<int, bool> diverged;  // only if the file has a diverged column
    bool has_diverged_column = false;
};

// fixed_dt synthesizes times 0, dt, 2dt, ... for files without a t column;
// a file that has neither a t column nor fixed_dt is a parse error.
LoadedCsv load_series_csv(const std::string& path,
                          std::optional<double> fixed_dt = std::nullopt);
void save_series_csv(const std::string& path, const std::vector<SnapshotSeries>& series);
void save_predictions_csv(const std::string& path, const std::vector<SnapshotSeries>& series,
                          const std::map<int, bool>& diverged);

}  // namespace ock
