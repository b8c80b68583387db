#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace ock {

// Thrown when a linear solve or downstream numeric step produces garbage
// (non-finite entries, residual above tolerance). Distinct from
// std::invalid_argument so callers can map the two to different exit codes.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, long line, const std::string& msg)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + msg),
          line_number(line) {}
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), line_number(-1) {}
    long line_number;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// One observed flow segment: the state at two consecutive snapshot times.
// Everything the learner consumes is a list of these.
struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    Eigen::VectorXd x_start;
    Eigen::VectorXd x_end;
    int series_id = 0;
    int index_in_series = 0;

    double duration() const { return t_end - t_start; }
    void validate() const;
};

// A single trajectory sampled at increasing times. states has one row per time.
struct SnapshotSeries {
    int series_id = 0;
    std::vector<double> times;
    Eigen::MatrixXd states;

    int dimension() const { return static_cast<int>(states.cols()); }
    int size() const { return static_cast<int>(times.size()); }
    void validate() const;
};

enum class KernelKind { Gaussian, RandomFourier };

// Kernel selector shared by the exact and feature-approximated fit paths.
// feature_count and seed are only meaningful for RandomFourier.
struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
    double lengthscale = 1.0;
    int feature_count = 0;
    std::uint64_t seed = 0;

    static KernelSpec gaussian(double lengthscale);
    static KernelSpec random_fourier(double lengthscale, int feature_count, std::uint64_t seed);
    void validate() const;
};

}  // namespace ock
