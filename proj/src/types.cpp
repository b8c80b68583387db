#include "ock/types.hpp"

namespace ock {

void Segment::validate() const {
    require(std::isfinite(t_start) && std::isfinite(t_end), "segment times must be finite");
    require(t_end > t_start, "segment requires t_end > t_start");
    require(x_start.size() > 0, "segment state must be non-empty");
    require(x_start.size() == x_end.size(), "segment endpoint dimensions differ");
    require(x_start.allFinite() && x_end.allFinite(), "segment states must be finite");
}

void SnapshotSeries::validate() const {
    require(!times.empty(), "series has no snapshots");
    require(static_cast<int>(times.size()) == states.rows(),
            "series times/states row count mismatch");
    require(states.cols() > 0, "series state dimension must be positive");
    require(states.allFinite(), "series states must be finite");
    for (std::size_t i = 0; i < times.size(); ++i) {
        require(std::isfinite(times[i]), "series times must be finite");
        if (i > 0) require(times[i] > times[i - 1], "series times must be strictly increasing");
    }
}

KernelSpec KernelSpec::gaussian(double lengthscale) {
    KernelSpec s;
    s.kind = KernelKind::Gaussian;
    s.lengthscale = lengthscale;
    s.validate();
    return s;
}

KernelSpec KernelSpec::random_fourier(double lengthscale, int feature_count, std::uint64_t seed) {
    KernelSpec s;
    s.kind = KernelKind::RandomFourier;
    s.lengthscale = lengthscale;
    s.feature_count = feature_count;
    s.seed = seed;
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    require(std::isfinite(lengthscale) && lengthscale > 0.0, "kernel lengthscale must be positive");
    if (kind == KernelKind::RandomFourier)
        require(feature_count > 0, "random Fourier kernel needs feature_count > 0");
}

}  // namespace ock
