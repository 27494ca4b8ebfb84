#pragma once

#include "graphreg/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace graphreg {

/// Additive noise model for repeated measurements:
/// v_i = v + eps_i * xi / |xi|, eps_i ~ N(0, epsilon^2), xi standard normal.
struct NoiseSpec {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

/// Component-wise arithmetic mean of equally shaped sinograms.
[[nodiscard]] Sinogram empirical_mean(std::span<const Sinogram> samples);

/// z_m = sqrt( sum_i |v_i - mean|^2 / (m - 1) ); zero for a single sample.
[[nodiscard]] double empirical_spread(std::span<const Sinogram> samples, const Sinogram& mean);

/// m i.i.d. noisy copies of one sinogram plus their cached mean and spread.
/// Immutable after construction.
class MeasurementEnsemble {
public:
    explicit MeasurementEnsemble(std::vector<Sinogram> samples);

    [[nodiscard]] const std::vector<Sinogram>& samples() const noexcept { return samples_; }
    [[nodiscard]] const Sinogram& mean() const noexcept { return mean_; }
    [[nodiscard]] double z_m() const noexcept { return z_m_; }
    [[nodiscard]] std::size_t m() const noexcept { return samples_.size(); }

private:
    std::vector<Sinogram> samples_;
    Sinogram mean_;
    double z_m_ = 0.0;
};

/// Draws m noisy samples of `v`. Sample i uses its own random stream
/// derived from (noise.seed, i), so the result does not depend on the
/// order in which samples are produced.
[[nodiscard]] MeasurementEnsemble generate_measurements(const Sinogram& v, std::size_t m,
                                                        const NoiseSpec& noise);

/// The single noisy sample with index `i`; generate_measurements is the
/// concatenation of these for i = 0..m-1.
[[nodiscard]] Sinogram noisy_sample(const Sinogram& v, std::size_t i, const NoiseSpec& noise);

}  // namespace graphreg
