#include "graphreg/measurement.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/rng.hpp"
#include "graphreg/vecops.hpp"

#include <cmath>

namespace graphreg {

Sinogram empirical_mean(std::span<const Sinogram> samples) {
    if (samples.empty()) {
        throw DimensionError("empirical_mean: no samples");
    }
    // Accumulate deviations from the first sample so that identical samples
    // reproduce it exactly.
    const Sinogram& ref = samples.front();
    std::vector<double> acc(ref.size(), 0.0);
    for (const auto& s : samples) {
        if (!same_shape(s, ref)) {
            throw DimensionError("empirical_mean: sample shape mismatch");
        }
        for (std::size_t j = 0; j < s.size(); ++j) {
            acc[j] += s.values[j] - ref.values[j];
        }
    }
    const double inv_m = 1.0 / static_cast<double>(samples.size());
    Sinogram mean = ref;
    vec::axpy(inv_m, acc, mean.view());
    return mean;
}

double empirical_spread(std::span<const Sinogram> samples, const Sinogram& mean) {
    if (samples.empty()) {
        throw DimensionError("empirical_spread: no samples");
    }
    double total = 0.0;
    for (const auto& s : samples) {
        if (!same_shape(s, mean)) {
            throw DimensionError("empirical_spread: sample shape mismatch");
        }
        const double d = vec::distance(s.values, mean.values);
        total += d * d;
    }
    if (samples.size() == 1) {
        return 0.0;
    }
    return std::sqrt(total / static_cast<double>(samples.size() - 1));
}

MeasurementEnsemble::MeasurementEnsemble(std::vector<Sinogram> samples)
    : samples_(std::move(samples)), mean_(empirical_mean(samples_)), z_m_(empirical_spread(samples_, mean_)) {}

Sinogram noisy_sample(const Sinogram& v, std::size_t i, const NoiseSpec& noise) {
    if (!(noise.epsilon >= 0.0)) {
        throw ConfigError("noise epsilon must be nonnegative");
    }
    Sinogram out = v;
    if (v.size() == 0) {
        return out;
    }
    Rng rng(noise.seed, i);
    const double eps = noise.epsilon * rng.normal();
    std::vector<double> xi(v.size());
    double xi_norm = 0.0;
    while (xi_norm == 0.0) {
        for (double& x : xi) {
            x = rng.normal();
        }
        xi_norm = vec::norm(xi);
    }
    vec::axpy(eps / xi_norm, xi, out.view());
    return out;
}

MeasurementEnsemble generate_measurements(const Sinogram& v, std::size_t m, const NoiseSpec& noise) {
    if (m == 0) {
        throw ConfigError("generate_measurements: m must be at least 1");
    }
    std::vector<Sinogram> samples;
    samples.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        samples.push_back(noisy_sample(v, i, noise));
    }
    return MeasurementEnsemble(std::move(samples));
}

}  // namespace graphreg
