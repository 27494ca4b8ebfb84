#include "graphreg/phantom.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace graphreg {

bool Ellipse::contains(double x, double y) const noexcept {
    const double phi = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double dx = x - center_x;
    const double dy = y - center_y;
    const double xr = dx * c + dy * s;
    const double yr = -dx * s + dy * c;
    return (xr * xr) / (semi_x * semi_x) + (yr * yr) / (semi_y * semi_y) <= 1.0;
}

const std::array<Ellipse, 10>& shepp_logan_ellipses() noexcept {
    static const std::array<Ellipse, 10> kEllipses{{
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
        {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
        {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
        {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
        {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
        {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
        {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
    }};
    return kEllipses;
}

Image phantom_shepp_logan(std::size_t n) {
    if (n < 16) {
        throw ConfigError("shepp-logan phantom needs n >= 16");
    }
    Image img(n, n);
    const double step = 2.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double y = 1.0 - (static_cast<double>(r) + 0.5) * step;
        for (std::size_t c = 0; c < n; ++c) {
            const double x = -1.0 + (static_cast<double>(c) + 0.5) * step;
            double v = 0.0;
            for (const auto& e : shepp_logan_ellipses()) {
                if (e.contains(x, y)) {
                    v += e.intensity;
                }
            }
            img.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return img;
}

namespace {

// Separable Gaussian blur with edge replication, kernel truncated at 4 sigma.
std::vector<double> gaussian_blur(const std::vector<double>& in, std::size_t n, double sigma) {
    const long radius = static_cast<long>(4.0 * sigma + 0.5);
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (long k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        total += w;
    }
    for (double& w : kernel) {
        w /= total;
    }
    const long ln = static_cast<long>(n);
    auto idx = [&](long i) { return static_cast<std::size_t>(std::clamp(i, 0L, ln - 1)); };
    std::vector<double> tmp(in.size());
    std::vector<double> out(in.size());
    for (long r = 0; r < ln; ++r) {
        for (long c = 0; c < ln; ++c) {
            double s = 0.0;
            for (long k = -radius; k <= radius; ++k) {
                s += kernel[static_cast<std::size_t>(k + radius)] * in[static_cast<std::size_t>(r) * n + idx(c + k)];
            }
            tmp[static_cast<std::size_t>(r) * n + static_cast<std::size_t>(c)] = s;
        }
    }
    for (long r = 0; r < ln; ++r) {
        for (long c = 0; c < ln; ++c) {
            double s = 0.0;
            for (long k = -radius; k <= radius; ++k) {
                s += kernel[static_cast<std::size_t>(k + radius)] * tmp[idx(r + k) * n + static_cast<std::size_t>(c)];
            }
            out[static_cast<std::size_t>(r) * n + static_cast<std::size_t>(c)] = s;
        }
    }
    return out;
}

}  // namespace

Image phantom_binary_blobs(std::size_t n, std::uint64_t seed, double density, double blob_size) {
    if (n < 16) {
        throw ConfigError("binary blobs phantom needs n >= 16");
    }
    if (!(density > 0.0 && density < 1.0)) {
        throw ConfigError("blob density must lie in (0, 1)");
    }
    if (!(blob_size > 0.0 && blob_size <= 1.0)) {
        throw ConfigError("blob size must lie in (0, 1]");
    }
    const auto per_axis = static_cast<std::size_t>(1.0 / blob_size);
    const std::size_t n_points = std::max<std::size_t>(per_axis * per_axis, 1);
    std::vector<double> mask(n * n, 0.0);
    Rng rng(seed);
    const double len = static_cast<double>(n);
    for (std::size_t p = 0; p < n_points; ++p) {
        const auto r = static_cast<std::size_t>(len * rng.uniform());
        const auto c = static_cast<std::size_t>(len * rng.uniform());
        mask[r * n + c] = 1.0;
    }
    const std::vector<double> smooth = gaussian_blur(mask, n, 0.25 * len * blob_size);

    // Linear-interpolated quantile at (1 - density).
    std::vector<double> sorted = smooth;
    std::sort(sorted.begin(), sorted.end());
    const double pos = (1.0 - density) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double threshold = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);

    Image img(n, n);
    for (std::size_t i = 0; i < smooth.size(); ++i) {
        img.values[i] = smooth[i] >= threshold ? 1.0 : 0.0;
    }
    return img;
}

}  // namespace graphreg
