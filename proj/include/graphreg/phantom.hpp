#pragma once

#include "graphreg/types.hpp"

#include <array>
#include <cstdint>

namespace graphreg {

/// One ellipse of an analytic phantom, in normalized coordinates
/// [-1, 1]^2 with y pointing up. `angle_deg` rotates counter-clockwise.
struct Ellipse {
    double intensity;
    double semi_x;
    double semi_y;
    double center_x;
    double center_y;
    double angle_deg;

    [[nodiscard]] bool contains(double x, double y) const noexcept;
};

/// The ten ellipses of the modified (high-contrast) Shepp-Logan phantom.
[[nodiscard]] const std::array<Ellipse, 10>& shepp_logan_ellipses() noexcept;

/// Shepp-Logan phantom sampled at pixel centres on an n x n grid, values
/// clamped to [0, 1]. Requires n >= 16.
[[nodiscard]] Image phantom_shepp_logan(std::size_t n);

/// Random binary blob image: seeded random points, Gaussian smoothing with
/// sigma = n * blob_size / 4, then a threshold at the (1 - density)
/// quantile so that roughly `density` of the pixels are 1.
[[nodiscard]] Image phantom_binary_blobs(std::size_t n, std::uint64_t seed, double density = 0.5,
                                         double blob_size = 0.1);

}  // namespace graphreg
