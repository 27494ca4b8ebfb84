#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graphreg {

/// Grayscale image stored row-major: pixel (row, col) lives at
/// values[row * width + col]. Phantoms and reported reconstructions are
/// in [0,1]; intermediate iterates are unconstrained.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    Image() = default;
    Image(std::size_t w, std::size_t h, double fill = 0.0);
    Image(std::size_t w, std::size_t h, std::vector<double> v);

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double& at(std::size_t row, std::size_t col) { return values[row * width + col]; }
    [[nodiscard]] double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }
    [[nodiscard]] std::span<const double> view() const noexcept { return values; }
    [[nodiscard]] std::span<double> view() noexcept { return values; }

    friend bool operator==(const Image&, const Image&) = default;
};

/// Measurement-space array: one row per projection angle, one column per
/// detector element. Phase-retrieval intensities use the same layout.
struct Sinogram {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;

    Sinogram() = default;
    Sinogram(std::size_t rows, std::size_t cols, double fill = 0.0);
    Sinogram(std::size_t rows, std::size_t cols, std::vector<double> v);

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] std::span<const double> view() const noexcept { return values; }
    [[nodiscard]] std::span<double> view() noexcept { return values; }

    friend bool operator==(const Sinogram&, const Sinogram&) = default;
};

[[nodiscard]] bool same_shape(const Image& a, const Image& b) noexcept;
[[nodiscard]] bool same_shape(const Sinogram& a, const Sinogram& b) noexcept;

}  // namespace graphreg
