#pragma once

#include "graphreg/sparse.hpp"
#include "graphreg/types.hpp"

#include <cstddef>
#include <vector>

namespace graphreg {

/// Parallel-beam acquisition geometry.
///
/// The N x N image covers the square [-E/2, E/2]^2 with E = domain_extent,
/// so pixels have side E / N. Pixel (row, col) spans
/// x in [-E/2 + col*h, -E/2 + (col+1)*h] and y in [E/2 - (row+1)*h, E/2 - row*h].
/// The detector line has length sqrt(2) * E centred on the origin and is
/// split into n_detectors equal cells; rays pass through cell centres.
/// Angles sit at the midpoints of n_angles equal cells of [0, 2*pi).
struct RadonGeometry {
    std::size_t image_size = 0;
    std::size_t n_angles = 0;
    std::size_t n_detectors = 0;
    double domain_extent = 256.0;
    std::vector<double> angles;

    /// Fills in angles and, when n_detectors == 0, ceil(2 * sqrt(2) * N)
    /// detectors (363 for N = 128).
    [[nodiscard]] static RadonGeometry make(std::size_t image_size, std::size_t n_angles,
                                            std::size_t n_detectors = 0, double domain_extent = 256.0);

    [[nodiscard]] double pixel_size() const noexcept;
    [[nodiscard]] double detector_spacing() const noexcept;
    [[nodiscard]] double detector_offset(std::size_t j) const noexcept;
    [[nodiscard]] std::size_t n_measurements() const noexcept { return n_angles * n_detectors; }
    void validate() const;
};

/// Largest image side accepted by build_radon.
inline constexpr std::size_t kMaxRadonImageSize = 512;

/// Discrete Radon transform as an explicit sparse system matrix whose
/// entries are exact ray/pixel intersection lengths. The adjoint applies
/// the bitwise transpose of the same matrix.
class RadonOperator {
public:
    RadonOperator(RadonGeometry geometry, CsrMatrix matrix, double scale = 1.0);

    /// Same operator with every matrix entry multiplied by `factor`.
    [[nodiscard]] RadonOperator scaled(double factor) const;
    /// Factor between matrix entries and physical intersection lengths.
    [[nodiscard]] double scale() const noexcept { return scale_; }

    [[nodiscard]] const RadonGeometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] const CsrMatrix& matrix() const noexcept { return forward_; }
    [[nodiscard]] std::size_t image_pixels() const noexcept { return forward_.n_cols; }
    [[nodiscard]] std::size_t n_measurements() const noexcept { return forward_.n_rows; }

    [[nodiscard]] Sinogram forward(const Image& u) const;
    [[nodiscard]] Image adjoint(const Sinogram& w) const;

    void forward(std::span<const double> u, std::span<double> out) const;
    void adjoint(std::span<const double> w, std::span<double> out) const;

    [[nodiscard]] Image blank_image() const;
    [[nodiscard]] Sinogram blank_sinogram() const;

private:
    RadonGeometry geometry_;
    CsrMatrix forward_;
    CsrMatrix adjoint_;
    double scale_ = 1.0;
};

/// Traces every ray through the pixel grid (Siddon traversal) and records
/// the intersection length with each pixel it crosses.
[[nodiscard]] RadonOperator build_radon(const RadonGeometry& geometry);

/// Intersection lengths of a single ray with the pixel grid, as
/// (pixel index, length) pairs in traversal order.
[[nodiscard]] std::vector<std::pair<std::uint32_t, double>> trace_ray(const RadonGeometry& geometry,
                                                                      double angle, double offset);

[[nodiscard]] Sinogram radon_forward(const RadonOperator& op, const Image& u);
[[nodiscard]] Image radon_adjoint(const RadonOperator& op, const Sinogram& w);

/// Largest singular value estimated by power iteration on A^T A.
[[nodiscard]] double estimate_operator_norm(const RadonOperator& op, int iterations = 50,
                                            std::uint64_t seed = 1);

}  // namespace graphreg
