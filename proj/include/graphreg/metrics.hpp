#pragma once

#include "graphreg/types.hpp"

namespace graphreg {

struct MetricReport {
    double rre = 0.0;
    /// 20 log10(1 / |u_true - u|) with the full Euclidean norm.
    double psnr = 0.0;
    /// Conventional 20 log10(1 / RMSE) for peak value 1.
    double psnr_rmse = 0.0;
    double ssim = 0.0;
};

/// |estimate - truth| / |truth|. Throws MetricError when truth is zero.
[[nodiscard]] double rre(const Image& estimate, const Image& truth);

/// 20 log10(1 / |truth - estimate|); +infinity for identical images.
[[nodiscard]] double psnr(const Image& estimate, const Image& truth);

/// 20 log10(1 / RMSE); +infinity for identical images.
[[nodiscard]] double psnr_rmse(const Image& estimate, const Image& truth);

/// Mean SSIM over all fully contained 11 x 11 Gaussian windows (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, dynamic range 1. Throws MetricError for images
/// smaller than the window.
[[nodiscard]] double ssim(const Image& estimate, const Image& truth);

[[nodiscard]] MetricReport evaluate(const Image& estimate, const Image& truth);

}  // namespace graphreg
