#include "graphreg/metrics.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/vecops.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace graphreg {

namespace {

void check_pair(const Image& a, const Image& b) {
    if (!same_shape(a, b)) {
        throw DimensionError("metric: image shapes differ");
    }
    if (a.size() == 0) {
        throw DimensionError("metric: empty image");
    }
}

constexpr int kWin = 11;
constexpr double kSigma = 1.5;

std::array<double, kWin> gaussian_window() {
    std::array<double, kWin> w{};
    double sum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - kWin / 2;
        w[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += w[static_cast<std::size_t>(i)];
    }
    for (double& x : w) x /= sum;
    return w;
}

// Valid-mode separable filtering: output is (h - 10) x (w - 10).
std::vector<double> filter_valid(const std::vector<double>& in, std::size_t w, std::size_t h,
                                 const std::array<double, kWin>& g) {
    const std::size_t ow = w - kWin + 1;
    const std::size_t oh = h - kWin + 1;
    std::vector<double> rows(h * ow);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < ow; ++c) {
            double s = 0.0;
            for (std::size_t t = 0; t < kWin; ++t) s += g[t] * in[r * w + c + t];
            rows[r * ow + c] = s;
        }
    }
    std::vector<double> out(oh * ow);
    for (std::size_t r = 0; r < oh; ++r) {
        for (std::size_t c = 0; c < ow; ++c) {
            double s = 0.0;
            for (std::size_t t = 0; t < kWin; ++t) s += g[t] * rows[(r + t) * ow + c];
            out[r * ow + c] = s;
        }
    }
    return out;
}

}  // namespace

double rre(const Image& estimate, const Image& truth) {
    check_pair(estimate, truth);
    const double nt = vec::norm(truth.values);
    if (nt == 0.0) {
        throw MetricError("rre: reference image is zero");
    }
    return vec::distance(estimate.values, truth.values) / nt;
}

double psnr(const Image& estimate, const Image& truth) {
    check_pair(estimate, truth);
    const double d = vec::distance(estimate.values, truth.values);
    return d == 0.0 ? std::numeric_limits<double>::infinity() : -20.0 * std::log10(d);
}

double psnr_rmse(const Image& estimate, const Image& truth) {
    check_pair(estimate, truth);
    const double d = vec::distance(estimate.values, truth.values) / std::sqrt(static_cast<double>(truth.size()));
    return d == 0.0 ? std::numeric_limits<double>::infinity() : -20.0 * std::log10(d);
}

double ssim(const Image& estimate, const Image& truth) {
    check_pair(estimate, truth);
    if (truth.width < kWin || truth.height < kWin) {
        throw MetricError("ssim: image smaller than the 11x11 window");
    }
    const std::size_t w = truth.width;
    const std::size_t h = truth.height;
    const auto g = gaussian_window();
    const auto& x = estimate.values;
    const auto& y = truth.values;
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h, g);
    const auto my = filter_valid(y, w, h, g);
    const auto sxx = filter_valid(xx, w, h, g);
    const auto syy = filter_valid(yy, w, h, g);
    const auto sxy = filter_valid(xy, w, h, g);

    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    double total = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i];
        const double vy = syy[i] - my[i] * my[i];
        const double cxy = sxy[i] - mx[i] * my[i];
        total += (2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2) /
                 ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mx.size());
}

MetricReport evaluate(const Image& estimate, const Image& truth) {
    return {rre(estimate, truth), psnr(estimate, truth), psnr_rmse(estimate, truth), ssim(estimate, truth)};
}

}  // namespace graphreg
