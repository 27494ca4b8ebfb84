#include "graphreg/radon.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/rng.hpp"
#include "graphreg/vecops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace graphreg {

RadonGeometry RadonGeometry::make(std::size_t image_size, std::size_t n_angles, std::size_t n_detectors,
                                  double domain_extent) {
    RadonGeometry g;
    g.image_size = image_size;
    g.n_angles = n_angles;
    g.n_detectors = n_detectors != 0
                        ? n_detectors
                        : static_cast<std::size_t>(std::ceil(2.0 * std::numbers::sqrt2 * static_cast<double>(image_size)));
    g.domain_extent = domain_extent;
    g.angles.resize(n_angles);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_angles);
    for (std::size_t i = 0; i < n_angles; ++i) {
        g.angles[i] = (static_cast<double>(i) + 0.5) * step;
    }
    g.validate();
    return g;
}

double RadonGeometry::pixel_size() const noexcept { return domain_extent / static_cast<double>(image_size); }

double RadonGeometry::detector_spacing() const noexcept {
    return std::numbers::sqrt2 * domain_extent / static_cast<double>(n_detectors);
}

double RadonGeometry::detector_offset(std::size_t j) const noexcept {
    return -0.5 * std::numbers::sqrt2 * domain_extent + (static_cast<double>(j) + 0.5) * detector_spacing();
}

void RadonGeometry::validate() const {
    if (image_size == 0 || n_angles == 0 || n_detectors == 0) {
        throw ConfigError("radon geometry: sizes must be positive");
    }
    if (image_size > kMaxRadonImageSize) {
        throw ConfigError("radon geometry: image size " + std::to_string(image_size) + " exceeds limit " +
                          std::to_string(kMaxRadonImageSize));
    }
    if (!(domain_extent > 0.0) || !std::isfinite(domain_extent)) {
        throw ConfigError("radon geometry: domain extent must be positive");
    }
    if (angles.size() != n_angles) {
        throw ConfigError("radon geometry: angle count mismatch");
    }
    for (std::size_t i = 1; i < angles.size(); ++i) {
        if (!(angles[i] > angles[i - 1])) {
            throw ConfigError("radon geometry: angles must be strictly increasing");
        }
    }
}

std::vector<std::pair<std::uint32_t, double>> trace_ray(const RadonGeometry& geo, double angle, double offset) {
    const auto n = static_cast<long>(geo.image_size);
    const double half = 0.5 * geo.domain_extent;
    const double h = geo.pixel_size();
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    // p(t) = offset * (c, s) + t * (-s, c)
    const double px = offset * c;
    const double py = offset * s;
    const double dx = -s;
    const double dy = c;
    constexpr double kParallel = 1e-12;

    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    auto clip = [&](double p, double d) {
        if (std::abs(d) < kParallel) {
            return p >= -half && p <= half;
        }
        double a = (-half - p) / d;
        double b = (half - p) / d;
        if (a > b) {
            std::swap(a, b);
        }
        t_lo = std::max(t_lo, a);
        t_hi = std::min(t_hi, b);
        return true;
    };
    if (!clip(px, dx) || !clip(py, dy) || !(t_hi > t_lo)) {
        return {};
    }

    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(2 * n + 2));
    ts.push_back(t_lo);
    ts.push_back(t_hi);
    auto crossings = [&](double p, double d) {
        if (std::abs(d) < kParallel) {
            return;
        }
        for (long k = 0; k <= n; ++k) {
            const double t = (-half + static_cast<double>(k) * h - p) / d;
            if (t > t_lo && t < t_hi) {
                ts.push_back(t);
            }
        }
    };
    crossings(px, dx);
    crossings(py, dy);
    std::sort(ts.begin(), ts.end());

    std::vector<std::pair<std::uint32_t, double>> out;
    out.reserve(ts.size());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double len = ts[k + 1] - ts[k];
        if (!(len > 0.0)) {
            continue;
        }
        const double tm = 0.5 * (ts[k] + ts[k + 1]);
        const double x = px + tm * dx;
        const double y = py + tm * dy;
        const long col = std::clamp(static_cast<long>(std::floor((x + half) / h)), 0L, n - 1);
        const long row = std::clamp(static_cast<long>(std::floor((half - y) / h)), 0L, n - 1);
        out.emplace_back(static_cast<std::uint32_t>(row * n + col), len);
    }
    return out;
}

RadonOperator build_radon(const RadonGeometry& geometry) {
    geometry.validate();
    const std::size_t n_pix = geometry.image_size * geometry.image_size;
    CsrBuilder builder(geometry.n_measurements(), n_pix);
    for (std::size_t a = 0; a < geometry.n_angles; ++a) {
        for (std::size_t d = 0; d < geometry.n_detectors; ++d) {
            for (const auto& [pix, len] : trace_ray(geometry, geometry.angles[a], geometry.detector_offset(d))) {
                builder.add(pix, len);
            }
            builder.finish_row();
        }
    }
    return RadonOperator(geometry, std::move(builder).build());
}

RadonOperator::RadonOperator(RadonGeometry geometry, CsrMatrix matrix, double scale)
    : geometry_(std::move(geometry)), forward_(std::move(matrix)), adjoint_(forward_.transposed()), scale_(scale) {
    if (forward_.n_cols != geometry_.image_size * geometry_.image_size ||
        forward_.n_rows != geometry_.n_measurements()) {
        throw DimensionError("RadonOperator: matrix shape does not match geometry");
    }
}

RadonOperator RadonOperator::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw ConfigError("RadonOperator::scaled: factor must be positive");
    }
    CsrMatrix m = forward_;
    vec::scale(factor, m.values);
    return RadonOperator(geometry_, std::move(m), scale_ * factor);
}

void RadonOperator::forward(std::span<const double> u, std::span<double> out) const {
    if (u.size() != forward_.n_cols || out.size() != forward_.n_rows) {
        throw DimensionError("radon forward: dimension mismatch");
    }
    forward_.multiply(u, out);
}

void RadonOperator::adjoint(std::span<const double> w, std::span<double> out) const {
    if (w.size() != forward_.n_rows || out.size() != forward_.n_cols) {
        throw DimensionError("radon adjoint: dimension mismatch");
    }
    adjoint_.multiply(w, out);
}

Image RadonOperator::blank_image() const { return Image(geometry_.image_size, geometry_.image_size); }

Sinogram RadonOperator::blank_sinogram() const { return Sinogram(geometry_.n_angles, geometry_.n_detectors); }

Sinogram RadonOperator::forward(const Image& u) const {
    if (u.width != geometry_.image_size || u.height != geometry_.image_size) {
        throw DimensionError("radon forward: image shape mismatch");
    }
    Sinogram out = blank_sinogram();
    forward(u.values, out.values);
    return out;
}

Image RadonOperator::adjoint(const Sinogram& w) const {
    if (w.n_rows != geometry_.n_angles || w.n_cols != geometry_.n_detectors) {
        throw DimensionError("radon adjoint: sinogram shape mismatch");
    }
    Image out = blank_image();
    adjoint(w.values, out.values);
    return out;
}

Sinogram radon_forward(const RadonOperator& op, const Image& u) { return op.forward(u); }

Image radon_adjoint(const RadonOperator& op, const Sinogram& w) { return op.adjoint(w); }

double estimate_operator_norm(const RadonOperator& op, int iterations, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(op.image_pixels());
    for (double& v : x) {
        v = rng.normal();
    }
    std::vector<double> y(op.n_measurements());
    double sigma_sq = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double nx = vec::norm(x);
        if (nx == 0.0) {
            return 0.0;
        }
        vec::scale(1.0 / nx, x);
        op.forward(x, y);
        op.adjoint(y, x);
        sigma_sq = vec::norm(x);
    }
    return std::sqrt(sigma_sq);
}

}  // namespace graphreg
