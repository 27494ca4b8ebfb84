#include "graphreg/types.hpp"

#include "graphreg/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace graphreg {

Image::Image(std::size_t w, std::size_t h, double fill) : width(w), height(h), values(w * h, fill) {}

Image::Image(std::size_t w, std::size_t h, std::vector<double> v)
    : width(w), height(h), values(std::move(v)) {
    if (values.size() != width * height) {
        throw DimensionError("image: " + std::to_string(values.size()) + " values for " +
                             std::to_string(width) + "x" + std::to_string(height));
    }
}

Sinogram::Sinogram(std::size_t rows, std::size_t cols, double fill)
    : n_rows(rows), n_cols(cols), values(rows * cols, fill) {}

Sinogram::Sinogram(std::size_t rows, std::size_t cols, std::vector<double> v)
    : n_rows(rows), n_cols(cols), values(std::move(v)) {
    if (values.size() != n_rows * n_cols) {
        throw DimensionError("sinogram: " + std::to_string(values.size()) + " values for " +
                             std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
}

bool same_shape(const Image& a, const Image& b) noexcept {
    return a.width == b.width && a.height == b.height && a.values.size() == b.values.size();
}

bool same_shape(const Sinogram& a, const Sinogram& b) noexcept {
    return a.n_rows == b.n_rows && a.n_cols == b.n_cols && a.values.size() == b.values.size();
}

}  // namespace graphreg
