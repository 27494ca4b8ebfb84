#pragma once

#include "graphreg/rng.hpp"
#include "graphreg/types.hpp"

#include <cstdint>

namespace graphreg::testing {

inline Image random_image(std::size_t w, std::size_t h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    Rng rng(seed);
    Image img(w, h);
    for (double& x : img.values) x = lo + (hi - lo) * rng.uniform();
    return img;
}

inline Sinogram random_sinogram(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Sinogram s(rows, cols);
    for (double& x : s.values) x = rng.normal();
    return s;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

}  // namespace graphreg::testing
