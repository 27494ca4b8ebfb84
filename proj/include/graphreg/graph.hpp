#pragma once

#include "graphreg/sparse.hpp"
#include "graphreg/types.hpp"

#include <span>
#include <vector>

namespace graphreg {

/// Pixel-graph construction parameters: neighbourhood radius R (Chebyshev
/// distance, so each window is (2R+1)^2 pixels) and Gaussian kernel width.
struct GraphParams {
    int radius = 6;
    double lambda = 0.05;

    void validate() const;
    /// Maximum node degree (2R+1)^2 - 1.
    [[nodiscard]] std::size_t max_degree() const noexcept;
};

/// Symmetric nonnegative edge weights W with zero diagonal and the
/// per-node degrees d_a = sum_b W_ab. Immutable once built.
struct WeightGraph {
    std::size_t n = 0;
    CsrMatrix weights;
    std::vector<double> degrees;
};

/// W_ab = exp(-|u(a) - u(b)|^2 / lambda) for 0 < max(|di|, |dj|) <= R.
/// The kernel sees raw iterate values; no clamping.
[[nodiscard]] WeightGraph build_graph(const Image& u, const GraphParams& params);

/// (D - W) x
[[nodiscard]] std::vector<double> laplacian_apply(const WeightGraph& graph, std::span<const double> x);
void laplacian_apply(const WeightGraph& graph, std::span<const double> x, std::span<double> out);

/// Lipschitz constant sqrt(2 / (lambda e)) of s -> exp(-s^2 / lambda).
[[nodiscard]] double kernel_lipschitz(double lambda);

}  // namespace graphreg
