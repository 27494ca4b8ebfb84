#include "graphreg/graph.hpp"

#include "graphreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace graphreg {

void GraphParams::validate() const {
    if (radius < 1) {
        throw ConfigError("graph radius must be >= 1");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("graph lambda must be positive");
    }
}

std::size_t GraphParams::max_degree() const noexcept {
    const auto side = static_cast<std::size_t>(2 * radius + 1);
    return side * side - 1;
}

WeightGraph build_graph(const Image& u, const GraphParams& params) {
    params.validate();
    const auto w = static_cast<long>(u.width);
    const auto h = static_cast<long>(u.height);
    const long r = params.radius;
    const double inv_lambda = 1.0 / params.lambda;

    WeightGraph g;
    g.n = u.size();
    g.degrees.assign(g.n, 0.0);
    CsrMatrix& m = g.weights;
    m.n_rows = g.n;
    m.n_cols = g.n;
    m.row_ptr.assign(1, 0);
    m.row_ptr.reserve(g.n + 1);
    const std::size_t window = std::min<std::size_t>(params.max_degree(), g.n);
    m.col_idx.reserve(g.n * window);
    m.values.reserve(g.n * window);

    // Row-major traversal of the window emits sorted column indices.
    for (long i = 0; i < h; ++i) {
        const long i0 = std::max(0L, i - r);
        const long i1 = std::min(h - 1, i + r);
        for (long j = 0; j < w; ++j) {
            const long j0 = std::max(0L, j - r);
            const long j1 = std::min(w - 1, j + r);
            const std::size_t a = static_cast<std::size_t>(i * w + j);
            const double ua = u.values[a];
            double deg = 0.0;
            for (long ii = i0; ii <= i1; ++ii) {
                for (long jj = j0; jj <= j1; ++jj) {
                    if (ii == i && jj == j) {
                        continue;
                    }
                    const std::size_t b = static_cast<std::size_t>(ii * w + jj);
                    const double d = ua - u.values[b];
                    const double wab = std::exp(-d * d * inv_lambda);
                    m.col_idx.push_back(static_cast<std::uint32_t>(b));
                    m.values.push_back(wab);
                    deg += wab;
                }
            }
            g.degrees[a] = deg;
            m.row_ptr.push_back(m.values.size());
        }
    }
    return g;
}

void laplacian_apply(const WeightGraph& graph, std::span<const double> x, std::span<double> out) {
    if (x.size() != graph.n || out.size() != graph.n) {
        throw DimensionError("laplacian_apply: dimension mismatch");
    }
    const CsrMatrix& m = graph.weights;
    for (std::size_t a = 0; a < graph.n; ++a) {
        double s = 0.0;
        const double xa = x[a];
        for (std::size_t k = m.row_ptr[a]; k < m.row_ptr[a + 1]; ++k) {
            s += m.values[k] * (xa - x[m.col_idx[k]]);
        }
        out[a] = s;
    }
}

std::vector<double> laplacian_apply(const WeightGraph& graph, std::span<const double> x) {
    std::vector<double> out(graph.n);
    laplacian_apply(graph, x, out);
    return out;
}

double kernel_lipschitz(double lambda) { return std::sqrt(2.0 / (lambda * std::numbers::e)); }

}  // namespace graphreg
