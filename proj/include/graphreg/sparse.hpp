#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace graphreg {

/// Compressed-sparse-row matrix with column indices sorted within each row.
struct CsrMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> col_idx;
    std::vector<double> values;

    [[nodiscard]] std::size_t nnz() const noexcept { return values.size(); }

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// Exact transpose; entries are copied bit-for-bit.
    [[nodiscard]] CsrMatrix transposed() const;
};

/// Incremental row-by-row builder. Rows must be appended in order; entries
/// within a row may arrive unsorted and duplicates are summed.
class CsrBuilder {
public:
    CsrBuilder(std::size_t n_rows, std::size_t n_cols);
    void add(std::uint32_t col, double value);
    void finish_row();
    [[nodiscard]] CsrMatrix build() &&;

private:
    CsrMatrix m_;
    std::vector<std::pair<std::uint32_t, double>> row_;
};

}  // namespace graphreg
