#include "graphreg/sparse.hpp"

#include "graphreg/errors.hpp"

#include <algorithm>

namespace graphreg {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_cols || y.size() != n_rows) {
        throw DimensionError("CsrMatrix::multiply: dimension mismatch");
    }
    for (std::size_t r = 0; r < n_rows; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            s += values[k] * x[col_idx[k]];
        }
        y[r] = s;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_rows);
    multiply(x, y);
    return y;
}

CsrMatrix CsrMatrix::transposed() const {
    CsrMatrix t;
    t.n_rows = n_cols;
    t.n_cols = n_rows;
    t.row_ptr.assign(n_cols + 1, 0);
    for (auto c : col_idx) {
        ++t.row_ptr[c + 1];
    }
    for (std::size_t i = 0; i < n_cols; ++i) {
        t.row_ptr[i + 1] += t.row_ptr[i];
    }
    t.col_idx.resize(nnz());
    t.values.resize(nnz());
    std::vector<std::size_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    // Walking source rows in increasing order keeps target rows sorted.
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            const std::size_t dst = cursor[col_idx[k]]++;
            t.col_idx[dst] = static_cast<std::uint32_t>(r);
            t.values[dst] = values[k];
        }
    }
    return t;
}

CsrBuilder::CsrBuilder(std::size_t n_rows, std::size_t n_cols) {
    m_.n_rows = n_rows;
    m_.n_cols = n_cols;
    m_.row_ptr.reserve(n_rows + 1);
}

void CsrBuilder::add(std::uint32_t col, double value) {
    if (col >= m_.n_cols) {
        throw DimensionError("CsrBuilder::add: column out of range");
    }
    row_.emplace_back(col, value);
}

void CsrBuilder::finish_row() {
    if (m_.row_ptr.size() > m_.n_rows) {
        throw DimensionError("CsrBuilder: too many rows");
    }
    std::sort(row_.begin(), row_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < row_.size(); ++i) {
        if (!m_.col_idx.empty() && m_.row_ptr.back() < m_.col_idx.size() && m_.col_idx.back() == row_[i].first) {
            m_.values.back() += row_[i].second;
        } else {
            m_.col_idx.push_back(row_[i].first);
            m_.values.push_back(row_[i].second);
        }
    }
    row_.clear();
    m_.row_ptr.push_back(m_.values.size());
}

CsrMatrix CsrBuilder::build() && {
    while (m_.row_ptr.size() < m_.n_rows + 1) {
        finish_row();
    }
    return std::move(m_);
}

}  // namespace graphreg
