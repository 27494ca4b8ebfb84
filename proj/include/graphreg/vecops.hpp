#pragma once

// Dense vector kernels on flat arrays. All norms are Euclidean.

#include <span>

namespace graphreg::vec {

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm(std::span<const double> a);
[[nodiscard]] double norm_sq(std::span<const double> a);
[[nodiscard]] double distance(std::span<const double> a, std::span<const double> b);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
[[nodiscard]] bool all_finite(std::span<const double> a);

}  // namespace graphreg::vec
