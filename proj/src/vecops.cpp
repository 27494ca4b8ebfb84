#include "graphreg/vecops.hpp"

#include "graphreg/errors.hpp"

#include <cmath>

namespace graphreg::vec {

namespace {
void check_len(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("vector length mismatch");
    }
}
}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    check_len(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm_sq(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) {
        s += x * x;
    }
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

double distance(std::span<const double> a, std::span<const double> b) {
    check_len(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    check_len(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += a * x[i];
    }
}

void scale(double a, std::span<double> x) {
    for (double& v : x) {
        v *= a;
    }
}

bool all_finite(std::span<const double> a) {
    for (double x : a) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

}  // namespace graphreg::vec
