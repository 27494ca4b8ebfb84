#include "graphreg/stopping.hpp"

#include "graphreg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace graphreg {

std::string_view to_string(StoppingKind kind) noexcept {
    return kind == StoppingKind::Statistical ? "statistical" : "heuristic";
}

StoppingKind parse_stopping_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "statistical") return StoppingKind::Statistical;
    if (lower == "heuristic") return StoppingKind::Heuristic;
    throw ConfigError("unknown stopping rule '" + std::string(text) + "'");
}

StoppingPolicy StoppingPolicy::statistical(double tau_coeff, double tau_exponent) {
    StoppingPolicy p;
    p.kind = StoppingKind::Statistical;
    p.tau_coeff = tau_coeff;
    p.tau_exponent = tau_exponent;
    p.validate();
    return p;
}

StoppingPolicy StoppingPolicy::heuristic(double varrho) {
    StoppingPolicy p;
    p.kind = StoppingKind::Heuristic;
    p.varrho = varrho;
    p.validate();
    return p;
}

void StoppingPolicy::validate() const {
    if (kind == StoppingKind::Statistical) {
        if (!(tau_coeff > 0.0) || !std::isfinite(tau_coeff) || !std::isfinite(tau_exponent)) {
            throw ConfigError("statistical rule: tau_coeff must be positive and tau_exponent finite");
        }
    } else if (!(varrho >= 1.0) || !std::isfinite(varrho)) {
        throw ConfigError("heuristic rule: varrho must be >= 1");
    }
}

double statistical_threshold(const StoppingPolicy& policy, std::size_t m, double z_m) {
    if (m < 2) {
        throw PolicyError("statistical rule needs m >= 2 measurements");
    }
    if (!(z_m >= 0.0)) {
        throw PolicyError("statistical rule: z_m must be nonnegative");
    }
    const double md = static_cast<double>(m);
    const double tau = policy.tau_coeff * std::pow(md, policy.tau_exponent);
    return tau / std::sqrt(md) * z_m;
}

double omega(std::size_t k, double varrho, double residual) noexcept {
    return (static_cast<double>(k) + varrho) * residual * residual;
}

std::size_t heuristic_select(std::span<const double> residuals, double varrho) {
    if (residuals.empty()) {
        throw PolicyError("heuristic_select: empty residual sequence");
    }
    std::size_t best = 0;
    double best_omega = omega(0, varrho, residuals[0]);
    for (std::size_t k = 1; k < residuals.size(); ++k) {
        const double w = omega(k, varrho, residuals[k]);
        if (w < best_omega) {
            best_omega = w;
            best = k;
        }
    }
    return best;
}

std::optional<std::size_t> first_crossing(std::span<const double> residuals, double threshold) {
    for (std::size_t k = 0; k < residuals.size(); ++k) {
        if (residuals[k] <= threshold) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_omega_minimizer(std::span<const double> residuals, double varrho, std::size_t k_star) {
    if (k_star >= residuals.size()) {
        return false;
    }
    const double w = omega(k_star, varrho, residuals[k_star]);
    for (std::size_t k = 0; k < residuals.size(); ++k) {
        if (omega(k, varrho, residuals[k]) < w) {
            return false;
        }
    }
    return true;
}

bool is_first_crossing(std::span<const double> residuals, double threshold, std::size_t k_stop) {
    if (k_stop >= residuals.size() || !(residuals[k_stop] <= threshold)) {
        return false;
    }
    for (std::size_t k = 0; k < k_stop; ++k) {
        if (residuals[k] <= threshold) {
            return false;
        }
    }
    return true;
}

}  // namespace graphreg
