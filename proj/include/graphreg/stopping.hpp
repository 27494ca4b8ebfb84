#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace graphreg {

enum class StoppingKind { Statistical, Heuristic };

[[nodiscard]] std::string_view to_string(StoppingKind kind) noexcept;
[[nodiscard]] StoppingKind parse_stopping_kind(std::string_view text);

/// Noise-level-free stopping rule.
///
/// Statistical: stop at the first k with |F(u_k) - v_hat| <= (tau_m / sqrt(m)) z_m,
/// tau_m = tau_coeff * m^tau_exponent.
/// Heuristic: run the full budget, then pick argmin_k (k + varrho) |F(u_k) - v_hat|^2.
struct StoppingPolicy {
    StoppingKind kind = StoppingKind::Statistical;
    double tau_coeff = 2.0;
    double tau_exponent = 0.5;
    double varrho = 100.0;

    [[nodiscard]] static StoppingPolicy statistical(double tau_coeff, double tau_exponent = 0.5);
    [[nodiscard]] static StoppingPolicy heuristic(double varrho);

    void validate() const;
};

/// (tau_m / sqrt(m)) * z_m. Throws PolicyError for m < 2.
[[nodiscard]] double statistical_threshold(const StoppingPolicy& policy, std::size_t m, double z_m);

/// (k + varrho) * residual^2
[[nodiscard]] double omega(std::size_t k, double varrho, double residual) noexcept;

/// argmin_k (k + varrho) residual_k^2, ties to the smallest k.
[[nodiscard]] std::size_t heuristic_select(std::span<const double> residuals, double varrho);

/// First k with residual_k <= threshold, if any.
[[nodiscard]] std::optional<std::size_t> first_crossing(std::span<const double> residuals, double threshold);

/// Post-hoc checks on a recorded residual sequence.
[[nodiscard]] bool is_omega_minimizer(std::span<const double> residuals, double varrho, std::size_t k_star);
[[nodiscard]] bool is_first_crossing(std::span<const double> residuals, double threshold, std::size_t k_stop);

}  // namespace graphreg
