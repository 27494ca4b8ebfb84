#pragma once

#include "graphreg/forward_model.hpp"
#include "graphreg/radon.hpp"
#include "graphreg/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphreg {

enum class InitializerKind { FBP, Tikhonov, TV };

[[nodiscard]] std::string_view to_string(InitializerKind kind) noexcept;
[[nodiscard]] InitializerKind parse_initializer_kind(std::string_view text);

/// Parameters of the initial reconstructor u0 = Psi_theta(v).
struct InitializerSpec {
    InitializerKind kind = InitializerKind::Tikhonov;
    /// Candidate regularization parameters. Empty selects the default grid:
    /// 12 log-spaced points over [1e-4, 1e2] times |A|^2.
    std::vector<double> theta_grid;
    int inner_iters = 300;
    int gcv_probes = 8;
    std::uint64_t gcv_seed = 12345;
    double tv_smoothing = 1e-3;

    void validate() const;
};

struct InitResult {
    Image image;
    double theta = 0.0;
    /// Set when an inner solve stopped at its iteration cap or no grid
    /// value met the discrepancy target.
    bool warning = false;
    std::string note;
};

[[nodiscard]] std::vector<double> log_grid(double lo, double hi, std::size_t count);

// ---- Filtered back-projection ------------------------------------------

/// Ramp times Hann window (cutoff at Nyquist) sampled at the DFT bins of a
/// length-`padded` transform with detector spacing `spacing`.
[[nodiscard]] std::vector<double> ramp_hann_filter(std::size_t padded, double spacing);

/// Per-angle frequency-domain filtering, zero-padded to the next power of
/// two >= 2 * n_detectors, then back-projection with angular weight pi/m.
[[nodiscard]] Image psi_fbp(const RadonOperator& op, const Sinogram& v);

// ---- Tikhonov --------------------------------------------------------------

/// Solves (A^T A + theta_j I) x_j = rhs for every shift at once with one
/// Krylov sequence (multi-shift CG). Shifts must be nonnegative; results are
/// in the order of `shifts`. `converged` reports the base system.
struct MultiShiftResult {
    std::vector<std::vector<double>> solutions;
    int iterations = 0;
    bool converged = false;
};
[[nodiscard]] MultiShiftResult multishift_cg(const RadonOperator& op, std::span<const double> rhs,
                                             std::span<const double> shifts, int max_iters,
                                             double rel_tol = 1e-10);

struct GcvScore {
    double theta;
    double residual;
    double trace_influence;
    double score;
};

/// Minimizer of 1/2 (|A u - v|^2 + theta |u|^2) with theta picked by
/// generalized cross-validation (Hutchinson trace estimates).
[[nodiscard]] InitResult psi_tikhonov(const RadonOperator& op, const Sinogram& v, const InitializerSpec& spec,
                                      std::vector<GcvScore>* scores = nullptr);

// ---- Total variation -------------------------------------------------------

/// Isotropic total variation with forward differences (Neumann boundary).
[[nodiscard]] double total_variation(const Image& u);

/// Minimizer of 1/2 |A u - v|^2 + theta TV_mu(u) by FISTA for one theta.
[[nodiscard]] Image tv_solve(const RadonOperator& op, const Sinogram& v, double theta, double mu, int iters,
                             double lipschitz_data);

/// TV reconstruction; theta is the largest grid value whose residual is at
/// most 1.1 * `discrepancy`. When none qualifies the lowest-residual
/// candidate is returned with the warning flag set.
[[nodiscard]] InitResult psi_tv(const RadonOperator& op, const Sinogram& v, const InitializerSpec& spec,
                                double discrepancy);

// ---- Dispatch --------------------------------------------------------------

/// u0 = Psi(v_hat) for either forward model. For phase retrieval the CT
/// initializer is applied to sqrt(max(v_hat, 0)).
/// `noise_estimate` approximates |v_hat - v| (z_m / sqrt(m)).
[[nodiscard]] InitResult initialize(const ForwardModel& model, const Sinogram& v_hat, const InitializerSpec& spec,
                                    double noise_estimate);

}  // namespace graphreg
