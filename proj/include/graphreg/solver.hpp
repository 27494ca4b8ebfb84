#pragma once

#include "graphreg/forward_model.hpp"
#include "graphreg/graph.hpp"
#include "graphreg/measurement.hpp"
#include "graphreg/stopping.hpp"
#include "graphreg/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphreg {

/// Constants of the adaptive step rules
///   alpha_k = min(zeta0 |r_k| / |F'(u_k)^* r_k|, zeta1)
///   beta_k  = min(nu0 |r_k|^2 / |L u_k|, nu1 / |L u_k|, nu2)
/// with L the graph Laplacian of u_k.
struct SolverParams {
    double zeta0 = 0.2;
    double zeta1 = 0.5;
    double nu0 = 0.05;
    double nu1 = 0.05;
    double nu2 = 10.0;
    std::size_t max_iters = 200;
    GraphParams graph;
    /// Rebuild the graph every this many iterations (1 = every step).
    std::size_t graph_rebuild_every = 1;

    void validate() const;
};

/// One row of the trace. Record k describes iterate u_k: its residual and,
/// when a step was taken from it, the alpha and beta used.
struct IterationRecord {
    std::size_t k = 0;
    double residual_norm = 0.0;
    std::optional<double> alpha;
    std::optional<double> beta;
    /// |L u_k| and |F'(u_k)^* r_k| for post-hoc contract checks.
    std::optional<double> laplacian_norm;
    std::optional<double> gradient_norm;
    std::optional<double> omega;
    std::optional<double> rre;
    std::optional<double> psnr;
    std::optional<double> ssim;
};

enum class StopReason { ThresholdMet, OmegaArgmin, MaxIters, Diverged };

[[nodiscard]] std::string_view to_string(StopReason reason) noexcept;

struct IterationTrace {
    std::vector<IterationRecord> records;
    std::size_t stop_index = 0;
    StopReason stop_reason = StopReason::MaxIters;
    /// u_{stop_index}
    Image reconstruction;
    /// Statistical threshold in force, when the statistical rule ran.
    std::optional<double> threshold;
    std::vector<std::string> warnings;

    [[nodiscard]] std::vector<double> residuals() const;
};

[[nodiscard]] double step_alpha(double residual_norm, double gradient_norm, const SolverParams& params);
[[nodiscard]] double step_alpha(std::span<const double> residual, std::span<const double> gradient,
                                const SolverParams& params);

[[nodiscard]] double step_beta(double residual_norm, double laplacian_norm, const SolverParams& params);
[[nodiscard]] double step_beta(double residual_norm, std::span<const double> laplacian_term,
                               const SolverParams& params);

struct StepResult {
    Image next;
    IterationRecord record;
    bool diverged = false;
};

/// One update u - alpha F'(u)^*(F(u) - v_hat) - beta L_u u with the graph
/// rebuilt from u. The record carries k = 0 and no ground-truth metrics.
[[nodiscard]] StepResult eirmgl_step(const Image& u, const Sinogram& v_hat, const ForwardModel& model,
                                     const SolverParams& params);

/// Iterates from u0 until the rule fires. The statistical rule stops at the
/// first crossing (stop_index may be 0); the heuristic rule runs all
/// max_iters steps and returns the Omega minimizer. Ground-truth metrics are
/// recorded only when `truth` is given.
[[nodiscard]] IterationTrace run(const Image& u0, const MeasurementEnsemble& ensemble, const ForwardModel& model,
                                 const SolverParams& params, const StoppingPolicy& policy,
                                 const Image* truth = nullptr);

/// Same, with the data mean and spread given directly.
[[nodiscard]] IterationTrace run(const Image& u0, const Sinogram& v_hat, std::size_t m, double z_m,
                                 const ForwardModel& model, const SolverParams& params,
                                 const StoppingPolicy& policy, const Image* truth = nullptr);

}  // namespace graphreg
