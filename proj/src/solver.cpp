#include "graphreg/solver.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/metrics.hpp"
#include "graphreg/vecops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphreg {

void SolverParams::validate() const {
    for (double c : {zeta0, zeta1, nu0, nu1, nu2}) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ConfigError("solver: step constants must be positive and finite");
        }
    }
    if (zeta0 > zeta1) {
        throw ConfigError("solver: zeta0 must not exceed zeta1");
    }
    if (max_iters < 1) {
        throw ConfigError("solver: max_iters must be >= 1");
    }
    if (graph_rebuild_every < 1) {
        throw ConfigError("solver: graph_rebuild_every must be >= 1");
    }
    graph.validate();
}

std::string_view to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::ThresholdMet: return "threshold_met";
        case StopReason::OmegaArgmin: return "omega_argmin";
        case StopReason::MaxIters: return "max_iters";
        case StopReason::Diverged: return "diverged";
    }
    return "unknown";
}

std::vector<double> IterationTrace::residuals() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.residual_norm);
    return out;
}

double step_alpha(double residual_norm, double gradient_norm, const SolverParams& params) {
    if (!(gradient_norm > 0.0)) {
        return params.zeta1;
    }
    return std::min(params.zeta0 * residual_norm / gradient_norm, params.zeta1);
}

double step_alpha(std::span<const double> residual, std::span<const double> gradient, const SolverParams& params) {
    return step_alpha(vec::norm(residual), vec::norm(gradient), params);
}

double step_beta(double residual_norm, double laplacian_norm, const SolverParams& params) {
    if (!(laplacian_norm > 0.0)) {
        return 0.0;
    }
    return std::min({params.nu0 * residual_norm * residual_norm / laplacian_norm, params.nu1 / laplacian_norm,
                     params.nu2});
}

double step_beta(double residual_norm, std::span<const double> laplacian_term, const SolverParams& params) {
    return step_beta(residual_norm, vec::norm(laplacian_term), params);
}

namespace {

void check_shapes(const Image& u, const Sinogram& v_hat, const ForwardModel& model) {
    const auto& g = model.radon().geometry();
    if (u.width != g.image_size || u.height != g.image_size) {
        throw DimensionError("solver: image shape does not match forward model");
    }
    if (v_hat.n_rows != g.n_angles || v_hat.n_cols != g.n_detectors) {
        throw DimensionError("solver: data shape does not match forward model");
    }
}

struct Workspace {
    std::vector<double> residual;
    std::vector<double> gradient;
    std::vector<double> laplacian;
    WeightGraph graph;
};

// Given r = F(u) - v_hat in ws.residual, fills the step fields of `rec`
// and writes u - alpha g - beta L u into `next`. The graph is rebuilt
// from u when `rebuild` is set.
void take_step(const Image& u, double rn, const ForwardModel& model, const SolverParams& params, bool rebuild,
               Workspace& ws, IterationRecord& rec, std::vector<double>& next) {
    model.derivative_adjoint(u.values, ws.residual, ws.gradient);
    const double gn = vec::norm(ws.gradient);
    const double alpha = step_alpha(rn, gn, params);
    if (rebuild) {
        ws.graph = build_graph(u, params.graph);
    }
    laplacian_apply(ws.graph, u.values, ws.laplacian);
    const double ln = vec::norm(ws.laplacian);
    const double beta = step_beta(rn, ln, params);
    rec.alpha = alpha;
    rec.beta = beta;
    rec.gradient_norm = gn;
    rec.laplacian_norm = ln;
    next = u.values;
    vec::axpy(-alpha, ws.gradient, next);
    if (beta != 0.0) {
        vec::axpy(-beta, ws.laplacian, next);
    }
}

}  // namespace

StepResult eirmgl_step(const Image& u, const Sinogram& v_hat, const ForwardModel& model,
                       const SolverParams& params) {
    params.validate();
    check_shapes(u, v_hat, model);
    if (!vec::all_finite(u.values)) {
        throw DimensionError("eirmgl_step: iterate has non-finite values");
    }
    Workspace ws;
    ws.residual.resize(model.n_measurements());
    ws.gradient.resize(model.image_pixels());
    ws.laplacian.resize(model.image_pixels());
    model.apply(u.values, ws.residual);
    vec::axpy(-1.0, v_hat.values, ws.residual);

    StepResult out;
    out.record.residual_norm = vec::norm(ws.residual);
    std::vector<double> next;
    take_step(u, out.record.residual_norm, model, params, true, ws, out.record, next);
    out.diverged = !std::isfinite(*out.record.gradient_norm) || !std::isfinite(*out.record.laplacian_norm) ||
                   !vec::all_finite(next);
    out.next = Image(u.width, u.height, std::move(next));
    return out;
}

IterationTrace run(const Image& u0, const MeasurementEnsemble& ensemble, const ForwardModel& model,
                   const SolverParams& params, const StoppingPolicy& policy, const Image* truth) {
    return run(u0, ensemble.mean(), ensemble.m(), ensemble.z_m(), model, params, policy, truth);
}

IterationTrace run(const Image& u0, const Sinogram& v_hat, std::size_t m, double z_m, const ForwardModel& model,
                   const SolverParams& params, const StoppingPolicy& policy, const Image* truth) {
    params.validate();
    policy.validate();
    check_shapes(u0, v_hat, model);
    if (truth && !same_shape(*truth, u0)) {
        throw DimensionError("solver: ground truth shape mismatch");
    }
    const bool heuristic = policy.kind == StoppingKind::Heuristic;

    IterationTrace trace;
    if (!heuristic) {
        trace.threshold = statistical_threshold(policy, m, z_m);
    }
    if (!vec::all_finite(u0.values)) {
        trace.stop_reason = StopReason::Diverged;
        trace.warnings.emplace_back("initial iterate has non-finite values");
        trace.reconstruction = u0;
        return trace;
    }

    Workspace ws;
    ws.residual.resize(model.n_measurements());
    ws.gradient.resize(model.image_pixels());
    ws.laplacian.resize(model.image_pixels());

    Image u = u0;
    std::vector<double> next;
    double best_omega = std::numeric_limits<double>::infinity();
    bool warned_alpha = false;

    for (std::size_t k = 0;; ++k) {
        model.apply(u.values, ws.residual);
        vec::axpy(-1.0, v_hat.values, ws.residual);
        const double rn = vec::norm(ws.residual);

        IterationRecord rec;
        rec.k = k;
        rec.residual_norm = rn;
        if (heuristic) {
            rec.omega = omega(k, policy.varrho, rn);
        }
        if (truth) {
            rec.rre = rre(u, *truth);
            rec.psnr = psnr(u, *truth);
            rec.ssim = ssim(u, *truth);
        }

        if (!std::isfinite(rn)) {
            trace.stop_reason = StopReason::Diverged;
            break;
        }
        if (heuristic && *rec.omega < best_omega) {
            best_omega = *rec.omega;
            trace.stop_index = k;
            trace.reconstruction = u;
        }
        if (!heuristic && rn <= *trace.threshold) {
            trace.records.push_back(rec);
            trace.stop_index = k;
            trace.stop_reason = StopReason::ThresholdMet;
            trace.reconstruction = u;
            return trace;
        }
        if (k == params.max_iters) {
            trace.records.push_back(rec);
            if (heuristic) {
                trace.stop_reason = StopReason::OmegaArgmin;
            } else {
                trace.stop_index = k;
                trace.stop_reason = StopReason::MaxIters;
                trace.reconstruction = u;
            }
            return trace;
        }

        take_step(u, rn, model, params, k % params.graph_rebuild_every == 0, ws, rec, next);
        if (*rec.alpha < 1e-6 && !warned_alpha) {
            warned_alpha = true;
            trace.warnings.push_back("alpha below 1e-6 at k = " + std::to_string(k));
        }
        trace.records.push_back(rec);
        if (!std::isfinite(*rec.gradient_norm) || !std::isfinite(*rec.laplacian_norm) || !vec::all_finite(next)) {
            trace.stop_reason = StopReason::Diverged;
            if (!heuristic) {
                trace.stop_index = k;
                trace.reconstruction = u;
            }
            trace.warnings.push_back("non-finite update at k = " + std::to_string(k));
            return trace;
        }
        u.values.swap(next);
    }

    // Residual overflowed although the iterate is finite.
    if (!heuristic || trace.reconstruction.size() == 0) {
        trace.stop_index = trace.records.empty() ? 0 : trace.records.size() - 1;
        trace.reconstruction = u;
    }
    trace.warnings.push_back("non-finite residual");
    return trace;
}

}  // namespace graphreg
