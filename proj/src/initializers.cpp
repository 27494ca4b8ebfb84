#include "graphreg/initializers.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/rng.hpp"
#include "graphreg/vecops.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

namespace graphreg {

std::string_view to_string(InitializerKind kind) noexcept {
    switch (kind) {
        case InitializerKind::FBP: return "fbp";
        case InitializerKind::Tikhonov: return "tik";
        case InitializerKind::TV: return "tv";
    }
    return "unknown";
}

InitializerKind parse_initializer_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "fbp") return InitializerKind::FBP;
    if (lower == "tik" || lower == "tikhonov") return InitializerKind::Tikhonov;
    if (lower == "tv") return InitializerKind::TV;
    throw ConfigError("unknown initializer '" + std::string(text) + "'");
}

void InitializerSpec::validate() const {
    for (double t : theta_grid) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw ConfigError("initializer: theta_grid entries must be positive and finite");
        }
    }
    if (inner_iters < 1) {
        throw ConfigError("initializer: inner_iters must be >= 1");
    }
    if (gcv_probes < 1) {
        throw ConfigError("initializer: gcv_probes must be >= 1");
    }
    if (!(tv_smoothing > 0.0)) {
        throw ConfigError("initializer: tv_smoothing must be positive");
    }
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
        throw ConfigError("log_grid: need 0 < lo <= hi and count >= 1");
    }
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

namespace {

void check_sinogram(const RadonOperator& op, const Sinogram& v) {
    const auto& g = op.geometry();
    if (v.n_rows != g.n_angles || v.n_cols != g.n_detectors) {
        throw DimensionError("initializer: sinogram shape does not match operator");
    }
}

// Sorted, de-duplicated grid; the default spans [1e-4, 1e2] * |A|^2.
std::vector<double> resolve_grid(const RadonOperator& op, const InitializerSpec& spec) {
    std::vector<double> grid = spec.theta_grid;
    if (grid.empty()) {
        const double s = estimate_operator_norm(op, 30);
        grid = log_grid(1e-4 * s * s, 1e2 * s * s, 12);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

// ---- FBP ---------------------------------------------------------------------

std::vector<double> ramp_hann_filter(std::size_t padded, double spacing) {
    if (padded == 0 || !(spacing > 0.0)) {
        throw ConfigError("ramp_hann_filter: invalid size or spacing");
    }
    const double df = 1.0 / (static_cast<double>(padded) * spacing);
    const double cutoff = 0.5 / spacing;
    std::vector<double> h(padded);
    for (std::size_t k = 0; k < padded; ++k) {
        const double w = static_cast<double>(std::min(k, padded - k)) * df;
        h[k] = w * 0.5 * (1.0 + std::cos(std::numbers::pi * w / cutoff));
    }
    return h;
}

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

Image psi_fbp(const RadonOperator& op, const Sinogram& v) {
    check_sinogram(op, v);
    const auto& g = op.geometry();
    const std::size_t nd = g.n_detectors;
    const std::size_t padded = next_pow2(2 * nd);
    const std::size_t n_freq = padded / 2 + 1;
    const double ds = g.detector_spacing();
    const std::vector<double> filter = ramp_hann_filter(padded, ds);

    double* line = fftw_alloc_real(padded);
    fftw_complex* spec = fftw_alloc_complex(n_freq);
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    {
        // The FFTW planner is not thread safe.
        std::lock_guard lock(fftw_planner_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(padded), line, spec, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(padded), spec, line, FFTW_ESTIMATE);
    }

    // With the filter sampled in cycles per unit length, the normalized
    // inverse DFT already carries the ds of the convolution quadrature.
    const double conv_scale = 1.0 / static_cast<double>(padded);
    Sinogram filtered(g.n_angles, nd);
    for (std::size_t a = 0; a < g.n_angles; ++a) {
        std::fill(line, line + padded, 0.0);
        std::copy_n(v.values.begin() + static_cast<std::ptrdiff_t>(a * nd), nd, line);
        fftw_execute(fwd);
        for (std::size_t k = 0; k < n_freq; ++k) {
            spec[k][0] *= filter[k];
            spec[k][1] *= filter[k];
        }
        fftw_execute(inv);
        for (std::size_t d = 0; d < nd; ++d) {
            filtered.values[a * nd + d] = conv_scale * line[d];
        }
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    fftw_free(spec);
    fftw_free(line);

    // Angles cover [0, 2pi), so each direction is seen twice: weight pi/m.
    // A^T sums intersection lengths, which approximates h^2/ds times the
    // interpolated filtered value. Data and matrix both carry op.scale().
    Image u = op.adjoint(filtered);
    const double h = g.pixel_size();
    const double c = op.scale();
    vec::scale(std::numbers::pi / static_cast<double>(g.n_angles) * ds / (h * h) / (c * c), u.values);
    return u;
}

// ---- Tikhonov ----------------------------------------------------------------

MultiShiftResult multishift_cg(const RadonOperator& op, std::span<const double> rhs, std::span<const double> shifts,
                               int max_iters, double rel_tol) {
    const std::size_t n = op.image_pixels();
    if (rhs.size() != n) {
        throw DimensionError("multishift_cg: rhs size mismatch");
    }
    if (shifts.empty()) {
        throw ConfigError("multishift_cg: no shifts");
    }
    for (double s : shifts) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw ConfigError("multishift_cg: shifts must be nonnegative");
        }
    }
    const std::size_t ns = shifts.size();
    const double base = *std::min_element(shifts.begin(), shifts.end());

    MultiShiftResult res;
    res.solutions.assign(ns, std::vector<double>(n, 0.0));
    const double b_norm = vec::norm(rhs);
    if (b_norm == 0.0) {
        res.converged = true;
        return res;
    }

    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<std::vector<double>> p(ns, r);
    std::vector<double> zeta(ns, 1.0), zeta_prev(ns, 1.0);
    std::vector<char> active(ns, 1);
    std::vector<double> q(n), tmp(op.n_measurements());
    double rr = vec::norm_sq(r);
    double alpha_prev = 1.0;
    double beta_prev = 0.0;

    // The base system (smallest shift) drives the Krylov sequence; shifted
    // systems reuse its residuals scaled by zeta.
    std::size_t base_idx = 0;
    for (std::size_t j = 0; j < ns; ++j) {
        if (shifts[j] == base) {
            base_idx = j;
            break;
        }
    }

    for (int it = 0; it < max_iters; ++it) {
        const auto& pb = p[base_idx];
        op.forward(pb, tmp);
        op.adjoint(tmp, q);
        vec::axpy(base, pb, q);
        const double pq = vec::dot(pb, q);
        if (!(pq > 0.0)) {
            break;
        }
        const double alpha = rr / pq;
        std::vector<double> zeta_next(ns);
        for (std::size_t j = 0; j < ns; ++j) {
            if (!active[j]) continue;
            const double sigma = shifts[j] - base;
            const double denom =
                alpha * beta_prev * (zeta_prev[j] - zeta[j]) + zeta_prev[j] * alpha_prev * (1.0 + sigma * alpha);
            zeta_next[j] = denom != 0.0 ? zeta[j] * zeta_prev[j] * alpha_prev / denom : 0.0;
            const double alpha_j = zeta[j] != 0.0 ? alpha * zeta_next[j] / zeta[j] : 0.0;
            vec::axpy(alpha_j, p[j], res.solutions[j]);
        }
        vec::axpy(-alpha, q, r);
        const double rr_new = vec::norm_sq(r);
        const double beta = rr_new / rr;
        for (std::size_t j = 0; j < ns; ++j) {
            if (!active[j]) continue;
            const double ratio = zeta[j] != 0.0 ? zeta_next[j] / zeta[j] : 0.0;
            const double beta_j = ratio * ratio * beta;
            for (std::size_t i = 0; i < n; ++i) {
                p[j][i] = zeta_next[j] * r[i] + beta_j * p[j][i];
            }
            zeta_prev[j] = zeta[j];
            zeta[j] = zeta_next[j];
            // Shifted residual norms are |zeta_j| * |r|; retire converged ones.
            if (j != base_idx && std::abs(zeta[j]) * std::sqrt(rr_new) <= rel_tol * b_norm) {
                active[j] = 0;
            }
        }
        alpha_prev = alpha;
        beta_prev = beta;
        rr = rr_new;
        res.iterations = it + 1;
        if (std::sqrt(rr) <= rel_tol * b_norm) {
            res.converged = true;
            break;
        }
    }
    return res;
}

InitResult psi_tikhonov(const RadonOperator& op, const Sinogram& v, const InitializerSpec& spec,
                        std::vector<GcvScore>* scores) {
    spec.validate();
    check_sinogram(op, v);
    const std::vector<double> grid = resolve_grid(op, spec);
    const std::size_t n = op.image_pixels();
    const double n_meas = static_cast<double>(op.n_measurements());

    std::vector<double> atv(n);
    op.adjoint(v.values, atv);
    constexpr double kTol = 1e-8;
    MultiShiftResult sol = multishift_cg(op, atv, grid, spec.inner_iters, kTol);

    // Hutchinson estimate of tr((A^T A + theta I)^{-1}) for every theta.
    std::vector<double> trace_inv(grid.size(), 0.0);
    bool probes_converged = true;
    for (int p = 0; p < spec.gcv_probes; ++p) {
        Rng rng(spec.gcv_seed, static_cast<std::uint64_t>(p));
        std::vector<double> z(n);
        for (double& x : z) x = rng.rademacher();
        MultiShiftResult pr = multishift_cg(op, z, grid, spec.inner_iters, kTol);
        probes_converged = probes_converged && pr.converged;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            trace_inv[j] += vec::dot(z, pr.solutions[j]) / static_cast<double>(spec.gcv_probes);
        }
    }

    std::vector<double> fit(op.n_measurements());
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    if (scores) scores->clear();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        op.forward(sol.solutions[j], fit);
        const double res = vec::distance(fit, v.values);
        const double tr_h = static_cast<double>(n) - grid[j] * trace_inv[j];
        const double dof = n_meas - tr_h;
        const double score = dof > 0.0 ? res * res / (dof * dof) : std::numeric_limits<double>::infinity();
        if (scores) scores->push_back({grid[j], res, tr_h, score});
        if (score < best_score) {
            best_score = score;
            best = j;
        }
    }

    InitResult out;
    out.image = Image(op.geometry().image_size, op.geometry().image_size, std::move(sol.solutions[best]));
    out.theta = grid[best];
    out.warning = !sol.converged || !probes_converged;
    if (out.warning) {
        out.note = "conjugate-gradient solve reached inner_iters before tolerance";
    }
    return out;
}

// ---- Total variation ---------------------------------------------------------

double total_variation(const Image& u) {
    const std::size_t w = u.width;
    const std::size_t h = u.height;
    double tv = 0.0;
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double gx = c + 1 < w ? u.at(r, c + 1) - u.at(r, c) : 0.0;
            const double gy = r + 1 < h ? u.at(r + 1, c) - u.at(r, c) : 0.0;
            tv += std::sqrt(gx * gx + gy * gy);
        }
    }
    return tv;
}

namespace {

// Gradient of sum sqrt(|grad u|^2 + mu^2), accumulated into `out` times `weight`.
void add_smoothed_tv_gradient(const std::vector<double>& u, std::size_t w, std::size_t h, double mu, double weight,
                              std::vector<double>& out) {
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t i = r * w + c;
            const double gx = c + 1 < w ? u[i + 1] - u[i] : 0.0;
            const double gy = r + 1 < h ? u[i + w] - u[i] : 0.0;
            const double s = weight / std::sqrt(gx * gx + gy * gy + mu * mu);
            const double px = gx * s;
            const double py = gy * s;
            out[i] -= px + py;
            if (c + 1 < w) out[i + 1] += px;
            if (r + 1 < h) out[i + w] += py;
        }
    }
}

Image tv_fista(const RadonOperator& op, const Sinogram& v, double theta, double mu, int iters, double lip_data,
               const Image& start) {
    const std::size_t side = op.geometry().image_size;
    const std::size_t n = op.image_pixels();
    const double step = 1.0 / (lip_data + 8.0 * theta / mu);
    std::vector<double> x = start.values;
    std::vector<double> x_prev = x;
    std::vector<double> y = x;
    std::vector<double> grad(n), resid(op.n_measurements());
    double t = 1.0;
    for (int it = 0; it < iters; ++it) {
        op.forward(y, resid);
        vec::axpy(-1.0, v.values, resid);
        op.adjoint(resid, grad);
        add_smoothed_tv_gradient(y, side, side, mu, theta, grad);
        x_prev.swap(x);
        x = y;
        vec::axpy(-step, grad, x);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double mom = (t - 1.0) / t_next;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = x[i] + mom * (x[i] - x_prev[i]);
        }
        t = t_next;
    }
    return Image(side, side, std::move(x));
}

}  // namespace

Image tv_solve(const RadonOperator& op, const Sinogram& v, double theta, double mu, int iters,
               double lipschitz_data) {
    check_sinogram(op, v);
    if (!(theta >= 0.0) || !(mu > 0.0) || iters < 0 || !(lipschitz_data > 0.0)) {
        throw ConfigError("tv_solve: invalid parameters");
    }
    return tv_fista(op, v, theta, mu, iters, lipschitz_data, op.blank_image());
}

InitResult psi_tv(const RadonOperator& op, const Sinogram& v, const InitializerSpec& spec, double discrepancy) {
    spec.validate();
    check_sinogram(op, v);
    if (!(discrepancy >= 0.0) || !std::isfinite(discrepancy)) {
        throw ConfigError("psi_tv: discrepancy threshold must be finite and nonnegative");
    }
    const std::vector<double> grid = resolve_grid(op, spec);
    const double norm = estimate_operator_norm(op, 30);
    const double lip = 1.01 * norm * norm;
    const double target = 1.1 * discrepancy;

    // Largest theta first, each solve warm-started from the previous one;
    // the first feasible theta is the answer.
    InitResult best;
    double best_res = std::numeric_limits<double>::infinity();
    Image current = op.blank_image();
    std::vector<double> fit(op.n_measurements());
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        current = tv_fista(op, v, *it, spec.tv_smoothing, spec.inner_iters, lip, current);
        op.forward(current.values, fit);
        const double res = vec::distance(fit, v.values);
        if (res <= target) {
            InitResult out;
            out.image = current;
            out.theta = *it;
            return out;
        }
        if (res < best_res) {
            best_res = res;
            best.image = current;
            best.theta = *it;
        }
    }
    best.warning = true;
    best.note = "no theta met the discrepancy target; returning lowest-residual candidate";
    return best;
}

// ---- Dispatch ----------------------------------------------------------------

InitResult initialize(const ForwardModel& model, const Sinogram& v_hat, const InitializerSpec& spec,
                      double noise_estimate) {
    const RadonOperator& op = model.radon();
    Sinogram data = v_hat;
    double discrepancy = noise_estimate;
    if (!model.is_linear()) {
        // sqrt surrogate: first-order noise propagation d sqrt(y) = dy / (2 sqrt(y)),
        // with a floor to keep near-zero intensities from dominating.
        double peak = 0.0;
        for (double y : v_hat.values) peak = std::max(peak, y);
        const double floor = std::max(1e-3 * peak, std::numeric_limits<double>::min());
        double gain = 0.0;
        for (double& y : data.values) {
            gain += 1.0 / (4.0 * std::max(y, floor));
            y = std::sqrt(std::max(y, 0.0));
        }
        discrepancy = noise_estimate * std::sqrt(gain / static_cast<double>(data.values.size()));
    }
    InitResult out;
    switch (spec.kind) {
        case InitializerKind::FBP:
            out.image = psi_fbp(op, data);
            break;
        case InitializerKind::Tikhonov:
            out = psi_tikhonov(op, data, spec);
            break;
        case InitializerKind::TV:
            out = psi_tv(op, data, spec, discrepancy);
            break;
    }
    if (!model.is_linear()) {
        out.note += out.note.empty() ? "" : "; ";
        out.note += "phase retrieval: initializer applied to sqrt(max(v_hat, 0))";
    }
    return out;
}

}  // namespace graphreg
