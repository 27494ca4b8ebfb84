#pragma once

#include "graphreg/config.hpp"
#include "graphreg/forward_model.hpp"
#include "graphreg/initializers.hpp"
#include "graphreg/metrics.hpp"
#include "graphreg/radon.hpp"
#include "graphreg/solver.hpp"
#include "graphreg/stopping.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace graphreg {

/// Ground truth, operators and clean data for one experiment.
///
/// Noise is simulated on `clean` (physical line-integral units). When the
/// operator is normalized, `model` works with A / |A| and data handed to the
/// solver are multiplied by `data_scale` (1/|A| for CT, 1/|A|^2 for phase
/// retrieval) so that F(u) keeps its meaning.
struct ProblemSetup {
    Problem problem = Problem::XrayCt;
    Image truth;
    std::shared_ptr<const RadonOperator> physical;
    std::shared_ptr<const RadonOperator> op;
    std::shared_ptr<const ForwardModel> model;
    double operator_norm = 1.0;
    double data_scale = 1.0;
    Sinogram clean;
};

/// Builds the phantom, system matrix and clean data for `config` as given
/// (call at_scale first to pick the image side).
[[nodiscard]] ProblemSetup make_setup(const ExperimentConfig& config);

/// Empirical mean and spread of an m-sample ensemble in solver units.
struct ScaledData {
    Sinogram v_hat;
    double z_m = 0.0;
    std::size_t m = 0;
};

/// Sample i of every ensemble uses the stream (noise.seed, i), so the
/// ensemble for a smaller m is a prefix of the one for a larger m.
[[nodiscard]] ScaledData simulate_data(const ProblemSetup& setup, std::size_t m, const NoiseSpec& noise);

/// The image that is reported and written: clamped to [0, 1]. For phase
/// retrieval the better of +u and -u (by RRE against `truth`) is used.
struct ReportedImage {
    Image image;
    int sign = 1;
};
[[nodiscard]] ReportedImage report_image(const Image& u, const Image* truth, Problem problem);

struct SummaryRow {
    std::size_t m = 0;
    InitializerKind initializer = InitializerKind::Tikhonov;
    StoppingKind rule = StoppingKind::Statistical;
    /// "ok", "diverged" or "failed".
    std::string status = "ok";
    std::string error;
    std::size_t stop_iter = 0;
    StopReason stop_reason = StopReason::MaxIters;
    std::size_t iterations = 0;
    std::size_t max_iters = 0;
    std::optional<double> threshold;
    double theta = 0.0;
    int sign = 1;
    MetricReport metrics;
    double init_seconds = 0.0;
    double solve_seconds = 0.0;
    std::vector<std::string> warnings;

    [[nodiscard]] bool stopped_early() const noexcept { return stop_iter < max_iters; }
};

/// One summary row per (m, initializer, rule), in that nesting order.
struct ExperimentSummary {
    Problem problem = Problem::XrayCt;
    std::size_t image_size = 0;
    std::vector<SummaryRow> rows;
};

struct ExperimentResult {
    ExperimentSummary summary;
    /// Parallel to summary.rows; empty for failed rows.
    std::vector<IterationTrace> traces;
    std::vector<Image> images;
    Image truth;
};

struct ExperimentOptions {
    /// Worker threads for the (m, initializer) tasks; 0 uses the hardware
    /// concurrency. Results do not depend on this value.
    unsigned threads = 0;
    /// Record rre/psnr/ssim at every iteration.
    bool trace_metrics = true;
};

/// Runs the full sweep. Errors inside one configuration are recorded in
/// its rows and the sweep continues.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options = {});

/// Single reconstruction on prepared data.
struct SingleRun {
    InitResult init;
    IterationTrace trace;
    SummaryRow row;
    Image reported;
};
[[nodiscard]] SingleRun run_single(const ProblemSetup& setup, const ScaledData& data, const ExperimentConfig& config,
                                   InitializerKind initializer, const StoppingPolicy& policy,
                                   const ExperimentOptions& options = {});

/// Column header of summary.csv.
[[nodiscard]] std::string summary_header();
[[nodiscard]] std::string summary_csv(const ExperimentSummary& summary);
/// Per-iteration trace with header `k,residual,alpha,beta,omega,rre,psnr,ssim`.
/// Missing values are empty cells.
[[nodiscard]] std::string trace_csv(const IterationTrace& trace);
[[nodiscard]] std::string timing_csv(const ExperimentSummary& summary);
[[nodiscard]] std::string trace_file_name(const SummaryRow& row);
[[nodiscard]] std::string image_file_name(const SummaryRow& row);

/// Writes summary.csv, timing.csv, one trace CSV and one PGM per successful
/// row, and truth.pgm. Existing files are overwritten. Throws IoError.
void emit_outputs(const ExperimentResult& result, const std::filesystem::path& output_dir);

/// True when any row diverged.
[[nodiscard]] bool any_diverged(const ExperimentSummary& summary);

}  // namespace graphreg
