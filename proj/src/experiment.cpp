#include "graphreg/experiment.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/io.hpp"
#include "graphreg/measurement.hpp"
#include "graphreg/phantom.hpp"
#include "graphreg/vecops.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace graphreg {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '\n' || c == '\r') out += ' ';
        else out += c;
    }
    return out + "\"";
}

std::string cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

// Fills the outcome fields of `row` from a finished solver run and returns
// the reported image.
Image finish_row(SummaryRow& row, const InitResult& init, const IterationTrace& trace, const ProblemSetup& setup) {
    row.theta = init.theta;
    row.stop_iter = trace.stop_index;
    row.stop_reason = trace.stop_reason;
    row.iterations = trace.records.empty() ? 0 : trace.records.size() - 1;
    row.threshold = trace.threshold;
    row.status = trace.stop_reason == StopReason::Diverged ? "diverged" : "ok";
    if (init.warning) row.warnings.push_back("initializer: " + init.note);
    for (const auto& w : trace.warnings) row.warnings.push_back(w);
    ReportedImage rep = report_image(trace.reconstruction, &setup.truth, setup.problem);
    row.sign = rep.sign;
    row.metrics = evaluate(rep.image, setup.truth);
    return std::move(rep.image);
}

}  // namespace

ProblemSetup make_setup(const ExperimentConfig& config) {
    config.validate();
    ProblemSetup s;
    s.problem = config.problem;
    const std::size_t n = config.image_size;
    s.truth = config.phantom == PhantomKind::SheppLogan ? phantom_shepp_logan(n)
                                                        : phantom_binary_blobs(n, config.seed, config.blob_density);
    const auto geometry = RadonGeometry::make(n, config.n_angles, config.n_detectors);
    s.physical = std::make_shared<const RadonOperator>(build_radon(geometry));
    s.operator_norm = estimate_operator_norm(*s.physical);
    if (config.normalize_operator) {
        s.op = std::make_shared<const RadonOperator>(s.physical->scaled(1.0 / s.operator_norm));
        s.data_scale = config.problem == Problem::PhaseRetrieval ? 1.0 / (s.operator_norm * s.operator_norm)
                                                                 : 1.0 / s.operator_norm;
    } else {
        s.op = s.physical;
        s.data_scale = 1.0;
    }
    if (config.problem == Problem::PhaseRetrieval) {
        s.model = std::make_shared<const PhaseRetrievalOperator>(s.op);
        s.clean = s.physical->forward(s.truth);
        for (double& x : s.clean.values) x *= x;
    } else {
        s.model = std::make_shared<const LinearCtModel>(s.op);
        s.clean = s.physical->forward(s.truth);
    }
    return s;
}

ScaledData simulate_data(const ProblemSetup& setup, std::size_t m, const NoiseSpec& noise) {
    const MeasurementEnsemble ensemble = generate_measurements(setup.clean, m, noise);
    ScaledData d;
    d.v_hat = ensemble.mean();
    vec::scale(setup.data_scale, d.v_hat.values);
    d.z_m = ensemble.z_m() * setup.data_scale;
    d.m = m;
    return d;
}

ReportedImage report_image(const Image& u, const Image* truth, Problem problem) {
    auto clamp01 = [](Image img) {
        for (double& x : img.values) x = std::isnan(x) ? 0.0 : std::clamp(x, 0.0, 1.0);
        return img;
    };
    ReportedImage out{clamp01(u), 1};
    if (problem == Problem::PhaseRetrieval && truth) {
        Image neg = u;
        vec::scale(-1.0, neg.values);
        Image flipped = clamp01(std::move(neg));
        if (rre(flipped, *truth) < rre(out.image, *truth)) {
            out.image = std::move(flipped);
            out.sign = -1;
        }
    }
    return out;
}

SingleRun run_single(const ProblemSetup& setup, const ScaledData& data, const ExperimentConfig& config,
                     InitializerKind initializer, const StoppingPolicy& policy, const ExperimentOptions& options) {
    SingleRun out;
    InitializerSpec spec = config.initializer;
    spec.kind = initializer;
    const auto t0 = std::chrono::steady_clock::now();
    out.init = initialize(*setup.model, data.v_hat, spec, data.z_m / std::sqrt(static_cast<double>(data.m)));
    const double init_seconds = seconds_since(t0);

    SolverParams params = config.solver;
    params.max_iters = config.max_iters_for(data.m);
    const auto t1 = std::chrono::steady_clock::now();
    out.trace = run(out.init.image, data.v_hat, data.m, data.z_m, *setup.model, params, policy,
                    options.trace_metrics ? &setup.truth : nullptr);

    SummaryRow& row = out.row;
    row.solve_seconds = seconds_since(t1);
    row.init_seconds = init_seconds;
    row.m = data.m;
    row.initializer = initializer;
    row.rule = policy.kind;
    row.max_iters = params.max_iters;
    out.reported = finish_row(row, out.init, out.trace, setup);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options) {
    config.validate();
    ExperimentResult result;
    result.summary.problem = config.problem;
    result.summary.image_size = config.image_size;

    const ProblemSetup setup = make_setup(config);
    result.truth = setup.truth;

    struct Task {
        std::size_t m;
        InitializerKind init;
        std::size_t first_row;
    };
    std::vector<Task> tasks;
    for (std::size_t m : config.m_values) {
        for (InitializerKind init : config.initializers) {
            tasks.push_back({m, init, result.summary.rows.size()});
            for (const auto& policy : config.stopping) {
                SummaryRow row;
                row.m = m;
                row.initializer = init;
                row.rule = policy.kind;
                row.max_iters = config.max_iters_for(m);
                result.summary.rows.push_back(row);
            }
        }
    }
    result.traces.resize(result.summary.rows.size());
    result.images.resize(result.summary.rows.size());

    auto work = [&](const Task& task) {
        ScaledData data;
        InitResult init;
        double init_seconds = 0.0;
        InitializerSpec spec = config.initializer;
        spec.kind = task.init;
        try {
            data = simulate_data(setup, task.m, config.noise);
            const auto t0 = std::chrono::steady_clock::now();
            init = initialize(*setup.model, data.v_hat, spec, data.z_m / std::sqrt(static_cast<double>(task.m)));
            init_seconds = seconds_since(t0);
        } catch (const std::exception& e) {
            for (std::size_t j = 0; j < config.stopping.size(); ++j) {
                SummaryRow& row = result.summary.rows[task.first_row + j];
                row.status = "failed";
                row.error = std::string("initializer: ") + e.what();
            }
            return;
        }
        for (std::size_t j = 0; j < config.stopping.size(); ++j) {
            SummaryRow& row = result.summary.rows[task.first_row + j];
            try {
                SolverParams params = config.solver;
                params.max_iters = row.max_iters;
                const auto t1 = std::chrono::steady_clock::now();
                IterationTrace trace = run(init.image, data.v_hat, data.m, data.z_m, *setup.model, params,
                                           config.stopping[j], options.trace_metrics ? &setup.truth : nullptr);
                row.solve_seconds = seconds_since(t1);
                row.init_seconds = init_seconds;
                result.images[task.first_row + j] = finish_row(row, init, trace, setup);
                result.traces[task.first_row + j] = std::move(trace);
            } catch (const std::exception& e) {
                row.status = "failed";
                row.error = e.what();
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
    if (threads <= 1) {
        for (const auto& t : tasks) work(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < tasks.size(); k = next++) work(tasks[k]);
            });
        }
        for (auto& t : pool) t.join();
    }
    return result;
}

std::string summary_header() {
    return "m,initializer,rule,status,stop_iter,stop_reason,iterations,max_iters,threshold,theta,sign,"
           "rre,psnr,psnr_rmse,ssim,error";
}

std::string summary_csv(const ExperimentSummary& summary) {
    std::ostringstream out;
    out << summary_header() << '\n';
    for (const auto& r : summary.rows) {
        out << r.m << ',' << to_string(r.initializer) << ',' << to_string(r.rule) << ',' << r.status << ',';
        if (r.status == "failed") {
            out << ",,,,,,,,,,," << csv_quote(r.error) << '\n';
            continue;
        }
        out << r.stop_iter << ',' << to_string(r.stop_reason) << ',' << r.iterations << ',' << r.max_iters << ','
            << cell(r.threshold) << ',' << format_double(r.theta) << ',' << r.sign << ','
            << format_double(r.metrics.rre) << ',' << format_double(r.metrics.psnr) << ','
            << format_double(r.metrics.psnr_rmse) << ',' << format_double(r.metrics.ssim) << ','
            << csv_quote(r.error) << '\n';
    }
    return out.str();
}

std::string trace_csv(const IterationTrace& trace) {
    std::ostringstream out;
    out << "k,residual,alpha,beta,omega,rre,psnr,ssim\n";
    for (const auto& r : trace.records) {
        out << r.k << ',' << format_double(r.residual_norm) << ',' << cell(r.alpha) << ',' << cell(r.beta) << ','
            << cell(r.omega) << ',' << cell(r.rre) << ',' << cell(r.psnr) << ',' << cell(r.ssim) << '\n';
    }
    return out.str();
}

std::string timing_csv(const ExperimentSummary& summary) {
    std::ostringstream out;
    out << "m,initializer,rule,init_seconds,solve_seconds\n";
    for (const auto& r : summary.rows) {
        out << r.m << ',' << to_string(r.initializer) << ',' << to_string(r.rule) << ',' << format_double(r.init_seconds)
            << ',' << format_double(r.solve_seconds) << '\n';
    }
    return out.str();
}

std::string trace_file_name(const SummaryRow& row) {
    return "trace_m" + std::to_string(row.m) + "_" + std::string(to_string(row.initializer)) + "_" +
           std::string(to_string(row.rule)) + ".csv";
}

std::string image_file_name(const SummaryRow& row) {
    return "recon_m" + std::to_string(row.m) + "_" + std::string(to_string(row.initializer)) + "_" +
           std::string(to_string(row.rule)) + ".pgm";
}

void emit_outputs(const ExperimentResult& result, const fs::path& output_dir) {
    write_text_file(output_dir / "summary.csv", summary_csv(result.summary));
    write_text_file(output_dir / "timing.csv", timing_csv(result.summary));
    for (std::size_t i = 0; i < result.summary.rows.size(); ++i) {
        const SummaryRow& row = result.summary.rows[i];
        if (row.status == "failed") continue;
        if (i < result.traces.size()) {
            write_text_file(output_dir / trace_file_name(row), trace_csv(result.traces[i]));
        }
        if (i < result.images.size() && result.images[i].size() > 0) {
            write_pgm16(result.images[i], output_dir / image_file_name(row));
        }
    }
    if (result.truth.size() > 0) {
        write_pgm16(result.truth, output_dir / "truth.pgm");
    }
}

bool any_diverged(const ExperimentSummary& summary) {
    return std::any_of(summary.rows.begin(), summary.rows.end(),
                       [](const SummaryRow& r) { return r.status == "diverged"; });
}

}  // namespace graphreg
