// Command-line front end: phantom, simulate, reconstruct, experiment, metrics.

#include "graphreg/config.hpp"
#include "graphreg/errors.hpp"
#include "graphreg/experiment.hpp"
#include "graphreg/io.hpp"
#include "graphreg/measurement.hpp"
#include "graphreg/metrics.hpp"
#include "graphreg/phantom.hpp"
#include "graphreg/vecops.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace graphreg;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct CommonOptions {
    std::string config_path;
    std::string preset = "table1_ct";
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string rule = "both";
    std::string scale = "ci";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "INI configuration file");
    cmd->add_option("--preset", o.preset, "Built-in configuration when --config is absent")
        ->check(CLI::IsMember({"table1_ct", "table2_pr"}));
    cmd->add_option("--seed", o.seed, "Seed for phantom and noise");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--rule", o.rule, "Stopping rule")->check(CLI::IsMember({"statistical", "heuristic", "both"}));
    cmd->add_option("--scale", o.scale, "ci uses the small image side, paper the full one")
        ->check(CLI::IsMember({"ci", "paper"}));
}

ExperimentConfig resolve_config(const CommonOptions& o) {
    ExperimentConfig c = o.config_path.empty()
                             ? (o.preset == "table2_pr" ? preset_table2_pr() : preset_table1_ct())
                             : load_config(o.config_path);
    c = c.at_scale(parse_scale(o.scale));
    if (o.seed) c = c.with_seed(*o.seed);
    if (o.rule != "both") c = c.with_rule(parse_stopping_kind(o.rule));
    if (!o.out.empty()) c.output_dir = o.out;
    c.validate();
    return c;
}

void print_warnings(const SummaryRow& row) {
    for (const auto& w : row.warnings) {
        std::cerr << "warning [m=" << row.m << ' ' << to_string(row.initializer) << ' ' << to_string(row.rule)
                  << "]: " << w << '\n';
    }
}

void print_row(const SummaryRow& r) {
    if (r.status == "failed") {
        std::printf("m=%-4zu %-4s %-11s FAILED  %s\n", r.m, std::string(to_string(r.initializer)).c_str(),
                    std::string(to_string(r.rule)).c_str(), r.error.c_str());
        return;
    }
    std::printf("m=%-4zu %-4s %-11s iter=%-4zu %-13s rre=%.4f psnr=%.2f ssim=%.4f\n", r.m,
                std::string(to_string(r.initializer)).c_str(), std::string(to_string(r.rule)).c_str(), r.stop_iter,
                std::string(to_string(r.stop_reason)).c_str(), r.metrics.rre, r.metrics.psnr_rmse, r.metrics.ssim);
}

int cmd_phantom(const std::string& kind, std::size_t size, std::uint64_t seed, double density, const std::string& out) {
    const Image img = parse_phantom_kind(kind) == PhantomKind::SheppLogan ? phantom_shepp_logan(size)
                                                                          : phantom_binary_blobs(size, seed, density);
    write_pgm16(img, out);
    std::printf("wrote %s (%zux%zu)\n", out.c_str(), size, size);
    return kExitOk;
}

int cmd_simulate(const CommonOptions& o, std::size_t m) {
    const ExperimentConfig c = resolve_config(o);
    const ProblemSetup setup = make_setup(c);
    const MeasurementEnsemble ens = generate_measurements(setup.clean, m, c.noise);
    const fs::path dir = c.output_dir;
    write_pgm16(setup.truth, dir / "truth.pgm");
    write_sinogram_csv(setup.clean, dir / "clean.csv");
    for (std::size_t i = 0; i < m; ++i) {
        write_sinogram_csv(ens.samples()[i], dir / ("sample_" + std::to_string(i) + ".csv"));
    }
    std::ostringstream meta;
    meta << "m," << m << "\nz_m," << format_double(ens.z_m()) << "\nmean_error,"
         << format_double(vec::distance(ens.mean().values, setup.clean.values)) << "\n";
    write_text_file(dir / "ensemble.csv", meta.str());
    std::printf("wrote %zu samples to %s (z_m = %.6g)\n", m, dir.string().c_str(), ens.z_m());
    return kExitOk;
}

std::vector<Sinogram> read_samples(const fs::path& dir) {
    std::vector<Sinogram> samples;
    for (std::size_t i = 0;; ++i) {
        const fs::path p = dir / ("sample_" + std::to_string(i) + ".csv");
        if (!fs::exists(p)) break;
        samples.push_back(read_sinogram_csv(p));
    }
    if (samples.empty()) {
        throw IoError("no sample_<i>.csv files in " + dir.string());
    }
    return samples;
}

int cmd_reconstruct(const CommonOptions& o, std::size_t m, const std::string& init, const std::string& data_dir) {
    CommonOptions single = o;
    if (single.rule == "both") single.rule = "statistical";
    const ExperimentConfig c = resolve_config(single);
    const ProblemSetup setup = make_setup(c);

    ScaledData data;
    if (data_dir.empty()) {
        data = simulate_data(setup, m, c.noise);
    } else {
        const MeasurementEnsemble ens(read_samples(data_dir));
        if (!same_shape(ens.mean(), setup.clean)) {
            throw DimensionError("sample shape does not match the configured geometry");
        }
        data.v_hat = ens.mean();
        vec::scale(setup.data_scale, data.v_hat.values);
        data.z_m = ens.z_m() * setup.data_scale;
        data.m = ens.m();
    }
    const SingleRun r = run_single(setup, data, c, parse_initializer_kind(init), c.stopping.front());
    const fs::path dir = c.output_dir;
    write_text_file(dir / trace_file_name(r.row), trace_csv(r.trace));
    write_pgm16(r.reported, dir / image_file_name(r.row));
    ExperimentSummary s;
    s.problem = c.problem;
    s.image_size = c.image_size;
    s.rows.push_back(r.row);
    write_text_file(dir / "summary.csv", summary_csv(s));
    print_warnings(r.row);
    print_row(r.row);
    return r.row.status == "diverged" ? kExitDiverged : kExitOk;
}

int cmd_experiment(const CommonOptions& o, unsigned threads) {
    const ExperimentConfig c = resolve_config(o);
    ExperimentOptions opts;
    opts.threads = threads;
    const ExperimentResult result = run_experiment(c, opts);
    emit_outputs(result, c.output_dir);
    write_text_file(c.output_dir / "config.ini", config_to_ini(c));
    for (const auto& row : result.summary.rows) {
        print_warnings(row);
        print_row(row);
    }
    std::printf("outputs in %s\n", c.output_dir.string().c_str());
    return any_diverged(result.summary) ? kExitDiverged : kExitOk;
}

int cmd_metrics(const std::string& estimate, const std::string& truth) {
    const MetricReport r = evaluate(read_pgm16(estimate), read_pgm16(truth));
    std::printf("rre,psnr,psnr_rmse,ssim\n%s,%s,%s,%s\n", format_double(r.rre).c_str(), format_double(r.psnr).c_str(),
                format_double(r.psnr_rmse).c_str(), format_double(r.ssim).c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-Laplacian regularized reconstruction from repeated measurements"};
    app.require_subcommand(1);

    auto* phantom = app.add_subcommand("phantom", "Write a phantom image as 16-bit PGM");
    std::string phantom_kind = "shepp_logan";
    std::size_t phantom_size = 128;
    std::uint64_t phantom_seed = 1;
    double phantom_density = 0.5;
    std::string phantom_out = "phantom.pgm";
    phantom->add_option("--kind", phantom_kind)->check(CLI::IsMember({"shepp_logan", "binary_blobs"}));
    phantom->add_option("--size", phantom_size);
    phantom->add_option("--seed", phantom_seed);
    phantom->add_option("--density", phantom_density);
    phantom->add_option("--out", phantom_out);

    CommonOptions sim_opts;
    std::size_t sim_m = 10;
    auto* simulate = app.add_subcommand("simulate", "Generate a noisy measurement ensemble");
    add_common(simulate, sim_opts);
    simulate->add_option("-m,--m", sim_m, "Ensemble size")->check(CLI::PositiveNumber);

    CommonOptions rec_opts;
    std::size_t rec_m = 10;
    std::string rec_init = "tik";
    std::string rec_data;
    auto* reconstruct = app.add_subcommand("reconstruct", "Single reconstruction");
    add_common(reconstruct, rec_opts);
    reconstruct->add_option("-m,--m", rec_m, "Ensemble size")->check(CLI::PositiveNumber);
    reconstruct->add_option("--init", rec_init)->check(CLI::IsMember({"fbp", "tik", "tv"}));
    reconstruct->add_option("--data", rec_data, "Directory with sample_<i>.csv from simulate");

    CommonOptions exp_opts;
    unsigned exp_threads = 0;
    auto* experiment = app.add_subcommand("experiment", "Full sweep over m, initializer and rule");
    add_common(experiment, exp_opts);
    experiment->add_option("--threads", exp_threads, "Worker threads (0 = all cores)");

    std::string met_estimate, met_truth;
    auto* metrics = app.add_subcommand("metrics", "Compare two PGM images");
    metrics->add_option("estimate", met_estimate)->required();
    metrics->add_option("truth", met_truth)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*phantom) return cmd_phantom(phantom_kind, phantom_size, phantom_seed, phantom_density, phantom_out);
        if (*simulate) return cmd_simulate(sim_opts, sim_m);
        if (*reconstruct) return cmd_reconstruct(rec_opts, rec_m, rec_init, rec_data);
        if (*experiment) return cmd_experiment(exp_opts, exp_threads);
        if (*metrics) return cmd_metrics(met_estimate, met_truth);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const PolicyError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
