#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphreg/config.hpp"
#include "graphreg/errors.hpp"
#include "graphreg/experiment.hpp"
#include "graphreg/io.hpp"
#include "graphreg/metrics.hpp"
#include "graphreg/phantom.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

using namespace graphreg;
namespace fs = std::filesystem;

namespace {

const char* kSmallCt = R"(
[experiment]
problem = xray_ct
phantom = shepp_logan
image_size = 32
ci_image_size = 24
n_angles = 20
m_values = 5, 10
seed = 3

[noise]
epsilon = 10

[initializer]
kinds = fbp, tik, tv
inner_iters = 60
gcv_probes = 4

[solver]
max_iters = 30
max_iters_by_m = 10:40

[stopping]
rules = statistical, heuristic
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("graphreg_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GRAPHREG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("Shepp-Logan phantom") {
    const Image u = phantom_shepp_logan(128);
    CHECK(u.width == 128);
    CHECK(u.at(0, 0) == 0.0);
    CHECK(u.at(0, 127) == 0.0);
    CHECK(u.at(127, 0) == 0.0);
    CHECK(u.at(127, 127) == 0.0);
    CHECK(*std::max_element(u.values.begin(), u.values.end()) == 1.0);
    for (double v : u.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    // Only the three small bottom ellipses break left-right symmetry; rows
    // above them mirror exactly.
    for (std::size_t r = 0; r < 64; ++r)
        for (std::size_t c = 0; c < 128; ++c) {
            const double x = -1.0 + (c + 0.5) * 2.0 / 128, y = 1.0 - (r + 0.5) * 2.0 / 128;
            bool asym = false;
            for (const auto& e : shepp_logan_ellipses()) {
                if (e.center_x == 0.0 && e.angle_deg == 0.0) continue;
                asym = asym || e.contains(x, y) || e.contains(-x, y);
            }
            if (!asym) CHECK(u.at(r, c) == u.at(r, 127 - c));
        }
    CHECK(phantom_shepp_logan(64) == phantom_shepp_logan(64));
    CHECK_THROWS_AS(phantom_shepp_logan(15), ConfigError);
}

TEST_CASE("binary blobs phantom") {
    for (double density : {0.3, 0.5}) {
        const Image u = phantom_binary_blobs(128, 7, density);
        double ones = 0.0;
        for (double v : u.values) {
            CHECK((v == 0.0 || v == 1.0));
            ones += v;
        }
        CHECK(std::abs(ones / 16384.0 - density) <= 0.05);
    }
    CHECK(phantom_binary_blobs(64, 1) == phantom_binary_blobs(64, 1));
    CHECK_FALSE(phantom_binary_blobs(64, 1) == phantom_binary_blobs(64, 2));
    CHECK_THROWS_AS(phantom_binary_blobs(8, 1), ConfigError);
}

TEST_CASE("configuration parsing") {
    const ExperimentConfig c = parse_config(kSmallCt);
    CHECK(c.image_size == 32);
    CHECK(c.m_values == std::vector<std::size_t>{5, 10});
    CHECK(c.initializers.size() == 3);
    CHECK(c.stopping.size() == 2);
    CHECK(c.max_iters_for(5) == 30);
    CHECK(c.max_iters_for(10) == 40);
    CHECK(c.at_scale(Scale::Ci).image_size == 24);
    CHECK(c.at_scale(Scale::Paper).image_size == 32);
    CHECK(c.with_rule(StoppingKind::Heuristic).stopping.size() == 1);

    const ExperimentConfig back = parse_config(config_to_ini(c));
    CHECK(config_to_ini(back) == config_to_ini(c));

    CHECK_THROWS_AS(parse_config("[solver]\nzeta2 = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[extra]\na = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[experiment]\nimage_size = 8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[experiment]\nm_values = 1\n[stopping]\nrules = statistical\n"), ConfigError);
    CHECK_NOTHROW(parse_config("[experiment]\nm_values = 1\n[stopping]\nrules = heuristic\n"));
    CHECK_THROWS_AS(parse_config("[solver]\nzeta0 = abc\n"), ConfigError);

    const ExperimentConfig t1 = preset_table1_ct(), t2 = preset_table2_pr();
    CHECK(t1.problem == Problem::XrayCt);
    CHECK(t1.image_size == 128);
    CHECK(t1.n_angles == 60);
    CHECK(t1.m_values == std::vector<std::size_t>{5, 10, 50, 100});
    CHECK(t1.stopping.at(0).tau_coeff == 2.0);
    CHECK(t1.stopping.at(1).varrho == 100.0);
    CHECK(t2.problem == Problem::PhaseRetrieval);
    CHECK(t2.phantom == PhantomKind::BinaryBlobs);
    CHECK(t2.stopping.at(0).tau_coeff == 3.0);
    CHECK(t2.stopping.at(1).varrho == 1000.0);
    for (const char* name : {"table1_ct.ini", "table2_pr.ini"}) {
        const fs::path p = fs::path(GRAPHREG_SOURCE_DIR) / "configs" / name;
        const ExperimentConfig f = load_config(p);
        const ExperimentConfig& preset = std::string(name) == "table1_ct.ini" ? t1 : t2;
        CHECK(config_to_ini(f) == config_to_ini(preset));
    }
}

TEST_CASE("experiment harness") {
    const ExperimentConfig c = parse_config(kSmallCt);
    ExperimentOptions opts;
    opts.threads = 1;
    const ExperimentResult r = run_experiment(c, opts);
    REQUIRE(r.summary.rows.size() == 12);
    REQUIRE(r.traces.size() == 12);

    std::size_t i = 0;
    for (std::size_t m : {5u, 10u})
        for (auto init : {InitializerKind::FBP, InitializerKind::Tikhonov, InitializerKind::TV})
            for (auto rule : {StoppingKind::Statistical, StoppingKind::Heuristic}) {
                const SummaryRow& row = r.summary.rows[i];
                CHECK(row.m == m);
                CHECK(row.initializer == init);
                CHECK(row.rule == rule);
                CHECK(row.status == "ok");
                CHECK(row.max_iters == c.max_iters_for(m));
                CHECK(r.traces[i].records.size() == row.iterations + 1);
                CHECK(count_lines(trace_csv(r.traces[i])) == row.iterations + 2);
                CHECK(row.metrics.rre == doctest::Approx(rre(r.images[i], r.truth)).epsilon(1e-14));
                ++i;
            }

    const std::string csv = summary_csv(r.summary);
    CHECK(csv.rfind(summary_header(), 0) == 0);
    CHECK(count_lines(csv) == 13);
    CHECK(summary_csv(ExperimentSummary{}) == summary_header() + "\n");

    const fs::path dir = scratch_dir("emit");
    emit_outputs(r, dir);
    CHECK(slurp(dir / "summary.csv") == csv);
    CHECK(fs::exists(dir / "timing.csv"));
    const Image truth = read_pgm16(dir / "truth.pgm");
    CHECK(truth.width == 32);
    for (std::size_t k = 0; k < r.summary.rows.size(); ++k) {
        const SummaryRow& row = r.summary.rows[k];
        CHECK(slurp(dir / trace_file_name(row)) == trace_csv(r.traces[k]));
        const Image img = read_pgm16(dir / image_file_name(row));
        // 16-bit quantization only.
        for (std::size_t p = 0; p < img.size(); ++p) CHECK(std::abs(img.values[p] - r.images[k].values[p]) <= 1e-5);
        CHECK(rre(img, truth) == doctest::Approx(row.metrics.rre).epsilon(1e-3));
        CHECK(ssim(img, truth) == doctest::Approx(row.metrics.ssim).epsilon(1e-3));
    }

    SUBCASE("identical CSVs on a rerun with more threads") {
        ExperimentOptions more;
        more.threads = 3;
        const ExperimentResult again = run_experiment(c, more);
        CHECK(summary_csv(again.summary) == csv);
        for (std::size_t k = 0; k < r.traces.size(); ++k) CHECK(trace_csv(again.traces[k]) == trace_csv(r.traces[k]));
    }
}

TEST_CASE("PGM round trip") {
    const Image u = phantom_binary_blobs(33, 4);
    const fs::path p = scratch_dir("pgm") / "u.pgm";
    write_pgm16(u, p);
    CHECK(read_pgm16(p) == u);
    Image g(5, 3);
    std::iota(g.values.begin(), g.values.end(), 0.0);
    for (double& v : g.values) v /= 14.0;
    write_pgm16(g, p);
    const Image back = read_pgm16(p);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(back.values[i] - g.values[i]) <= 0.5 / 65535 + 1e-15);
    CHECK_THROWS_AS(read_pgm16(p.parent_path() / "missing.pgm"), IoError);
}

TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch_dir("exit");
    const fs::path ini = dir / "small.ini";
    {
        std::ofstream(ini) << kSmallCt;
    }
    CHECK(run_cli("phantom --kind shepp_logan --size 32 --out " + (dir / "p.pgm").string()) == 0);
    CHECK(fs::exists(dir / "p.pgm"));
    CHECK(run_cli("--bogus") == 2);
    CHECK(run_cli("reconstruct --init nope") == 2);
    {
        std::ofstream(dir / "bad.ini") << "[solver]\nunknown_key = 1\n";
    }
    CHECK(run_cli("experiment --config " + (dir / "bad.ini").string()) == 2);
    CHECK(run_cli("simulate -m 3 --scale paper --config " + ini.string() + " --out " + (dir / "sim").string()) == 0);
    CHECK(fs::exists(dir / "sim" / "sample_2.csv"));
    CHECK(run_cli("reconstruct -m 3 --init tik --rule heuristic --scale paper --config " + ini.string() + " --data " +
                  (dir / "sim").string() + " --out " + (dir / "rec").string()) == 0);
    CHECK(count_lines(slurp(dir / "rec" / "summary.csv")) == 2);
    CHECK(run_cli("metrics " + (dir / "p.pgm").string() + " " + (dir / "p.pgm").string()) == 0);
    CHECK(run_cli("metrics " + (dir / "nothere.pgm").string() + " " + (dir / "p.pgm").string()) == 1);
}
