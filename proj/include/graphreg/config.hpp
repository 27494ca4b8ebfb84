#pragma once

#include "graphreg/initializers.hpp"
#include "graphreg/measurement.hpp"
#include "graphreg/solver.hpp"
#include "graphreg/stopping.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace graphreg {

enum class Problem { XrayCt, PhaseRetrieval };
enum class PhantomKind { SheppLogan, BinaryBlobs };
/// `ci` runs at ci_image_size, `paper` at image_size.
enum class Scale { Ci, Paper };

[[nodiscard]] std::string_view to_string(Problem p) noexcept;
[[nodiscard]] std::string_view to_string(PhantomKind p) noexcept;
[[nodiscard]] Problem parse_problem(std::string_view text);
[[nodiscard]] PhantomKind parse_phantom_kind(std::string_view text);
[[nodiscard]] Scale parse_scale(std::string_view text);

struct ExperimentConfig {
    Problem problem = Problem::XrayCt;
    PhantomKind phantom = PhantomKind::SheppLogan;
    double blob_density = 0.5;
    std::size_t image_size = 128;
    std::size_t ci_image_size = 64;
    std::size_t n_angles = 60;
    /// 0 selects the automatic detector count.
    std::size_t n_detectors = 0;
    /// Rescale the system matrix to unit spectral norm before solving.
    /// Noise is always generated in physical line-integral units.
    bool normalize_operator = true;
    NoiseSpec noise{10.0, 0};
    std::vector<std::size_t> m_values{5, 10};
    std::vector<InitializerKind> initializers{InitializerKind::Tikhonov};
    InitializerSpec initializer;
    SolverParams solver;
    /// Per-m overrides of solver.max_iters.
    std::map<std::size_t, std::size_t> max_iters_by_m;
    std::vector<StoppingPolicy> stopping;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] std::size_t max_iters_for(std::size_t m) const;
    /// Copy with the image side chosen for `scale`.
    [[nodiscard]] ExperimentConfig at_scale(Scale scale) const;
    /// Keep only the stopping rules of the given kind.
    [[nodiscard]] ExperimentConfig with_rule(StoppingKind kind) const;
    /// Reseeds both the phantom and the noise.
    [[nodiscard]] ExperimentConfig with_seed(std::uint64_t seed) const;
};

/// Parses INI text: sections [experiment], [noise], [initializer],
/// [solver], [stopping]. Unknown keys are rejected. Throws ConfigError.
[[nodiscard]] ExperimentConfig parse_config(const std::string& text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] std::string config_to_ini(const ExperimentConfig& config);

/// Built-in presets matching configs/table1_ct.ini and configs/table2_pr.ini.
[[nodiscard]] ExperimentConfig preset_table1_ct();
[[nodiscard]] ExperimentConfig preset_table2_pr();

}  // namespace graphreg
