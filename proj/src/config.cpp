#include "graphreg/config.hpp"

#include "graphreg/errors.hpp"
#include "graphreg/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace graphreg {

namespace pt = boost::property_tree;

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (trim(s.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("config: '" + key + "' expects a number, got '" + s + "'");
}

std::uint64_t to_uint(const std::string& key, const std::string& s) {
    const std::string t = trim(s);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ConfigError("config: '" + key + "' expects a nonnegative integer, got '" + s + "'");
    }
    try {
        return std::stoull(t);
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' is out of range");
    }
}

bool to_bool(const std::string& key, const std::string& s) {
    const std::string t = lower(trim(s));
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("config: '" + key + "' expects true/false, got '" + s + "'");
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

}  // namespace

std::string_view to_string(Problem p) noexcept { return p == Problem::XrayCt ? "xray_ct" : "phase_retrieval"; }

std::string_view to_string(PhantomKind p) noexcept {
    return p == PhantomKind::SheppLogan ? "shepp_logan" : "binary_blobs";
}

Problem parse_problem(std::string_view text) {
    const std::string t = lower(text);
    if (t == "xray_ct" || t == "ct") return Problem::XrayCt;
    if (t == "phase_retrieval" || t == "pr") return Problem::PhaseRetrieval;
    throw ConfigError("unknown problem '" + std::string(text) + "'");
}

PhantomKind parse_phantom_kind(std::string_view text) {
    const std::string t = lower(text);
    if (t == "shepp_logan") return PhantomKind::SheppLogan;
    if (t == "binary_blobs") return PhantomKind::BinaryBlobs;
    throw ConfigError("unknown phantom '" + std::string(text) + "'");
}

Scale parse_scale(std::string_view text) {
    const std::string t = lower(text);
    if (t == "ci") return Scale::Ci;
    if (t == "paper") return Scale::Paper;
    throw ConfigError("unknown scale '" + std::string(text) + "' (expected ci or paper)");
}

void ExperimentConfig::validate() const {
    if (image_size < 16 || ci_image_size < 16) {
        throw ConfigError("config: image sizes must be >= 16");
    }
    if (n_angles == 0) {
        throw ConfigError("config: n_angles must be positive");
    }
    if (!(noise.epsilon >= 0.0)) {
        throw ConfigError("config: noise epsilon must be >= 0");
    }
    if (m_values.empty()) {
        throw ConfigError("config: m_values must not be empty");
    }
    for (std::size_t m : m_values) {
        if (m == 0) throw ConfigError("config: m values must be positive");
    }
    if (initializers.empty()) {
        throw ConfigError("config: at least one initializer is required");
    }
    if (stopping.empty()) {
        throw ConfigError("config: at least one stopping rule is required");
    }
    if (!(blob_density > 0.0 && blob_density < 1.0)) {
        throw ConfigError("config: blob_density must lie in (0, 1)");
    }
    initializer.validate();
    solver.validate();
    for (const auto& [m, iters] : max_iters_by_m) {
        if (iters < 1) throw ConfigError("config: max_iters override must be >= 1");
    }
    for (const auto& s : stopping) {
        s.validate();
        if (s.kind == StoppingKind::Statistical) {
            for (std::size_t m : m_values) {
                if (m < 2) throw ConfigError("config: the statistical rule needs every m >= 2");
            }
        }
    }
}

std::size_t ExperimentConfig::max_iters_for(std::size_t m) const {
    const auto it = max_iters_by_m.find(m);
    return it != max_iters_by_m.end() ? it->second : solver.max_iters;
}

ExperimentConfig ExperimentConfig::at_scale(Scale scale) const {
    ExperimentConfig c = *this;
    if (scale == Scale::Ci) c.image_size = ci_image_size;
    return c;
}

ExperimentConfig ExperimentConfig::with_rule(StoppingKind kind) const {
    ExperimentConfig c = *this;
    c.stopping.erase(std::remove_if(c.stopping.begin(), c.stopping.end(),
                                    [&](const StoppingPolicy& p) { return p.kind != kind; }),
                     c.stopping.end());
    if (c.stopping.empty()) {
        throw ConfigError("config: requested rule '" + std::string(to_string(kind)) + "' is not configured");
    }
    return c;
}

ExperimentConfig ExperimentConfig::with_seed(std::uint64_t s) const {
    ExperimentConfig c = *this;
    c.seed = s;
    c.noise.seed = s;
    return c;
}

ExperimentConfig parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    static const std::map<std::string, std::set<std::string>> allowed = {
        {"experiment",
         {"problem", "phantom", "blob_density", "image_size", "ci_image_size", "n_angles", "n_detectors", "m_values",
          "seed", "output_dir", "normalize_operator"}},
        {"noise", {"epsilon"}},
        {"initializer", {"kinds", "theta_grid", "inner_iters", "gcv_probes", "gcv_seed", "tv_smoothing"}},
        {"solver",
         {"zeta0", "zeta1", "nu0", "nu1", "nu2", "max_iters", "max_iters_by_m", "graph_radius", "graph_lambda",
          "graph_rebuild_every"}},
        {"stopping", {"rules", "tau_coeff", "tau_exponent", "varrho"}},
    };
    for (const auto& [section, body] : tree) {
        const auto it = allowed.find(section);
        if (it == allowed.end()) {
            throw ConfigError("config: unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) {
                throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            }
        }
    }

    ExperimentConfig c;
    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return trim(*v);
        return std::nullopt;
    };

    if (auto v = get("experiment.problem")) c.problem = parse_problem(*v);
    c.phantom = c.problem == Problem::XrayCt ? PhantomKind::SheppLogan : PhantomKind::BinaryBlobs;
    if (auto v = get("experiment.phantom")) c.phantom = parse_phantom_kind(*v);
    if (auto v = get("experiment.blob_density")) c.blob_density = to_double("blob_density", *v);
    if (auto v = get("experiment.image_size")) c.image_size = to_uint("image_size", *v);
    if (auto v = get("experiment.ci_image_size")) c.ci_image_size = to_uint("ci_image_size", *v);
    if (auto v = get("experiment.n_angles")) c.n_angles = to_uint("n_angles", *v);
    if (auto v = get("experiment.n_detectors")) c.n_detectors = to_uint("n_detectors", *v);
    if (auto v = get("experiment.normalize_operator")) c.normalize_operator = to_bool("normalize_operator", *v);
    if (auto v = get("experiment.m_values")) {
        c.m_values.clear();
        for (const auto& item : split_list(*v)) c.m_values.push_back(to_uint("m_values", item));
    }
    if (auto v = get("experiment.seed")) c = c.with_seed(to_uint("seed", *v));
    if (auto v = get("experiment.output_dir")) c.output_dir = *v;

    if (auto v = get("noise.epsilon")) c.noise.epsilon = to_double("epsilon", *v);

    if (auto v = get("initializer.kinds")) {
        c.initializers.clear();
        for (const auto& item : split_list(*v)) c.initializers.push_back(parse_initializer_kind(item));
    }
    if (auto v = get("initializer.theta_grid")) {
        for (const auto& item : split_list(*v)) c.initializer.theta_grid.push_back(to_double("theta_grid", item));
    }
    if (auto v = get("initializer.inner_iters")) c.initializer.inner_iters = static_cast<int>(to_uint("inner_iters", *v));
    if (auto v = get("initializer.gcv_probes")) c.initializer.gcv_probes = static_cast<int>(to_uint("gcv_probes", *v));
    if (auto v = get("initializer.gcv_seed")) c.initializer.gcv_seed = to_uint("gcv_seed", *v);
    if (auto v = get("initializer.tv_smoothing")) c.initializer.tv_smoothing = to_double("tv_smoothing", *v);

    if (auto v = get("solver.zeta0")) c.solver.zeta0 = to_double("zeta0", *v);
    if (auto v = get("solver.zeta1")) c.solver.zeta1 = to_double("zeta1", *v);
    if (auto v = get("solver.nu0")) c.solver.nu0 = to_double("nu0", *v);
    if (auto v = get("solver.nu1")) c.solver.nu1 = to_double("nu1", *v);
    if (auto v = get("solver.nu2")) c.solver.nu2 = to_double("nu2", *v);
    if (auto v = get("solver.max_iters")) c.solver.max_iters = to_uint("max_iters", *v);
    if (auto v = get("solver.max_iters_by_m")) {
        for (const auto& item : split_list(*v)) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw ConfigError("config: max_iters_by_m entries look like m:iters, got '" + item + "'");
            }
            c.max_iters_by_m[to_uint("max_iters_by_m", item.substr(0, colon))] =
                to_uint("max_iters_by_m", item.substr(colon + 1));
        }
    }
    if (auto v = get("solver.graph_radius")) c.solver.graph.radius = static_cast<int>(to_uint("graph_radius", *v));
    if (auto v = get("solver.graph_lambda")) c.solver.graph.lambda = to_double("graph_lambda", *v);
    if (auto v = get("solver.graph_rebuild_every")) {
        c.solver.graph_rebuild_every = to_uint("graph_rebuild_every", *v);
    }

    const bool pr = c.problem == Problem::PhaseRetrieval;
    double tau_coeff = pr ? 3.0 : 2.0;
    double tau_exponent = 0.5;
    double varrho = pr ? 1000.0 : 100.0;
    if (auto v = get("stopping.tau_coeff")) tau_coeff = to_double("tau_coeff", *v);
    if (auto v = get("stopping.tau_exponent")) tau_exponent = to_double("tau_exponent", *v);
    if (auto v = get("stopping.varrho")) varrho = to_double("varrho", *v);
    std::vector<std::string> rules{"statistical", "heuristic"};
    if (auto v = get("stopping.rules")) rules = split_list(*v);
    for (const auto& r : rules) {
        if (parse_stopping_kind(r) == StoppingKind::Statistical) {
            StoppingPolicy p;
            p.kind = StoppingKind::Statistical;
            p.tau_coeff = tau_coeff;
            p.tau_exponent = tau_exponent;
            c.stopping.push_back(p);
        } else {
            StoppingPolicy p;
            p.kind = StoppingKind::Heuristic;
            p.varrho = varrho;
            c.stopping.push_back(p);
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot read " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_ini(const ExperimentConfig& c) {
    std::ostringstream out;
    auto list_u = [](const std::vector<std::size_t>& v) {
        std::vector<std::string> s;
        for (auto x : v) s.push_back(std::to_string(x));
        return join(s);
    };
    out << "[experiment]\n"
        << "problem = " << to_string(c.problem) << "\n"
        << "phantom = " << to_string(c.phantom) << "\n"
        << "blob_density = " << format_double(c.blob_density) << "\n"
        << "image_size = " << c.image_size << "\n"
        << "ci_image_size = " << c.ci_image_size << "\n"
        << "n_angles = " << c.n_angles << "\n"
        << "n_detectors = " << c.n_detectors << "\n"
        << "normalize_operator = " << (c.normalize_operator ? "true" : "false") << "\n"
        << "m_values = " << list_u(c.m_values) << "\n"
        << "seed = " << c.seed << "\n"
        << "output_dir = " << c.output_dir.string() << "\n\n";
    out << "[noise]\nepsilon = " << format_double(c.noise.epsilon) << "\n\n";
    std::vector<std::string> kinds;
    for (auto k : c.initializers) kinds.emplace_back(to_string(k));
    out << "[initializer]\nkinds = " << join(kinds) << "\n";
    if (!c.initializer.theta_grid.empty()) {
        std::vector<std::string> g;
        for (double t : c.initializer.theta_grid) g.push_back(format_double(t));
        out << "theta_grid = " << join(g) << "\n";
    }
    out << "inner_iters = " << c.initializer.inner_iters << "\n"
        << "gcv_probes = " << c.initializer.gcv_probes << "\n"
        << "gcv_seed = " << c.initializer.gcv_seed << "\n"
        << "tv_smoothing = " << format_double(c.initializer.tv_smoothing) << "\n\n";
    out << "[solver]\n"
        << "zeta0 = " << format_double(c.solver.zeta0) << "\n"
        << "zeta1 = " << format_double(c.solver.zeta1) << "\n"
        << "nu0 = " << format_double(c.solver.nu0) << "\n"
        << "nu1 = " << format_double(c.solver.nu1) << "\n"
        << "nu2 = " << format_double(c.solver.nu2) << "\n"
        << "max_iters = " << c.solver.max_iters << "\n";
    if (!c.max_iters_by_m.empty()) {
        std::vector<std::string> o;
        for (const auto& [m, it] : c.max_iters_by_m) o.push_back(std::to_string(m) + ":" + std::to_string(it));
        out << "max_iters_by_m = " << join(o) << "\n";
    }
    out << "graph_radius = " << c.solver.graph.radius << "\n"
        << "graph_lambda = " << format_double(c.solver.graph.lambda) << "\n"
        << "graph_rebuild_every = " << c.solver.graph_rebuild_every << "\n\n";
    std::vector<std::string> rules;
    double tau_coeff = 2.0, tau_exponent = 0.5, varrho = 100.0;
    for (const auto& p : c.stopping) {
        rules.emplace_back(to_string(p.kind));
        if (p.kind == StoppingKind::Statistical) {
            tau_coeff = p.tau_coeff;
            tau_exponent = p.tau_exponent;
        } else {
            varrho = p.varrho;
        }
    }
    out << "[stopping]\nrules = " << join(rules) << "\n"
        << "tau_coeff = " << format_double(tau_coeff) << "\n"
        << "tau_exponent = " << format_double(tau_exponent) << "\n"
        << "varrho = " << format_double(varrho) << "\n";
    return out.str();
}

ExperimentConfig preset_table1_ct() {
    return parse_config(R"([experiment]
problem = xray_ct
phantom = shepp_logan
image_size = 128
ci_image_size = 64
n_angles = 60
m_values = 5, 10, 50, 100
seed = 1
output_dir = out/table1_ct

[noise]
epsilon = 10

[initializer]
kinds = fbp, tik, tv

[solver]
max_iters = 200
max_iters_by_m = 50:500, 100:500

[stopping]
rules = statistical, heuristic
tau_coeff = 2
tau_exponent = 0.5
varrho = 100
)");
}

ExperimentConfig preset_table2_pr() {
    return parse_config(R"([experiment]
problem = phase_retrieval
phantom = binary_blobs
blob_density = 0.5
image_size = 128
ci_image_size = 64
n_angles = 60
m_values = 5, 10
seed = 1
output_dir = out/table2_pr

[noise]
epsilon = 10

[initializer]
kinds = fbp, tik, tv

[solver]
max_iters = 300

[stopping]
rules = statistical, heuristic
tau_coeff = 3
tau_exponent = 0.5
varrho = 1000
)");
}

}  // namespace graphreg
