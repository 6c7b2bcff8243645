#include "tfwave/config.hpp"

#include "tfwave/common.hpp"
#include "tfwave/report_io.hpp"
#include "tfwave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace tfwave {

namespace {

const std::set<std::string> kKnownKeys = {
    "signal.kind",      "signal.mode",
    "window.kind",
    "grid.T",           "grid.N",
    "weight.kind",
    "lattice.alpha",    "lattice.beta",     "lattice.radius",   "lattice.indexRadius",
    "partition.K",      "partition.offset",
    "shells.r0",        "shells.rho",       "shells.J",
    "classify.lambdaReg", "classify.floorRel",
    "perturb.eps0",     "perturb.c",        "perturb.seed",     "perturb.bumpHalfwidth",
    "nsgt.side",        "nsgt.alpha",       "nsgt.betas",       "nsgt.beta",
    "nsgt.alphas",      "nsgt.halfwidth",   "nsgt.radius",      "nsgt.indexRadius",
    "frame.probeN",     "frame.probeT",
    "stability.against", "stability.denseStep",
    "output.prefix",
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
        if (kKnownKeys.find(section + "." + key) == kKnownKeys.end())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + section +
                              "." + key + "'");
        cfg.sections_[section][key] = Value{val, lineno};
    }
    return cfg;
}

std::string ConfigFile::where(const std::string& section, const std::string& key) const {
    return origin_ + ": [" + section + "] " + key;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.find(key) != s->second.end();
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second.text;
}

std::string ConfigFile::require_string(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw ConfigError(where(section, key) + " is required");
    return sections_.at(section).at(key).text;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(sections_.at(section).at(key).text);
    } catch (const std::exception&) {
        throw ConfigError(where(section, key) + ": not a number");
    }
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stoi(sections_.at(section).at(key).text);
    } catch (const std::exception&) {
        throw ConfigError(where(section, key) + ": not an integer");
    }
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stoull(sections_.at(section).at(key).text);
    } catch (const std::exception&) {
        throw ConfigError(where(section, key) + ": not an integer");
    }
}

// --- runner ---------------------------------------------------------------------

namespace {

Window parse_window(const std::string& spec) {
    if (spec.rfind("gauss:", 0) == 0) return Window::gaussian(std::stod(spec.substr(6)));
    if (spec == "gauss") return Window::gaussian(1.0);
    if (spec.rfind("bump:", 0) == 0) return Window::bump(std::stod(spec.substr(5)));
    throw ConfigError("unknown window spec '" + spec + "' (expected gauss:<sigma> or bump:<h>)");
}

struct Experiment {
    ConfigFile cfg;
    GridSpec grid;
    Window window = Window::gaussian(1.0);
    WeightFunction weight = WeightFunction::log_weight();
    std::string out_dir;
    std::string prefix;

    std::string out_path(const std::string& name) const {
        return (std::filesystem::path(out_dir) / (prefix + name)).string();
    }
};

Experiment make_experiment(const RunOptions& opts) {
    Experiment ex;
    ex.cfg = ConfigFile::parse_file(opts.config_path);
    ex.grid.T = ex.cfg.get_double("grid", "T", 40.0);
    ex.grid.N = ex.cfg.get_int("grid", "N", 4096);
    validate_grid(ex.grid);
    ex.window = parse_window(ex.cfg.get_string("window", "kind", "gauss:1.0"));
    ex.weight = parse_weight(ex.cfg.get_string("weight", "kind", "log"));
    ex.out_dir = opts.out_dir;
    ex.prefix = ex.cfg.get_string("output", "prefix", "");
    std::filesystem::create_directories(ex.out_dir);
    return ex;
}

CoefficientOracle make_oracle(const Experiment& ex) {
    const std::string spec = ex.cfg.require_string("signal", "kind");
    const std::string mode = ex.cfg.get_string("signal", "mode", "auto");
    if (spec.rfind("csv:", 0) == 0)
        return CoefficientOracle::quadrature(load_signal_csv(spec.substr(4)), ex.window);
    const SignalFamily fam = parse_family(spec);
    if (mode == "closed") return CoefficientOracle::closed_form(fam, ex.window);
    if (mode == "quadrature") {
        if (!fam.square_integrable() && fam.kind != SignalFamily::Kind::Chirp)
            throw ConfigError("signal '" + spec + "' has no quadrature mode (not in L2)");
        SampledSignal f = SampledSignal::from_function(ex.grid, [&](double t) {
            switch (fam.kind) {
            case SignalFamily::Kind::Chirp:
                return cplx(std::cos(0.5 * fam.chirp_rate * t * t),
                            std::sin(0.5 * fam.chirp_rate * t * t));
            case SignalFamily::Kind::Gaussian:
                return cplx(std::exp(-0.5 * t * t / (fam.sigma * fam.sigma)), 0.0);
            case SignalFamily::Kind::Hermite:
                return cplx(hermite_poly(fam.hermite_k, t) * std::exp(-0.5 * t * t), 0.0);
            default:
                return cplx(0.0, 0.0);
            }
        });
        return CoefficientOracle::quadrature(std::move(f), ex.window);
    }
    if (mode != "auto") throw ConfigError("signal.mode must be auto, closed or quadrature");
    return generate(fam, ex.grid, ex.window);
}

GaborSystem make_gabor(const Experiment& ex) {
    GaborSystem sys;
    sys.window = ex.window;
    sys.lattice.alpha = ex.cfg.get_double("lattice", "alpha", 0.5);
    sys.lattice.beta = ex.cfg.get_double("lattice", "beta", 0.5);
    sys.lattice.index_radius = ex.cfg.get_int("lattice", "indexRadius", 1 << 20);
    if (!(sys.lattice.alpha > 0.0) || !(sys.lattice.beta > 0.0))
        throw ConfigError("lattice steps must be > 0");
    return sys;
}

NSGSystemTime make_nsgt_time(const Experiment& ex) {
    NSGSystemTime sys;
    sys.window = Window::bump(ex.cfg.get_double("nsgt", "halfwidth", 0.9));
    sys.alpha = ex.cfg.get_double("nsgt", "alpha", 0.5);
    sys.betas = parse_steps(ex.cfg.get_string("nsgt", "betas", "const:0.4"));
    sys.index_radius = ex.cfg.get_int("nsgt", "indexRadius", 128);
    return sys;
}

NSGSystemFreq make_nsgt_freq(const Experiment& ex) {
    NSGSystemFreq sys;
    sys.spectrum_window = Window::bump(ex.cfg.get_double("nsgt", "halfwidth", 0.9));
    sys.beta = ex.cfg.get_double("nsgt", "beta", 0.5);
    sys.alphas = parse_steps(ex.cfg.get_string("nsgt", "alphas", "const:0.4"));
    sys.index_radius = ex.cfg.get_int("nsgt", "indexRadius", 128);
    return sys;
}

ConePartition make_partition(const Experiment& ex) {
    const int K = ex.cfg.get_int("partition", "K", 16);
    ConePartition part = ConePartition::centered(K);
    const std::string off = ex.cfg.get_string("partition", "offset", "centered");
    if (off != "centered") {
        try {
            part.offset = std::stod(off);
        } catch (const std::exception&) {
            throw ConfigError("partition.offset must be 'centered' or a number");
        }
    }
    return part;
}

ShellSpec make_shells(const Experiment& ex) {
    ShellSpec s;
    s.r0 = ex.cfg.get_double("shells", "r0", 2.0);
    s.rho = ex.cfg.get_double("shells", "rho", 1.3);
    s.J = ex.cfg.get_int("shells", "J", 10);
    if (!(s.r0 > 0.0) || !(s.rho > 1.0) || s.J < 6)
        throw ConfigError("shells need r0 > 0, rho > 1, J >= 6");
    return s;
}

WavefrontReport report_for(const Experiment& ex, const std::string& family_kind,
                           const RunOptions& opts) {
    const CoefficientOracle oracle = make_oracle(ex);
    const ConePartition part = make_partition(ex);
    const ShellSpec shells = make_shells(ex);
    const double lambda_reg = ex.cfg.get_double("classify", "lambdaReg", 4.0);
    const double floor_rel = ex.cfg.get_double("classify", "floorRel", 1e-13);
    const double radius = ex.cfg.get_double("lattice", "radius", shells.outer_radius() + 1.0);

    CoefficientGrid grid;
    if (family_kind == "stationary") {
        grid = gabor_coeffs(oracle, make_gabor(ex), radius);
    } else if (family_kind == "perturbed") {
        const double eps0 = ex.cfg.get_double("perturb", "eps0", 0.05);
        const double c = ex.cfg.get_double("perturb", "c", 4.0);
        const std::uint64_t seed =
            opts.seed ? *opts.seed : ex.cfg.get_u64("perturb", "seed", 1);
        const double hw = ex.cfg.get_double("perturb", "bumpHalfwidth", 0.0);
        const PerturbedFamily fam = make_perturbed_family(make_gabor(ex), ex.weight, eps0, c,
                                                          seed, radius, std::nullopt, hw);
        grid = fam.coeffs(oracle, radius);
    } else if (family_kind == "nsgt-time") {
        NSGSystemTime sys = make_nsgt_time(ex);
        grid = nsg_coeffs(oracle, sys, ex.cfg.get_double("nsgt", "radius", radius));
    } else if (family_kind == "nsgt-freq") {
        NSGSystemFreq sys = make_nsgt_freq(ex);
        grid = nsg_coeffs_freq(oracle, sys, ex.cfg.get_double("nsgt", "radius", radius));
    } else if (family_kind == "dense") {
        const double step = ex.cfg.get_double("stability", "denseStep", 0.25);
        grid = dense_stft_grid(oracle, step, radius);
    } else {
        throw ConfigError("unknown node family '" + family_kind + "'");
    }
    return wavefront_report(grid, ex.weight, part, shells, lambda_reg, floor_rel);
}

int dispatch(const std::string& command, const RunOptions& opts) {
    if (command == "render") {
        const CoefficientGrid grid = parse_coefficient_grid_csv(read_text_file(opts.input_csv));
        const std::string svg = render_heatmap(grid, opts.input_csv);
        write_text_file(opts.render_path.empty() ? opts.input_csv + ".svg" : opts.render_path, svg);
        return 0;
    }

    const Experiment ex = make_experiment(opts);

    if (command == "analyze") {
        const CoefficientOracle oracle = make_oracle(ex);
        const double radius = ex.cfg.get_double("lattice", "radius", 30.0);
        const CoefficientGrid grid = gabor_coeffs(oracle, make_gabor(ex), radius);
        write_text_file(ex.out_path("coefficients.csv"), coefficient_grid_csv(grid));
        if (!opts.render_path.empty())
            write_text_file(opts.render_path, render_heatmap(grid, "coefficients"));
        std::cout << ex.out_path("coefficients.csv") << " (" << grid.entries.size()
                  << " nodes, " << grid.omitted_nodes << " omitted)\n";
        return 0;
    }
    if (command == "frame-bounds") {
        GaborSystem sys = make_gabor(ex);
        GridSpec probe{ex.cfg.get_double("frame", "probeT", 8.0),
                       ex.cfg.get_int("frame", "probeN", 256)};
        const FrameEstimate est = frame_bounds_numeric(sys, probe);
        write_text_file(ex.out_path("frame.json"), frame_estimate_json(sys, est).dump(2) + "\n");
        std::cout << "A_est=" << est.A_est << " B_est=" << est.B_est << "\n";
        return 0;
    }
    if (command == "nsgt-check") {
        const std::string side = ex.cfg.get_string("nsgt", "side", "time");
        PainlessCertificate cert;
        if (side == "time")
            cert = painless_check_time(make_nsgt_time(ex));
        else if (side == "freq")
            cert = painless_check_freq(make_nsgt_freq(ex));
        else
            throw ConfigError("nsgt.side must be time or freq");
        write_text_file(ex.out_path("certificate.json"), certificate_json(cert).dump(2) + "\n");
        std::cout << (cert.is_frame ? "frame" : "not a frame") << " A=" << cert.A
                  << " B=" << cert.B << "\n";
        return 0;
    }
    if (command == "perturb") {
        GaborSystem sys = make_gabor(ex);
        const double radius = ex.cfg.get_double("lattice", "radius", 20.0);
        const double eps0 = ex.cfg.get_double("perturb", "eps0", 0.05);
        const double c = ex.cfg.get_double("perturb", "c", 4.0);
        const std::uint64_t seed = opts.seed ? *opts.seed : ex.cfg.get_u64("perturb", "seed", 1);
        const double hw = ex.cfg.get_double("perturb", "bumpHalfwidth", 0.0);
        GridSpec probe{ex.cfg.get_double("frame", "probeT", 8.0),
                       ex.cfg.get_int("frame", "probeN", 256)};
        const PerturbedFamily fam =
            make_perturbed_family(sys, ex.weight, eps0, c, seed, radius, probe, hw);
        PerturbationReport rep;
        const PerturbationEnergy energy = perturbation_energy(fam, radius);
        rep.epsilon = energy.value;
        rep.covered = energy.covered;
        rep.missing = energy.missing;
        const FrameEstimate est = frame_bounds_numeric(sys, probe);
        const ChristensenBounds cb = christensen_bounds(est.A_est, est.B_est, rep.epsilon);
        rep.christensen = cb.frame;
        rep.bessel = cb.bessel;
        for (double lambda : {0.0, 1.0, 2.0}) {
            PhaseGrid rel;
            rel.x_max = 10.0;
            rel.nx = 81;
            rel.xi_max = 60.0;
            rel.nxi = 241;
            const auto ws = weighted_perturbation_sum(fam, ex.weight, lambda, 0.0, radius, rel);
            rep.weighted_sums.emplace_back(lambda, 0.0, ws.value);
        }
        write_text_file(ex.out_path("perturbation.json"),
                        perturbation_report_json(rep).dump(2) + "\n");
        std::cout << "epsilon=" << rep.epsilon << " bessel=" << rep.bessel << "\n";
        return 0;
    }
    if (command == "wavefront") {
        const std::string family = ex.cfg.get_string("stability", "against", "stationary");
        const WavefrontReport rep = report_for(ex, family, opts);
        write_text_file(ex.out_path("wavefront.json"),
                        wavefront_report_json(rep).dump(2) + "\n");
        std::cout << "singular sectors:";
        for (int k : rep.singular_sectors()) std::cout << " " << k;
        std::cout << " (indeterminate " << rep.indeterminate_count() << ")\n";
        return 0;
    }
    if (command == "stability") {
        const std::string against = ex.cfg.require_string("stability", "against");
        const WavefrontReport a = report_for(ex, "stationary", opts);
        const WavefrontReport b = report_for(ex, against, opts);
        const ComparisonResult res = stability_compare(a, b);
        nlohmann::json j = comparison_json(res);
        j["baseline"] = wavefront_report_json(a);
        j["alternative"] = wavefront_report_json(b);
        j["against"] = against;
        write_text_file(ex.out_path("stability.json"), j.dump(2) + "\n");
        std::cout << (res.pass ? "PASS" : "FAIL") << " (indeterminate " << res.indeterminate_a
                  << "/" << res.indeterminate_b << ")\n";
        return 0;
    }
    throw ConfigError("unknown command '" + command + "'");
}

} // namespace

int run_command(const std::string& command, const RunOptions& opts) {
    try {
        return dispatch(command, opts);
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace tfwave
