// Batch front-end: every subcommand reads a config file and writes its
// artifacts (JSON / CSV / SVG) into the output directory.

#include "tfwave/config.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"time-frequency wave front analysis"};
    app.require_subcommand(1);

    tfwave::RunOptions opts;
    std::string seed_str;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", opts.config_path, "config file")->required();
        sub->add_option("--out", opts.out_dir, "output directory (default: out)");
        sub->add_option("--seed", seed_str, "override [perturb] seed");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "write a Gabor coefficient grid");
    add_common(analyze, true);
    analyze->add_option("--render", opts.render_path, "also write an SVG heatmap");

    add_common(app.add_subcommand("frame-bounds", "empirical frame bounds on a probe grid"), true);
    add_common(app.add_subcommand("nsgt-check", "painless certificate for an adaptive system"),
               true);
    add_common(app.add_subcommand("perturb", "perturbation energy and Christensen bounds"), true);
    add_common(app.add_subcommand("wavefront", "wave front report for one node family"), true);
    add_common(app.add_subcommand("stability", "stationary-vs-alternative comparison"), true);

    CLI::App* render = app.add_subcommand("render", "coefficient CSV to SVG heatmap");
    render->add_option("--in", opts.input_csv, "coefficient CSV")->required();
    render->add_option("--out-file", opts.render_path, "SVG path (default: <in>.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // flag/usage problems are validation failures
    }

    if (!seed_str.empty()) {
        try {
            opts.seed = std::stoull(seed_str);
        } catch (const std::exception&) {
            std::fprintf(stderr, "error: --seed must be an unsigned integer\n");
            return 2;
        }
    }
    return tfwave::run_command(app.get_subcommands().front()->get_name(), opts);
}
