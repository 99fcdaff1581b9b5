// layervec command-line tool.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "layervec/commands.hpp"

namespace {

struct CommonFlags {
    std::string background = "#ffffff";
    std::string schedule;
    std::string config_file;
    std::string paths_list;  // eval only
};

// When `paths_as_list` is set the subcommand takes --paths as a comma list
// (eval's budget sweep); otherwise it is the single total budget.
void add_opt_flags(CLI::App* cmd, layervec::OptConfig& cfg, CommonFlags& common,
                   bool paths_as_list = false) {
    if (paths_as_list)
        cmd->add_option("--paths", common.paths_list, "Comma-separated path budgets to sweep")
            ->capture_default_str();
    else
        cmd->add_option("--paths", cfg.max_paths, "Total path budget")->capture_default_str();
    cmd->add_option("--schedule", common.schedule,
                    "Comma-separated per-stage path additions (overrides --paths)");
    cmd->add_option("--segments", cfg.segments, "Cubic segments per path")->capture_default_str();
    cmd->add_option("--radius", cfg.radius, "Init circle radius in pixels")->capture_default_str();
    cmd->add_option("--tau", cfg.tau, "Distance-weight threshold in pixels")->capture_default_str();
    cmd->add_option("--lambda", cfg.lambda, "Self-crossing loss weight (large values destabilize the fit)")->capture_default_str();
    cmd->add_option("--point-lr", cfg.point_lr, "Adam learning rate for control points")
        ->capture_default_str();
    cmd->add_option("--color-lr", cfg.color_lr, "Adam learning rate for colors")
        ->capture_default_str();
    cmd->add_option("--iters", cfg.iters_per_stage, "Iterations per stage")->capture_default_str();
    cmd->add_option("--sigma", cfg.sigma, "Anti-aliasing band half-width during optimization")
        ->capture_default_str();
    cmd->add_option("--background", common.background, "Canvas background, #rrggbb or r,g,b")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Random seed recorded in the manifest")
        ->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "Max internal parallelism (1 = reference output)")
        ->capture_default_str();
    cmd->add_option("--config", common.config_file,
                    "Flat key=value config file mirroring these flags");
}

// Flags beat the config file, which beats built-in defaults: a key from the
// file is applied only when its flag was not given on the command line.
int apply_config_file(CLI::App* cmd, layervec::OptConfig& cfg, CommonFlags& common) {
    if (common.config_file.empty()) return layervec::kExitOk;
    std::ifstream in(common.config_file);
    if (!in) {
        std::cerr << "config error: cannot open config file " << common.config_file << "\n";
        return layervec::kExitConfigError;
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto trim = [](std::string s) {
            const size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::cerr << "config error: " << common.config_file << ":" << line_no
                      << ": expected key=value\n";
            return layervec::kExitConfigError;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string flag = "--" + key;
        const CLI::Option* opt = nullptr;
        try {
            opt = cmd->get_option(flag);
        } catch (const CLI::OptionNotFound&) {
            std::cerr << "config error: unknown key '" << key << "' in " << common.config_file
                      << "\n";
            return layervec::kExitConfigError;
        }
        if (opt->count() > 0) continue;  // command line wins
        try {
            if (key == "paths") {
                if (cmd->get_name() == "eval") common.paths_list = value;
                else cfg.max_paths = std::stoi(value);
            } else if (key == "schedule") common.schedule = value;
            else if (key == "segments") cfg.segments = std::stoi(value);
            else if (key == "radius") cfg.radius = std::stod(value);
            else if (key == "tau") cfg.tau = std::stod(value);
            else if (key == "lambda") cfg.lambda = std::stod(value);
            else if (key == "point-lr") cfg.point_lr = std::stod(value);
            else if (key == "color-lr") cfg.color_lr = std::stod(value);
            else if (key == "iters") cfg.iters_per_stage = std::stoi(value);
            else if (key == "sigma") cfg.sigma = std::stod(value);
            else if (key == "background") common.background = value;
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "threads") cfg.threads = std::stoi(value);
            else {
                std::cerr << "config error: key '" << key << "' cannot come from a config file\n";
                return layervec::kExitConfigError;
            }
        } catch (const std::exception&) {
            std::cerr << "config error: bad value for '" << key << "': " << value << "\n";
            return layervec::kExitConfigError;
        }
    }
    return layervec::kExitOk;
}

int finish_config(CLI::App* cmd, layervec::OptConfig& cfg, CommonFlags& common) {
    const int rc = apply_config_file(cmd, cfg, common);
    if (rc != layervec::kExitOk) return rc;
    try {
        cfg.background = layervec::parse_background(common.background);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return layervec::kExitConfigError;
    }
    if (!common.schedule.empty()) {
        cfg.schedule_override.clear();
        std::string item;
        std::stringstream ss(common.schedule);
        while (std::getline(ss, item, ',')) {
            try {
                cfg.schedule_override.push_back(std::stoi(item));
            } catch (const std::exception&) {
                std::cerr << "config error: bad schedule entry '" << item << "'\n";
                return layervec::kExitConfigError;
            }
        }
    }
    return layervec::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layer-wise image vectorizer: fits layered cubic Bezier SVGs to raster images "
                 "by gradient descent"};
    app.require_subcommand(1);

    layervec::VectorizeOptions vec_opts;
    CommonFlags vec_common;
    CLI::App* vectorize = app.add_subcommand("vectorize", "Vectorize a raster image into an SVG");
    vectorize->add_option("input", vec_opts.input, "Input PNG or JPEG")->required();
    vectorize->add_option("-o,--output", vec_opts.output, "Output SVG path")
        ->capture_default_str();
    vectorize->add_flag("--snapshots", vec_opts.snapshots, "Write per-stage SVG+PNG snapshots");
    add_opt_flags(vectorize, vec_opts.config, vec_common);

    layervec::EvalOptions eval_opts;
    CommonFlags eval_common;
    eval_common.paths_list = "1,2,4,8,16";
    CLI::App* eval = app.add_subcommand("eval", "Sweep MSE vs path count over an image directory");
    eval->add_option("input_dir", eval_opts.input_dir, "Directory of PNG/JPEG images")->required();
    eval->add_option("-o,--output", eval_opts.output_csv, "Output CSV path")
        ->capture_default_str();
    add_opt_flags(eval, eval_opts.config, eval_common, true);

    layervec::InterpolateOptions interp_opts;
    CLI::App* interp =
        app.add_subcommand("interpolate", "Linearly interpolate two generated SVGs");
    interp->add_option("svg_a", interp_opts.svg_a, "First SVG")->required();
    interp->add_option("svg_b", interp_opts.svg_b, "Second SVG")->required();
    interp->add_option("--steps", interp_opts.steps, "Number of interpolation steps")
        ->capture_default_str();
    interp->add_option("-o,--output", interp_opts.output_prefix, "Output file prefix")
        ->capture_default_str();

    layervec::RenderSvgOptions render_opts;
    CLI::App* render = app.add_subcommand("render", "Rasterize a generated SVG to PNG");
    render->add_option("input", render_opts.input_svg, "Input SVG")->required();
    render->add_option("width", render_opts.width,
                       "Output width in pixels (default: document width)");
    render->add_option("-o,--output", render_opts.output_png, "Output PNG path")
        ->capture_default_str();
    render->add_option("--sigma", render_opts.sigma, "Anti-aliasing band half-width")
        ->capture_default_str();
    render->add_option("--threads", render_opts.threads, "Max internal parallelism")
        ->capture_default_str();

    layervec::GenCorpusOptions corpus_opts;
    CLI::App* corpus = app.add_subcommand("gen-corpus", "Generate the synthetic test corpus");
    corpus->add_option("-o,--output", corpus_opts.output_dir, "Output directory")
        ->capture_default_str();
    corpus->add_option("--seed", corpus_opts.seed, "Corpus seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : layervec::kExitConfigError;
    }

    if (vectorize->parsed()) {
        const int rc = finish_config(vectorize, vec_opts.config, vec_common);
        if (rc != layervec::kExitOk) return rc;
        return layervec::cmd_vectorize(vec_opts);
    }
    if (eval->parsed()) {
        const int rc = finish_config(eval, eval_opts.config, eval_common);
        if (rc != layervec::kExitOk) return rc;
        eval_opts.budgets.clear();
        std::string item;
        std::stringstream ss(eval_common.paths_list);
        while (std::getline(ss, item, ',')) {
            try {
                eval_opts.budgets.push_back(std::stoi(item));
            } catch (const std::exception&) {
                std::cerr << "config error: bad budget '" << item << "'\n";
                return layervec::kExitConfigError;
            }
        }
        return layervec::cmd_eval(eval_opts);
    }
    if (interp->parsed()) return layervec::cmd_interpolate(interp_opts);
    if (render->parsed()) return layervec::cmd_render(render_opts);
    if (corpus->parsed()) return layervec::cmd_gen_corpus(corpus_opts);
    return layervec::kExitConfigError;
}
