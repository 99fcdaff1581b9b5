#include "layervec/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "layervec/imageio.hpp"
#include "layervec/svgio.hpp"

namespace fs = std::filesystem;

namespace layervec {

namespace {

nlohmann::json config_json(const OptConfig& cfg) {
    nlohmann::json j;
    j["paths"] = cfg.max_paths;
    j["schedule"] = cfg.schedule_override;
    j["segments"] = cfg.segments;
    j["radius"] = cfg.radius;
    j["tau"] = cfg.tau;
    j["lambda"] = cfg.lambda;
    j["point_lr"] = cfg.point_lr;
    j["color_lr"] = cfg.color_lr;
    j["iters"] = cfg.iters_per_stage;
    j["sigma"] = cfg.sigma;
    j["c_alpha"] = cfg.c_alpha;
    j["bins"] = cfg.bins;
    j["background"] = {cfg.background.r, cfg.background.g, cfg.background.b};
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageIoError("cannot open for writing: " + path);
    out << text;
}

bool all_finite(const RunResult& result) {
    for (const ClosedBezierPath& p : result.paths)
        for (const Vec2& v : p.points)
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) return false;
    for (const FillColor& c : result.colors)
        if (!std::isfinite(c.r) || !std::isfinite(c.g) || !std::isfinite(c.b) ||
            !std::isfinite(c.a))
            return false;
    return true;
}

std::string output_stem(const std::string& path) {
    fs::path p(path);
    return (p.parent_path() / p.stem()).string();
}

}  // namespace

std::string validate_config(const OptConfig& cfg) {
    if (cfg.point_lr <= 0.0 || cfg.color_lr <= 0.0) return "learning rates must be > 0";
    if (cfg.iters_per_stage <= 0) return "iters must be > 0";
    if (cfg.lambda < 0.0) return "lambda must be >= 0";
    if (cfg.tau <= 0.0) return "tau must be > 0";
    if (cfg.c_alpha <= 0.0 || cfg.c_alpha >= 1.0) return "c_alpha must be in (0,1)";
    if (cfg.bins < 1) return "bins must be >= 1";
    if (cfg.radius <= 0.0) return "radius must be > 0";
    if (cfg.segments < 1) return "segments must be >= 1";
    if (cfg.sigma <= 0.0) return "sigma must be > 0";
    if (cfg.max_paths < 1 && cfg.schedule_override.empty()) return "paths must be >= 1";
    for (int n : cfg.schedule_override)
        if (n < 1) return "schedule entries must be >= 1";
    if (cfg.threads < 1) return "threads must be >= 1";
    return {};
}

FillColor parse_background(const std::string& text) {
    FillColor c{1.0, 1.0, 1.0, 1.0};
    if (!text.empty() && text[0] == '#') {
        if (text.size() != 7) throw std::invalid_argument("background: expected #rrggbb");
        unsigned r, g, b;
        if (std::sscanf(text.c_str(), "#%02x%02x%02x", &r, &g, &b) != 3)
            throw std::invalid_argument("background: expected #rrggbb");
        return {r / 255.0, g / 255.0, b / 255.0, 1.0};
    }
    double r, g, b;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &r, &g, &b) != 3)
        throw std::invalid_argument("background: expected #rrggbb or r,g,b");
    c = {r, g, b, 1.0};
    if (c.r < 0 || c.r > 1 || c.g < 0 || c.g > 1 || c.b < 0 || c.b > 1)
        throw std::invalid_argument("background channels must be in [0,1]");
    return c;
}

int cmd_vectorize(const VectorizeOptions& opts) {
    const std::string err = validate_config(opts.config);
    if (!err.empty()) {
        std::cerr << "config error: " << err << "\n";
        return kExitConfigError;
    }
    RasterImage target;
    try {
        target = load_image(opts.input, opts.config.background);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    if (target.pixel_count() == 0) {
        std::cerr << "input error: image has no pixels: " << opts.input << "\n";
        return kExitInputError;
    }

    const std::string stem = output_stem(opts.output);
    nlohmann::json stages = nlohmann::json::array();
    std::vector<std::string> outputs;

    try {
        const auto on_stage = [&](const OptState& state, const StageMetrics& m) {
            if (!opts.quiet) {
                std::printf("stage %d: paths=%d mse=%.6g udf=%.6g xing=%.6g (%.1fs)\n", m.stage,
                            m.n_paths, m.mse, m.udf, m.xing, m.seconds);
                std::fflush(stdout);
            }
            stages.push_back({{"stage", m.stage},
                              {"n_paths_total", m.n_paths},
                              {"mse", m.mse},
                              {"udf", m.udf},
                              {"xing", m.xing},
                              {"seconds", m.seconds}});
            if (!opts.snapshots) return;
            char suffix[32];
            std::snprintf(suffix, sizeof(suffix), "_stage%02d", m.stage);
            const SvgDocument doc = to_svg(state.paths, state.colors, state.last_render.width,
                                           state.last_render.height, opts.config.background);
            write_text_file(stem + suffix + ".svg", svg_text(doc));
            RenderOptions ropts;
            ropts.sigma = opts.config.export_sigma;
            ropts.threads = opts.config.threads;
            write_png(stem + suffix + ".png",
                      render(state.paths, state.colors, state.last_render.width,
                             state.last_render.height, opts.config.background, ropts));
            outputs.push_back(stem + suffix + ".svg");
            outputs.push_back(stem + suffix + ".png");
        };

        const RunResult result = run(target, opts.config, on_stage);
        if (!all_finite(result)) {
            std::cerr << "numerical failure: non-finite parameters in the result\n";
            return kExitNumericalError;
        }

        const SvgDocument doc = to_svg(result.paths, result.colors, target.width, target.height,
                                       opts.config.background);
        write_text_file(opts.output, svg_text(doc));
        outputs.push_back(opts.output);

        nlohmann::json manifest;
        manifest["tool_version"] = kToolVersion;
        manifest["input"] = opts.input;
        manifest["seed"] = opts.config.seed;
        manifest["config"] = config_json(opts.config);
        manifest["stages"] = stages;
        manifest["outputs"] = outputs;
        write_text_file(stem + ".manifest.json", manifest.dump(2) + "\n");
    } catch (const ImageIoError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitNumericalError;
    }
    return kExitOk;
}

int cmd_eval(const EvalOptions& opts) {
    const std::string err = validate_config(opts.config);
    if (!err.empty()) {
        std::cerr << "config error: " << err << "\n";
        return kExitConfigError;
    }
    if (opts.budgets.empty()) {
        std::cerr << "config error: eval needs a path-count list\n";
        return kExitConfigError;
    }
    std::error_code ec;
    if (!fs::is_directory(opts.input_dir, ec)) {
        std::cerr << "input error: not a directory: " << opts.input_dir << "\n";
        return kExitInputError;
    }

    std::vector<std::string> images;
    for (const auto& entry : fs::directory_iterator(opts.input_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
            images.push_back(entry.path().string());
    }
    std::sort(images.begin(), images.end());

    std::ostringstream csv;
    csv << "image,n_paths,mse,seconds\n";
    for (const std::string& path : images) {
        RasterImage target;
        try {
            target = load_image(path, opts.config.background);
        } catch (const std::exception& e) {
            std::cerr << "skipping " << path << ": " << e.what() << "\n";
            continue;
        }
        for (int budget : opts.budgets) {
            OptConfig cfg = opts.config;
            cfg.max_paths = budget;
            cfg.schedule_override.clear();
            try {
                const auto t0 = std::chrono::steady_clock::now();
                const RunResult result = run(target, cfg);
                const auto t1 = std::chrono::steady_clock::now();
                const double final_mse = mse(target, result.final_render);
                char row[512];
                std::snprintf(row, sizeof(row), "%s,%d,%.8f,%.3f\n",
                              fs::path(path).filename().string().c_str(), budget, final_mse,
                              std::chrono::duration<double>(t1 - t0).count());
                csv << row;
                if (!opts.quiet) {
                    std::printf("%s paths=%d mse=%.6g\n",
                                fs::path(path).filename().string().c_str(), budget, final_mse);
                    std::fflush(stdout);
                }
            } catch (const std::exception& e) {
                std::cerr << "failed " << path << " at " << budget << " paths: " << e.what()
                          << "\n";
            }
        }
    }
    try {
        write_text_file(opts.output_csv, csv.str());
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_interpolate(const InterpolateOptions& opts) {
    if (opts.steps < 1) {
        std::cerr << "config error: steps must be >= 1\n";
        return kExitConfigError;
    }
    try {
        std::ifstream fa(opts.svg_a), fb(opts.svg_b);
        if (!fa) throw ImageIoError("cannot open " + opts.svg_a);
        if (!fb) throw ImageIoError("cannot open " + opts.svg_b);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        const SvgDocument a = from_svg(sa.str());
        const SvgDocument b = from_svg(sb.str());
        for (int i = 0; i <= opts.steps; ++i) {
            const double t = static_cast<double>(i) / opts.steps;
            const SvgDocument doc = interpolate(a, b, t);
            char suffix[32];
            std::snprintf(suffix, sizeof(suffix), "_%03d.svg", i);
            write_text_file(opts.output_prefix + suffix, svg_text(doc));
        }
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_render(const RenderSvgOptions& opts) {
    if (opts.sigma <= 0.0) {
        std::cerr << "config error: sigma must be > 0\n";
        return kExitConfigError;
    }
    try {
        std::ifstream in(opts.input_svg);
        if (!in) throw ImageIoError("cannot open " + opts.input_svg);
        std::stringstream ss;
        ss << in.rdbuf();
        const SvgDocument doc = from_svg(ss.str());
        if (doc.width <= 0 || doc.height <= 0)
            throw SvgParseError("document has a degenerate canvas");

        const int w = opts.width > 0 ? opts.width : doc.width;
        const int h = std::max(1, static_cast<int>(std::lround(
                                      static_cast<double>(w) * doc.height / doc.width)));
        const double sx = static_cast<double>(w) / doc.width;
        const double sy = static_cast<double>(h) / doc.height;

        std::vector<ClosedBezierPath> paths;
        std::vector<FillColor> colors;
        for (const SvgShape& shape : doc.shapes) {
            ClosedBezierPath p = shape.path;
            for (Vec2& v : p.points) v = {v.x * sx, v.y * sy};
            paths.push_back(std::move(p));
            colors.push_back(shape.fill);
        }
        RenderOptions ropts;
        ropts.sigma = opts.sigma;
        ropts.threads = opts.threads;
        const FillColor bg = doc.background.value_or(FillColor{1.0, 1.0, 1.0, 1.0});
        write_png(opts.output_png, render(paths, colors, w, h, bg, ropts));
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_gen_corpus(const GenCorpusOptions& opts) {
    try {
        fs::create_directories(opts.output_dir);
        const std::vector<CorpusImage> corpus = generate_corpus(opts.seed);
        for (const CorpusImage& img : corpus) {
            const std::string base = (fs::path(opts.output_dir) / img.name).string();
            write_png(base + ".png", img.image);
            write_text_file(base + ".json", corpus_sidecar_json(img));
        }
        std::printf("wrote %zu images to %s\n", corpus.size(), opts.output_dir.c_str());
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

}  // namespace layervec
