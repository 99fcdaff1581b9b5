// Command implementations behind the CLI: vectorize, eval, interpolate,
// render, gen-corpus. Each returns a process exit code (0 ok, 1 input error,
// 2 config error, 3 internal numerical failure).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "layervec/corpus.hpp"
#include "layervec/optim.hpp"

namespace layervec {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

/// Empty string when the config is usable, else a description of the problem.
std::string validate_config(const OptConfig& cfg);

struct VectorizeOptions {
    std::string input;
    std::string output = "out.svg";
    OptConfig config;
    bool snapshots = false;
    bool quiet = false;  // suppress per-stage progress on stdout
};

/// Writes the final SVG, a reproducibility manifest (<output>.manifest.json)
/// and, with snapshots on, one SVG+PNG per stage.
int cmd_vectorize(const VectorizeOptions& opts);

struct EvalOptions {
    std::string input_dir;
    std::string output_csv = "eval.csv";
    std::vector<int> budgets;
    OptConfig config;
    bool quiet = false;
};

/// Vectorizes every image in the directory at every budget and records
/// image,n_paths,mse,seconds rows. Per-image failures are logged and the
/// sweep continues.
int cmd_eval(const EvalOptions& opts);

struct InterpolateOptions {
    std::string svg_a;
    std::string svg_b;
    int steps = 10;
    std::string output_prefix = "interp";
};

/// Writes steps+1 SVGs at t = 0, 1/steps, ..., 1.
int cmd_interpolate(const InterpolateOptions& opts);

struct RenderSvgOptions {
    std::string input_svg;
    std::string output_png = "out.png";
    int width = 0;  // 0 = document width; height follows the aspect ratio
    double sigma = 0.5;
    int threads = 1;
};

int cmd_render(const RenderSvgOptions& opts);

struct GenCorpusOptions {
    std::string output_dir = "corpus";
    uint64_t seed = kCorpusDefaultSeed;
};

int cmd_gen_corpus(const GenCorpusOptions& opts);

FillColor parse_background(const std::string& text);  // "#rrggbb" or "r,g,b" in [0,1]

}  // namespace layervec
