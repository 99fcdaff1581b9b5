// Stage-wise optimization loop: path scheduling, Adam updates, convergence
// bookkeeping.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "layervec/geometry.hpp"
#include "layervec/init.hpp"
#include "layervec/losses.hpp"
#include "layervec/render.hpp"

namespace layervec {

enum class LossKind { kUdf, kPlainMse };

struct OptConfig {
    double point_lr = 1.0;
    double color_lr = 0.01;
    int iters_per_stage = 500;
    // Crossing-penalty weight. Keep small: weights around 1.0 routinely make
    // the shape fit fail.
    double lambda = 0.01;
    double tau = 10.0;
    double c_alpha = 0.1;
    int bins = 200;
    double radius = 5.0;
    int segments = 4;
    double sigma = 1.0;
    double export_sigma = 0.5;
    double flatten_tol = 0.25;
    int max_paths = 32;
    std::vector<int> schedule_override;  // per-stage additions; empty = min(2^(i-1), 32)
    uint64_t seed = 0;
    std::optional<double> target_mse;
    FillColor background{1.0, 1.0, 1.0, 1.0};
    LossKind loss_kind = LossKind::kUdf;
    int threads = 1;

    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
};

/// First/second moment estimates, one pair per scalar parameter.
struct AdamMoments {
    std::vector<double> m;
    std::vector<double> v;

    void append_zeros(size_t n) {
        m.resize(m.size() + n, 0.0);
        v.resize(v.size() + n, 0.0);
    }
};

struct OptState {
    std::vector<ClosedBezierPath> paths;
    std::vector<FillColor> colors;
    AdamMoments point_moments;  // aligned with the flattened (x,y) point params
    AdamMoments color_moments;  // aligned with the flattened rgba params
    int stage = 0;
    int iteration = 0;  // within the current stage
    RasterImage last_render;
    DifferenceMap diff;
    std::vector<LossReport> history;
};

struct StageMetrics {
    int stage = 0;
    int n_paths = 0;
    double mse = 0.0;
    double udf = 0.0;
    double xing = 0.0;
    double seconds = 0.0;
};

struct RunResult {
    std::vector<ClosedBezierPath> paths;
    std::vector<FillColor> colors;
    std::vector<StageMetrics> metrics;
    RasterImage final_render;  // export-quality (sigma = export_sigma)
};

/// Paths added at 1-based stage i under the default schedule: min(2^(i-1), 32).
int schedule(int stage_index);

/// Standard bias-corrected Adam update, in place. `step_count` is 1-based.
/// Non-finite gradients skip their parameter and are counted in the return
/// value (a warning is logged once per call).
int adam_step(std::span<double> params, std::span<const double> grads, AdamMoments& moments,
              double lr, double beta1, double beta2, double eps, int step_count);

/// Runs cfg.iters_per_stage iterations of render -> losses -> backprop ->
/// Adam over every path in `state` (old and new alike). Colors are clamped
/// to [0,1] and control points to [-0.5, 1.5] x canvas after each step.
void run_stage(OptState& state, const RasterImage& target, const OptConfig& cfg);

/// Full layer-wise loop: repeatedly seed new paths on the largest wrongly
/// rendered components, then optimize everything, until the path budget is
/// spent, target_mse is reached, or nothing is left to vectorize.
RunResult run(const RasterImage& target, const OptConfig& cfg,
              const std::function<void(const OptState&, const StageMetrics&)>& on_stage = {});

}  // namespace layervec
