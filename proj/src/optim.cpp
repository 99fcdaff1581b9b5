#include "layervec/optim.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace layervec {

int schedule(int stage_index) {
    assert(stage_index >= 1);
    if (stage_index > 6) return 32;
    return std::min(1 << (stage_index - 1), 32);
}

int adam_step(std::span<double> params, std::span<const double> grads, AdamMoments& moments,
              double lr, double beta1, double beta2, double eps, int step_count) {
    assert(params.size() == grads.size());
    assert(moments.m.size() >= params.size() && moments.v.size() >= params.size());
    assert(step_count >= 1);

    const double bc1 = 1.0 - std::pow(beta1, step_count);
    const double bc2 = 1.0 - std::pow(beta2, step_count);
    int skipped = 0;
    for (size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        if (!std::isfinite(g)) {
            ++skipped;
            continue;
        }
        moments.m[i] = beta1 * moments.m[i] + (1.0 - beta1) * g;
        moments.v[i] = beta2 * moments.v[i] + (1.0 - beta2) * g * g;
        const double m_hat = moments.m[i] / bc1;
        const double v_hat = moments.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
    if (skipped > 0)
        std::fprintf(stderr, "warning: skipped %d parameter update(s) with non-finite gradients\n",
                     skipped);
    return skipped;
}

namespace {

void flatten_point_params(const std::vector<ClosedBezierPath>& paths, std::vector<double>& out) {
    out.clear();
    for (const ClosedBezierPath& p : paths) {
        for (const Vec2& v : p.points) {
            out.push_back(v.x);
            out.push_back(v.y);
        }
    }
}

void unflatten_point_params(const std::vector<double>& in, std::vector<ClosedBezierPath>& paths) {
    size_t i = 0;
    for (ClosedBezierPath& p : paths) {
        for (Vec2& v : p.points) {
            v.x = in[i++];
            v.y = in[i++];
        }
    }
}

void flatten_color_params(const std::vector<FillColor>& colors, std::vector<double>& out) {
    out.clear();
    for (const FillColor& c : colors) {
        out.push_back(c.r);
        out.push_back(c.g);
        out.push_back(c.b);
        out.push_back(c.a);
    }
}

void unflatten_color_params(const std::vector<double>& in, std::vector<FillColor>& colors) {
    size_t i = 0;
    for (FillColor& c : colors) {
        c.r = in[i++];
        c.g = in[i++];
        c.b = in[i++];
        c.a = in[i++];
    }
}

RasterImage plain_mse_grad(const RasterImage& target, const RasterImage& rendered, double* loss) {
    RasterImage g(target.width, target.height);
    double sum = 0.0;
    const double inv_n = 1.0 / static_cast<double>(target.data.size());
    for (size_t i = 0; i < target.data.size(); ++i) {
        const double diff = target.data[i] - rendered.data[i];
        sum += diff * diff;
        g.data[i] = -2.0 * diff * inv_n;
    }
    *loss = sum * inv_n;
    return g;
}

}  // namespace

void run_stage(OptState& state, const RasterImage& target, const OptConfig& cfg) {
    if (state.paths.empty()) throw std::invalid_argument("run_stage: no paths to optimize");
    assert(state.paths.size() == state.colors.size());

    const int w = target.width, h = target.height;
    RenderOptions ropts;
    ropts.sigma = cfg.sigma;
    ropts.flatten_tol = cfg.flatten_tol;
    ropts.band = std::max(cfg.sigma, cfg.tau) + 1.0;
    ropts.threads = cfg.threads;

    std::vector<double> point_params, point_grads, color_params, color_grads;
    std::vector<DistanceMap> dmaps;

    for (int iter = 1; iter <= cfg.iters_per_stage; ++iter) {
        state.iteration = iter;
        auto [img, tape] = render_with_tape(state.paths, state.colors, w, h, cfg.background,
                                            ropts, &dmaps);

        LossReport report;
        report.lambda = cfg.lambda;
        RasterImage dL_dImage;
        if (cfg.loss_kind == LossKind::kUdf) {
            const UdfWeights weights = udf_weights(dmaps, cfg.tau);
            UdfLossResult udf = udf_loss(target, img, weights);
            report.udf = udf.loss;
            report.udf_degenerate_paths = weights.degenerate_count();
            dL_dImage = std::move(udf.dL_dImage);
        } else {
            dL_dImage = plain_mse_grad(target, img, &report.udf);
        }

        const XingLossResult xing = xing_loss(state.paths);
        report.xing = xing.loss;
        report.xing_degenerate_segments = xing.degenerate_segments;
        report.total = report.udf + cfg.lambda * report.xing;
        report.mse = mse(target, img);

        const RenderGrads rgrads = backprop(tape, dL_dImage);

        point_grads.clear();
        for (size_t p = 0; p < state.paths.size(); ++p) {
            for (size_t i = 0; i < state.paths[p].points.size(); ++i) {
                Vec2 g = rgrads.points[p][i];
                if (!xing.point_grads[p].empty()) g = g + cfg.lambda * xing.point_grads[p][i];
                point_grads.push_back(g.x);
                point_grads.push_back(g.y);
            }
        }
        color_grads.clear();
        for (const std::array<double, 4>& cg : rgrads.colors)
            color_grads.insert(color_grads.end(), cg.begin(), cg.end());

        flatten_point_params(state.paths, point_params);
        adam_step(point_params, point_grads, state.point_moments, cfg.point_lr, cfg.beta1,
                  cfg.beta2, cfg.adam_eps, iter);
        for (size_t i = 0; i < point_params.size(); i += 2) {
            point_params[i] = std::clamp(point_params[i], -0.5 * w, 1.5 * w);
            point_params[i + 1] = std::clamp(point_params[i + 1], -0.5 * h, 1.5 * h);
        }
        unflatten_point_params(point_params, state.paths);

        flatten_color_params(state.colors, color_params);
        adam_step(color_params, color_grads, state.color_moments, cfg.color_lr, cfg.beta1,
                  cfg.beta2, cfg.adam_eps, iter);
        for (double& c : color_params) c = std::clamp(c, 0.0, 1.0);
        unflatten_color_params(color_params, state.colors);

        state.history.push_back(report);
        state.last_render = std::move(img);
    }
}

RunResult run(const RasterImage& target, const OptConfig& cfg,
              const std::function<void(const OptState&, const StageMetrics&)>& on_stage) {
    if (target.width <= 0 || target.height <= 0 || target.data.empty())
        throw std::invalid_argument("run: empty target image");

    RenderOptions export_opts;
    export_opts.sigma = cfg.export_sigma;
    export_opts.flatten_tol = cfg.flatten_tol;
    export_opts.threads = cfg.threads;

    OptState state;
    state.last_render = render({}, {}, target.width, target.height, cfg.background, export_opts);

    RunResult result;
    int stage = 0;
    int budget = cfg.schedule_override.empty()
                     ? cfg.max_paths
                     : [&] {
                           int total = 0;
                           for (int n : cfg.schedule_override) total += n;
                           return total;
                       }();

    while (true) {
        const int added_so_far = static_cast<int>(state.paths.size());
        if (added_so_far >= budget) break;
        ++stage;
        int want;
        if (!cfg.schedule_override.empty()) {
            if (stage > static_cast<int>(cfg.schedule_override.size())) break;
            want = cfg.schedule_override[static_cast<size_t>(stage - 1)];
        } else {
            want = schedule(stage);
        }
        want = std::min(want, budget - added_so_far);
        if (want <= 0) continue;

        state.diff = difference_map(target, state.last_render);
        const std::vector<ComponentSeed> seeds =
            select_components(state.diff, target, want, cfg.c_alpha, cfg.bins);
        if (seeds.empty()) break;  // everything is rendered well enough

        const size_t before = state.paths.size();
        init_paths(seeds, cfg.radius, cfg.segments, target, state.paths, state.colors);
        const size_t added = state.paths.size() - before;
        state.point_moments.append_zeros(added * static_cast<size_t>(3 * cfg.segments) * 2);
        state.color_moments.append_zeros(added * 4);

        state.stage = stage;
        const auto t0 = std::chrono::steady_clock::now();
        run_stage(state, target, cfg);
        const auto t1 = std::chrono::steady_clock::now();

        const RasterImage export_render =
            render(state.paths, state.colors, target.width, target.height, cfg.background,
                   export_opts);
        StageMetrics metrics;
        metrics.stage = stage;
        metrics.n_paths = static_cast<int>(state.paths.size());
        metrics.mse = mse(target, export_render);
        metrics.udf = state.history.back().udf;
        metrics.xing = state.history.back().xing;
        metrics.seconds = std::chrono::duration<double>(t1 - t0).count();
        result.metrics.push_back(metrics);
        if (on_stage) on_stage(state, metrics);

        state.diff = difference_map(target, state.last_render);
        if (cfg.target_mse && metrics.mse <= *cfg.target_mse) break;
    }

    result.paths = state.paths;
    result.colors = state.colors;
    result.final_render = render(result.paths, result.colors, target.width, target.height,
                                 cfg.background, export_opts);
    return result;
}

}  // namespace layervec
