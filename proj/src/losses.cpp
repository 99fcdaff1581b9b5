#include "layervec/losses.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace layervec {

int UdfWeights::degenerate_count() const {
    int n = 0;
    for (uint8_t d : degenerate) n += d;
    return n;
}

UdfWeights udf_weights(std::span<const DistanceMap> dmaps, double tau) {
    assert(tau > 0.0);
    if (dmaps.empty()) throw std::invalid_argument("udf_weights: need at least one distance map");

    UdfWeights w;
    w.width = dmaps[0].width;
    w.height = dmaps[0].height;
    w.tau = tau;
    const size_t n = static_cast<size_t>(w.width) * w.height;
    w.weights.assign(n, 0.0);
    w.degenerate.assign(dmaps.size(), 0);

    const double inv_paths = 1.0 / static_cast<double>(dmaps.size());
    for (size_t p = 0; p < dmaps.size(); ++p) {
        const DistanceMap& dm = dmaps[p];
        if (dm.values.size() != n)
            throw std::invalid_argument("udf_weights: distance map shape mismatch");
        double sum = 0.0;
        for (double d : dm.values) sum += std::max(tau - d, 0.0);
        if (sum <= 0.0) {
            w.degenerate[p] = 1;
            continue;
        }
        const double scale = inv_paths / sum;
        for (size_t i = 0; i < n; ++i) w.weights[i] += std::max(tau - dm.values[i], 0.0) * scale;
    }
    return w;
}

UdfLossResult udf_loss(const RasterImage& target, const RasterImage& rendered,
                       const UdfWeights& weights) {
    if (target.width != rendered.width || target.height != rendered.height ||
        target.width != weights.width || target.height != weights.height)
        throw std::invalid_argument("udf_loss: shape mismatch");

    UdfLossResult out;
    out.dL_dImage = RasterImage(target.width, target.height);
    const size_t n = target.pixel_count();
    double loss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double w = weights.weights[i];
        if (w == 0.0) continue;
        double sq = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double diff = target.data[i * 3 + c] - rendered.data[i * 3 + c];
            sq += diff * diff;
            out.dL_dImage.data[i * 3 + c] = -(2.0 / 3.0) * w * diff;
        }
        loss += w * sq;
    }
    out.loss = loss / 3.0;
    return out;
}

namespace {

struct XingParts {
    bool degenerate = false;
    double d1 = 0.0;
    double d2 = 0.0;
    double cr = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    Vec2 u, v;
};

XingParts xing_parts(const std::array<Vec2, 4>& q) {
    XingParts p;
    p.u = q[1] - q[0];
    p.v = q[3] - q[2];
    p.nu = norm(p.u);
    p.nv = norm(p.v);
    if (p.nu < 1e-12 || p.nv < 1e-12) {
        p.degenerate = true;
        return p;
    }
    p.d1 = cross(p.u, q[2] - q[1]) > 0.0 ? 1.0 : 0.0;
    p.cr = cross(p.u, p.v);
    p.d2 = p.cr / (p.nu * p.nv);
    return p;
}

}  // namespace

double xing_term(const std::array<Vec2, 4>& quad) {
    const XingParts p = xing_parts(quad);
    if (p.degenerate) return 0.0;
    return p.d1 * std::max(-p.d2, 0.0) + (1.0 - p.d1) * std::max(p.d2, 0.0);
}

XingLossResult xing_loss(std::span<const ClosedBezierPath> paths) {
    XingLossResult out;
    out.point_grads.resize(paths.size());

    int total_segments = 0;
    for (const ClosedBezierPath& p : paths) total_segments += p.segment_count();
    if (total_segments == 0) return out;
    const double inv_n = 1.0 / total_segments;

    double loss = 0.0;
    for (size_t pi = 0; pi < paths.size(); ++pi) {
        const ClosedBezierPath& path = paths[pi];
        const int s = path.segment_count();
        out.point_grads[pi].assign(path.points.size(), Vec2{});
        for (int k = 0; k < s; ++k) {
            const std::array<Vec2, 4> q = path.segment(k);
            const XingParts xp = xing_parts(q);
            if (xp.degenerate) {
                ++out.degenerate_segments;
                continue;
            }

            // term = d1 * relu(-d2) + (1-d1) * relu(d2); subgradient 0 at 0.
            double dterm_dd2 = 0.0;
            if (xp.d1 > 0.5) {
                if (-xp.d2 > 0.0) {
                    loss += -xp.d2;
                    dterm_dd2 = -1.0;
                }
            } else {
                if (xp.d2 > 0.0) {
                    loss += xp.d2;
                    dterm_dd2 = 1.0;
                }
            }
            if (dterm_dd2 == 0.0) continue;

            const double g = dterm_dd2 * inv_n;
            // dD2/du and dD2/dv of cross(u,v)/(|u||v|).
            const double inv = 1.0 / (xp.nu * xp.nv);
            const Vec2 dD2_du = Vec2{xp.v.y, -xp.v.x} * inv - (xp.cr * inv / (xp.nu * xp.nu)) * xp.u;
            const Vec2 dD2_dv = Vec2{-xp.u.y, xp.u.x} * inv - (xp.cr * inv / (xp.nv * xp.nv)) * xp.v;

            const int n3 = static_cast<int>(path.points.size());
            const int ia = 3 * k, ib = 3 * k + 1, ic = 3 * k + 2, id = (3 * k + 3) % n3;
            auto& pg = out.point_grads[pi];
            pg[ia] = pg[ia] - g * dD2_du;
            pg[ib] = pg[ib] + g * dD2_du;
            pg[ic] = pg[ic] - g * dD2_dv;
            pg[id] = pg[id] + g * dD2_dv;
        }
    }
    out.loss = loss * inv_n;
    return out;
}

double mse(const RasterImage& target, const RasterImage& rendered) {
    if (target.width != rendered.width || target.height != rendered.height)
        throw std::invalid_argument("mse: shape mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < target.data.size(); ++i) {
        const double diff = target.data[i] - rendered.data[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(target.data.size());
}

LossReport total_loss(const RasterImage& target, const RasterImage& rendered,
                      const UdfWeights& weights, std::span<const ClosedBezierPath> paths,
                      double lambda) {
    assert(lambda >= 0.0);
    LossReport report;
    report.lambda = lambda;
    report.udf = udf_loss(target, rendered, weights).loss;
    const XingLossResult xing = xing_loss(paths);
    report.xing = xing.loss;
    report.total = report.udf + lambda * report.xing;
    report.mse = mse(target, rendered);
    report.udf_degenerate_paths = weights.degenerate_count();
    report.xing_degenerate_segments = xing.degenerate_segments;
    return report;
}

}  // namespace layervec
