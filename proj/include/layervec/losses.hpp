// Training objectives: distance-weighted focal loss, self-crossing penalty,
// and plain MSE for evaluation.
#pragma once

#include <span>
#include <vector>

#include "layervec/geometry.hpp"
#include "layervec/render.hpp"

namespace layervec {

/// Normalized per-pixel weights concentrating the reconstruction loss in a
/// band of width tau around every path contour.
struct UdfWeights {
    int width = 0;
    int height = 0;
    double tau = 10.0;
    std::vector<double> weights;        // mean over paths of per-path normalized maps
    std::vector<uint8_t> degenerate;    // per path: no pixel within tau of its contour

    double at(int x, int y) const { return weights[static_cast<size_t>(y) * width + x]; }
    int degenerate_count() const;
};

struct LossReport {
    double udf = 0.0;
    double xing = 0.0;
    double total = 0.0;
    double mse = 0.0;  // evaluation only, never part of the gradient
    double lambda = 0.0;
    int udf_degenerate_paths = 0;
    int xing_degenerate_segments = 0;
};

/// Per path p: w_p(i) = ReLU(tau - d_i) / sum_j ReLU(tau - d_j); the final
/// map is the mean of w_p over paths. A path with an all-zero ramp (entirely
/// farther than tau from every pixel center) contributes zeros and is
/// flagged degenerate.
UdfWeights udf_weights(std::span<const DistanceMap> dmaps, double tau);

struct UdfLossResult {
    double loss = 0.0;
    RasterImage dL_dImage;
};

/// L = (1/3) sum_i w_i sum_c (target_ic - rendered_ic)^2, with the weights
/// treated as constants (stop-gradient).
UdfLossResult udf_loss(const RasterImage& target, const RasterImage& rendered,
                       const UdfWeights& weights);

struct XingLossResult {
    double loss = 0.0;
    std::vector<std::vector<Vec2>> point_grads;  // per path, per control point
    int degenerate_segments = 0;
};

/// Self-crossing penalty for one control quadruple (A,B,C,D):
///   D1 = [ (B-A) x (C-B) > 0 ],  D2 = (B-A) x (D-C) / (|B-A||D-C|)
///   term = D1 * ReLU(-D2) + (1-D1) * ReLU(D2)
/// Zero-length tangents yield zero.
double xing_term(const std::array<Vec2, 4>& quad);

/// xing_term averaged over all segments of all paths. D1 is a frozen gate;
/// gradients flow through D2 only.
XingLossResult xing_loss(std::span<const ClosedBezierPath> paths);

/// Mean over all pixels and channels of the squared difference.
double mse(const RasterImage& target, const RasterImage& rendered);

LossReport total_loss(const RasterImage& target, const RasterImage& rendered,
                      const UdfWeights& weights, std::span<const ClosedBezierPath> paths,
                      double lambda);

}  // namespace layervec
