// Differentiable rasterization of filled Bezier paths with alpha compositing.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "layervec/geometry.hpp"

namespace layervec {

struct FillColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    double a = 1.0;
};

/// H x W x 3 grid of channel values in [0,1], row-major, origin top-left.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // width * height * 3

    RasterImage() = default;
    RasterImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h * 3, fill) {}

    double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    double& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

/// Smoothstep coverage ramp over signed distance: 1 deep inside
/// (sd <= -sigma), 0 well outside (sd >= sigma), C1-continuous in between.
double soft_coverage(double signed_distance, double sigma);

/// One pixel a path touches (coverage > 0): everything backprop needs to
/// chain from the composited output back to the path's polyline.
struct TapeEntry {
    double cov = 0.0;       // soft coverage at the pixel center
    double prefix[3] = {0, 0, 0};  // composited color of all layers below
    int32_t pixel = 0;      // y * width + x
    float sd = 0.0f;        // signed distance (negative inside)
    int32_t edge = -1;      // nearest polyline edge, -1 when outside the band
    float edge_t = 0.0f;    // closest-point parameter along that edge
};

struct PathTape {
    Polyline poly;          // flattened contour with source_params
    FillColor color;
    std::vector<TapeEntry> entries;
};

struct RenderTape {
    int width = 0;
    int height = 0;
    double sigma = 1.0;
    FillColor background;
    std::vector<PathTape> paths;

    size_t entry_count() const;
    size_t byte_size() const;
};

struct RenderGrads {
    std::vector<std::vector<Vec2>> points;            // per path, per control point
    std::vector<std::array<double, 4>> colors;        // per path, rgba
};

struct RenderOptions {
    double sigma = 1.0;
    double flatten_tol = 0.25;
    /// Radius within which per-pixel distances are exact; outside it they are
    /// clamped. Must cover sigma (for coverage) and, when distance maps are
    /// requested, the UDF threshold tau.
    double band = 0.0;  // 0 => sigma + 1
    int threads = 1;
};

/// Composite `paths` in list order (index 0 bottom-most) over an opaque
/// background using source-over with alpha scaled by soft coverage.
RasterImage render(std::span<const ClosedBezierPath> paths, std::span<const FillColor> colors,
                   int width, int height, const FillColor& background,
                   const RenderOptions& opts);

/// As render(), plus the tape for backprop. When `dmaps_out` is non-null it
/// receives one unsigned DistanceMap per path, exact within `opts.band` and
/// clamped to the band radius beyond it.
std::pair<RasterImage, RenderTape> render_with_tape(std::span<const ClosedBezierPath> paths,
                                                    std::span<const FillColor> colors, int width,
                                                    int height, const FillColor& background,
                                                    const RenderOptions& opts,
                                                    std::vector<DistanceMap>* dmaps_out = nullptr);

/// Re-composites the image from the tape alone; bit-exact with the original.
RasterImage replay(const RenderTape& tape);

/// Chain rule from a pixel-wise loss gradient back to control points and
/// fill colors. Compositing and coverage are differentiated exactly; the
/// nearest-edge parameters and flattening t values are held constant.
RenderGrads backprop(const RenderTape& tape, const RasterImage& dL_dImage);

/// Number of per-path field builds since process start; each optimization
/// iteration must rebuild fields, and tests assert this counter moves.
uint64_t field_build_count();

}  // namespace layervec
