// Component-wise path initialization: find the largest wrongly-rendered
// uniform-color regions and seed circle paths on them.
#pragma once

#include <array>
#include <span>
#include <vector>

#include "layervec/geometry.hpp"
#include "layervec/render.hpp"

namespace layervec {

/// Per-pixel mean-over-channels |target - rendered|, in [0,1].
struct DifferenceMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

struct ComponentSeed {
    Vec2 center;                         // canvas coordinates, inside the component
    long area = 0;                       // pixel count
    std::array<double, 3> mean_color{};  // target RGB over the component
    int bin_index = 0;
};

DifferenceMap difference_map(const RasterImage& target, const RasterImage& rendered);

/// Top-k wrongly rendered components:
///  1. drop pixels with diff < c_alpha,
///  2. quantize surviving diffs uniformly over [c_alpha, max_diff] into bins,
///  3. 4-connected components among pixels sharing a bin,
///  4. sort by area (desc), ties by first pixel in raster order,
///  5. seed at the centroid, snapped to the nearest component pixel when the
///     centroid's pixel is outside the component.
/// Empty result means nothing left to vectorize.
std::vector<ComponentSeed> select_components(const DifferenceMap& diff, const RasterImage& target,
                                             int k, double c_alpha, int bins);

/// One circle path per seed; fill color is the target's mean RGB inside the
/// init circle, alpha 1. Appends to the output lists in seed order.
void init_paths(std::span<const ComponentSeed> seeds, double radius, int segments,
                const RasterImage& target, std::vector<ClosedBezierPath>& paths,
                std::vector<FillColor>& colors);

}  // namespace layervec
