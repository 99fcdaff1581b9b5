#include "layervec/init.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace layervec {

DifferenceMap difference_map(const RasterImage& target, const RasterImage& rendered) {
    if (target.width != rendered.width || target.height != rendered.height)
        throw std::invalid_argument("difference_map: shape mismatch");
    DifferenceMap dm;
    dm.width = target.width;
    dm.height = target.height;
    dm.values.resize(target.pixel_count());
    for (size_t i = 0; i < dm.values.size(); ++i) {
        double sum = 0.0;
        for (int c = 0; c < 3; ++c)
            sum += std::abs(target.data[i * 3 + c] - rendered.data[i * 3 + c]);
        dm.values[i] = sum / 3.0;
    }
    return dm;
}

namespace {

struct Component {
    long area = 0;
    int first_y = 0, first_x = 0;  // raster-order tie break
    double sum_x = 0.0, sum_y = 0.0;
    std::array<double, 3> color_sum{};
    int bin = 0;
    std::vector<int32_t> pixels;
};

}  // namespace

std::vector<ComponentSeed> select_components(const DifferenceMap& diff, const RasterImage& target,
                                             int k, double c_alpha, int bins) {
    assert(k >= 1 && c_alpha > 0.0 && c_alpha < 1.0 && bins >= 1);
    if (diff.width != target.width || diff.height != target.height)
        throw std::invalid_argument("select_components: shape mismatch");

    const int w = diff.width, h = diff.height;
    const size_t n = static_cast<size_t>(w) * h;

    double max_diff = 0.0;
    for (double v : diff.values) max_diff = std::max(max_diff, v);
    if (max_diff < c_alpha) return {};

    // Bin labels; -1 marks masked-out (correctly rendered) pixels.
    std::vector<int32_t> bin_of(n, -1);
    const double range = max_diff - c_alpha;
    for (size_t i = 0; i < n; ++i) {
        const double v = diff.values[i];
        if (v < c_alpha) continue;
        int b = range > 0.0 ? static_cast<int>((v - c_alpha) / range * bins) : 0;
        bin_of[i] = std::min(b, bins - 1);
    }

    // 4-connected labeling within equal bins, BFS in raster order.
    std::vector<int32_t> label(n, -1);
    std::vector<Component> comps;
    std::vector<int32_t> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int32_t i = y * w + x;
            if (bin_of[i] < 0 || label[i] >= 0) continue;
            const int32_t id = static_cast<int32_t>(comps.size());
            comps.push_back({});
            Component& comp = comps.back();
            comp.bin = bin_of[i];
            comp.first_y = y;
            comp.first_x = x;
            stack.assign(1, i);
            label[i] = id;
            while (!stack.empty()) {
                const int32_t cur = stack.back();
                stack.pop_back();
                const int cy = cur / w, cx = cur % w;
                comp.area += 1;
                comp.sum_x += cx + 0.5;
                comp.sum_y += cy + 0.5;
                for (int c = 0; c < 3; ++c) comp.color_sum[c] += target.data[static_cast<size_t>(cur) * 3 + c];
                comp.pixels.push_back(cur);
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int d = 0; d < 4; ++d) {
                    if (nx[d] < 0 || ny[d] < 0 || nx[d] >= w || ny[d] >= h) continue;
                    const int32_t ni = ny[d] * w + nx[d];
                    if (label[ni] >= 0 || bin_of[ni] != comp.bin) continue;
                    label[ni] = id;
                    stack.push_back(ni);
                }
            }
        }
    }

    std::vector<int32_t> order(comps.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int32_t>(i);
    std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
        if (comps[a].area != comps[b].area) return comps[a].area > comps[b].area;
        if (comps[a].first_y != comps[b].first_y) return comps[a].first_y < comps[b].first_y;
        return comps[a].first_x < comps[b].first_x;
    });

    std::vector<ComponentSeed> seeds;
    const int count = std::min<int>(k, static_cast<int>(order.size()));
    seeds.reserve(count);
    for (int s = 0; s < count; ++s) {
        const Component& comp = comps[static_cast<size_t>(order[s])];
        ComponentSeed seed;
        seed.area = comp.area;
        seed.bin_index = comp.bin;
        for (int c = 0; c < 3; ++c) seed.mean_color[c] = comp.color_sum[c] / comp.area;
        const double cx = comp.sum_x / comp.area;
        const double cy = comp.sum_y / comp.area;
        const int px = std::clamp(static_cast<int>(cx), 0, w - 1);
        const int py = std::clamp(static_cast<int>(cy), 0, h - 1);
        if (label[static_cast<size_t>(py) * w + px] == order[s]) {
            seed.center = {cx, cy};
        } else {
            // Non-convex component: snap to the nearest member pixel.
            double best = std::numeric_limits<double>::max();
            int32_t best_px = comp.pixels.front();
            for (int32_t pi : comp.pixels) {
                const double dx = (pi % w + 0.5) - cx;
                const double dy = (pi / w + 0.5) - cy;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) {
                    best = d2;
                    best_px = pi;
                }
            }
            seed.center = {best_px % w + 0.5, best_px / w + 0.5};
        }
        seeds.push_back(seed);
    }
    return seeds;
}

void init_paths(std::span<const ComponentSeed> seeds, double radius, int segments,
                const RasterImage& target, std::vector<ClosedBezierPath>& paths,
                std::vector<FillColor>& colors) {
    assert(radius > 0.0 && segments >= 1);
    for (const ComponentSeed& seed : seeds) {
        paths.push_back(make_circle_path(seed.center, radius, segments));

        std::array<double, 3> sum{};
        long count = 0;
        const int x0 = std::max(0, static_cast<int>(std::floor(seed.center.x - radius)));
        const int x1 = std::min(target.width - 1, static_cast<int>(std::ceil(seed.center.x + radius)));
        const int y0 = std::max(0, static_cast<int>(std::floor(seed.center.y - radius)));
        const int y1 = std::min(target.height - 1, static_cast<int>(std::ceil(seed.center.y + radius)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x + 0.5 - seed.center.x;
                const double dy = y + 0.5 - seed.center.y;
                if (dx * dx + dy * dy > radius * radius) continue;
                for (int c = 0; c < 3; ++c) sum[c] += target.at(x, y, c);
                ++count;
            }
        }
        FillColor fill;
        if (count > 0) {
            fill = {sum[0] / count, sum[1] / count, sum[2] / count, 1.0};
        } else {
            // Circle entirely off-canvas: fall back to the component mean.
            fill = {seed.mean_color[0], seed.mean_color[1], seed.mean_color[2], 1.0};
        }
        colors.push_back(fill);
    }
}

}  // namespace layervec
