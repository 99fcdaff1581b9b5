#include "layervec/render.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace layervec {

namespace {

std::atomic<uint64_t> g_field_builds{0};

struct FieldRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open pixel index range
    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool empty() const { return x1 <= x0 || y1 <= y0; }
    size_t area() const { return empty() ? 0 : static_cast<size_t>(width()) * height(); }
};

// Per-path banded fields on the path's dilated bounding rectangle. Distances
// are exact below `band` and clamped to it elsewhere; `inside` is the nonzero
// winding test at pixel centers.
struct PathField {
    Polyline poly;
    FieldRect rect;
    std::vector<float> dist;
    std::vector<int32_t> edge;
    std::vector<float> edge_t;
    std::vector<uint8_t> inside;
};

void build_field(const ClosedBezierPath& path, int width, int height, double band, double tol,
                 PathField& f) {
    f.poly = flatten(path, tol);
    const int n = static_cast<int>(f.poly.vertices.size());

    double min_x = std::numeric_limits<double>::max(), min_y = min_x;
    double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
    for (const Vec2& v : f.poly.vertices) {
        min_x = std::min(min_x, v.x);
        min_y = std::min(min_y, v.y);
        max_x = std::max(max_x, v.x);
        max_y = std::max(max_y, v.y);
    }
    f.rect.x0 = std::clamp(static_cast<int>(std::floor(min_x - band)), 0, width);
    f.rect.y0 = std::clamp(static_cast<int>(std::floor(min_y - band)), 0, height);
    f.rect.x1 = std::clamp(static_cast<int>(std::ceil(max_x + band)) + 1, 0, width);
    f.rect.y1 = std::clamp(static_cast<int>(std::ceil(max_y + band)) + 1, 0, height);

    const size_t area = f.rect.area();
    f.dist.assign(area, static_cast<float>(band));
    f.edge.assign(area, -1);
    f.edge_t.assign(area, 0.0f);
    f.inside.assign(area, 0);
    if (f.rect.empty()) {
        ++g_field_builds;
        return;
    }
    const int rw = f.rect.width();

    // Exact point-to-edge distances stamped over each edge's dilated box.
    for (int e = 0; e < n; ++e) {
        const Vec2 a = f.poly.edge_start(e);
        const Vec2 b = f.poly.edge_end(e);
        const int ex0 = std::max(f.rect.x0, static_cast<int>(std::floor(std::min(a.x, b.x) - band)));
        const int ex1 = std::min(f.rect.x1, static_cast<int>(std::ceil(std::max(a.x, b.x) + band)) + 1);
        const int ey0 = std::max(f.rect.y0, static_cast<int>(std::floor(std::min(a.y, b.y) - band)));
        const int ey1 = std::min(f.rect.y1, static_cast<int>(std::ceil(std::max(a.y, b.y) + band)) + 1);
        for (int y = ey0; y < ey1; ++y) {
            const size_t row = static_cast<size_t>(y - f.rect.y0) * rw;
            for (int x = ex0; x < ex1; ++x) {
                double t;
                const double d = point_segment_distance({x + 0.5, y + 0.5}, a, b, &t);
                const size_t i = row + (x - f.rect.x0);
                if (d < f.dist[i]) {
                    f.dist[i] = static_cast<float>(d);
                    f.edge[i] = e;
                    f.edge_t[i] = static_cast<float>(t);
                }
            }
        }
    }

    // Nonzero-winding inside mask, one scanline of edge crossings per row.
    struct Crossing {
        double x;
        int dir;
    };
    std::vector<Crossing> row;
    for (int y = f.rect.y0; y < f.rect.y1; ++y) {
        const double yc = y + 0.5;
        row.clear();
        for (int e = 0; e < n; ++e) {
            const Vec2 a = f.poly.edge_start(e);
            const Vec2 b = f.poly.edge_end(e);
            if (a.y <= yc && b.y > yc) {
                row.push_back({a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y), +1});
            } else if (b.y <= yc && a.y > yc) {
                row.push_back({a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y), -1});
            }
        }
        if (row.empty()) continue;
        std::sort(row.begin(), row.end(), [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
        // winding(p) counts crossings right of p, and a closed contour's
        // directions sum to zero per row, so winding = -sum over x_cross <= p.
        const size_t base = static_cast<size_t>(y - f.rect.y0) * rw;
        size_t next = 0;
        int acc = 0;
        for (int x = f.rect.x0; x < f.rect.x1; ++x) {
            const double xc = x + 0.5;
            while (next < row.size() && row[next].x <= xc) acc += row[next++].dir;
            f.inside[base + (x - f.rect.x0)] = (acc != 0) ? 1 : 0;
        }
    }
    ++g_field_builds;
}

// Reused across calls on each thread; PathField buffers keep their capacity,
// which matters when an optimization loop renders hundreds of times.
std::vector<PathField>& field_workspace() {
    thread_local std::vector<PathField> fields;
    return fields;
}

void build_all_fields(std::span<const ClosedBezierPath> paths, int width, int height, double band,
                      double tol, int threads, std::vector<PathField>& fields) {
    fields.resize(paths.size());
    const int n = static_cast<int>(paths.size());
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) build_field(paths[i], width, height, band, tol, fields[i]);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            build_field(paths[i], width, height, band, tol, fields[i]);
    };
    std::vector<std::thread> pool;
    const int k = std::min(threads, n);
    pool.reserve(k);
    for (int i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

double resolve_band(const RenderOptions& opts) {
    double band = opts.band > 0.0 ? opts.band : opts.sigma + 1.0;
    return std::max(band, opts.sigma + 1.0);
}

}  // namespace

double soft_coverage(double signed_distance, double sigma) {
    assert(sigma > 0.0);
    if (signed_distance >= sigma) return 0.0;
    if (signed_distance <= -sigma) return 1.0;
    const double u = signed_distance / sigma;
    return 0.5 - (3.0 * u - u * u * u) * 0.25;
}

size_t RenderTape::entry_count() const {
    size_t n = 0;
    for (const PathTape& p : paths) n += p.entries.size();
    return n;
}

size_t RenderTape::byte_size() const {
    size_t n = sizeof(RenderTape);
    for (const PathTape& p : paths) {
        n += sizeof(PathTape);
        n += p.entries.size() * sizeof(TapeEntry);
        n += p.poly.vertices.size() * (sizeof(Vec2) + sizeof(SourceParam));
    }
    return n;
}

RasterImage render(std::span<const ClosedBezierPath> paths, std::span<const FillColor> colors,
                   int width, int height, const FillColor& background, const RenderOptions& opts) {
    if (paths.size() != colors.size()) throw std::invalid_argument("render: |paths| != |colors|");
    const double band = resolve_band(opts);
    std::vector<PathField>& fields = field_workspace();
    build_all_fields(paths, width, height, band, opts.flatten_tol, opts.threads, fields);

    RasterImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) = (c == 0 ? background.r : c == 1 ? background.g : background.b);

    for (size_t p = 0; p < fields.size(); ++p) {
        const PathField& f = fields[p];
        const FillColor& col = colors[p];
        const double rgb[3] = {col.r, col.g, col.b};
        const int rw = f.rect.width();
        for (int y = f.rect.y0; y < f.rect.y1; ++y) {
            const size_t row = static_cast<size_t>(y - f.rect.y0) * rw;
            for (int x = f.rect.x0; x < f.rect.x1; ++x) {
                const size_t i = row + (x - f.rect.x0);
                const double sd = f.inside[i] ? -static_cast<double>(f.dist[i])
                                              : static_cast<double>(f.dist[i]);
                const double cov = soft_coverage(sd, opts.sigma);
                if (cov <= 0.0) continue;
                const double alpha = col.a * cov;
                for (int c = 0; c < 3; ++c) {
                    double& px = img.at(x, y, c);
                    px = px * (1.0 - alpha) + rgb[c] * alpha;
                }
            }
        }
    }
    return img;
}

std::pair<RasterImage, RenderTape> render_with_tape(std::span<const ClosedBezierPath> paths,
                                                    std::span<const FillColor> colors, int width,
                                                    int height, const FillColor& background,
                                                    const RenderOptions& opts,
                                                    std::vector<DistanceMap>* dmaps_out) {
    if (paths.size() != colors.size())
        throw std::invalid_argument("render_with_tape: |paths| != |colors|");
    const double band = resolve_band(opts);
    std::vector<PathField>& fields = field_workspace();
    build_all_fields(paths, width, height, band, opts.flatten_tol, opts.threads, fields);

    if (dmaps_out) {
        dmaps_out->resize(paths.size());
        for (size_t p = 0; p < fields.size(); ++p) {
            DistanceMap& dm = (*dmaps_out)[p];
            dm.width = width;
            dm.height = height;
            dm.values.assign(static_cast<size_t>(width) * height, band);
            const PathField& f = fields[p];
            const int rw = f.rect.width();
            for (int y = f.rect.y0; y < f.rect.y1; ++y) {
                const size_t row = static_cast<size_t>(y - f.rect.y0) * rw;
                for (int x = f.rect.x0; x < f.rect.x1; ++x) {
                    dm.at(x, y) = std::min(static_cast<double>(f.dist[row + (x - f.rect.x0)]), band);
                }
            }
        }
    }

    RasterImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) = (c == 0 ? background.r : c == 1 ? background.g : background.b);

    RenderTape tape;
    tape.width = width;
    tape.height = height;
    tape.sigma = opts.sigma;
    tape.background = background;
    tape.paths.resize(paths.size());

    for (size_t p = 0; p < fields.size(); ++p) {
        PathField& f = fields[p];
        PathTape& pt = tape.paths[p];
        pt.poly = std::move(f.poly);
        pt.color = colors[p];
        const double rgb[3] = {colors[p].r, colors[p].g, colors[p].b};
        const int rw = f.rect.width();
        for (int y = f.rect.y0; y < f.rect.y1; ++y) {
            const size_t row = static_cast<size_t>(y - f.rect.y0) * rw;
            for (int x = f.rect.x0; x < f.rect.x1; ++x) {
                const size_t i = row + (x - f.rect.x0);
                const double sd = f.inside[i] ? -static_cast<double>(f.dist[i])
                                              : static_cast<double>(f.dist[i]);
                const double cov = soft_coverage(sd, opts.sigma);
                if (cov <= 0.0) continue;
                TapeEntry e;
                e.pixel = y * width + x;
                e.cov = cov;
                e.sd = static_cast<float>(sd);
                e.edge = f.edge[i];
                e.edge_t = f.edge_t[i];
                const double alpha = colors[p].a * cov;
                for (int c = 0; c < 3; ++c) {
                    double& px = img.at(x, y, c);
                    e.prefix[c] = px;
                    px = px * (1.0 - alpha) + rgb[c] * alpha;
                }
                pt.entries.push_back(e);
            }
        }
    }
    return {std::move(img), std::move(tape)};
}

RasterImage replay(const RenderTape& tape) {
    RasterImage img(tape.width, tape.height);
    for (int y = 0; y < tape.height; ++y)
        for (int x = 0; x < tape.width; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) =
                    (c == 0 ? tape.background.r : c == 1 ? tape.background.g : tape.background.b);
    for (const PathTape& pt : tape.paths) {
        const double rgb[3] = {pt.color.r, pt.color.g, pt.color.b};
        for (const TapeEntry& e : pt.entries) {
            const double alpha = pt.color.a * e.cov;
            double* px = &img.data[static_cast<size_t>(e.pixel) * 3];
            for (int c = 0; c < 3; ++c) px[c] = px[c] * (1.0 - alpha) + rgb[c] * alpha;
        }
    }
    return img;
}

RenderGrads backprop(const RenderTape& tape, const RasterImage& dL_dImage) {
    if (dL_dImage.width != tape.width || dL_dImage.height != tape.height)
        throw std::invalid_argument("backprop: tape/image shape mismatch");

    RenderGrads grads;
    grads.points.resize(tape.paths.size());
    grads.colors.assign(tape.paths.size(), {0.0, 0.0, 0.0, 0.0});

    // Transmittance of everything above the layer currently being processed.
    std::vector<double> trans(static_cast<size_t>(tape.width) * tape.height, 1.0);

    for (size_t pi = tape.paths.size(); pi-- > 0;) {
        const PathTape& pt = tape.paths[pi];
        const size_t n_vertices = pt.poly.vertices.size();
        // Infer control point count from the flattened source segments.
        int segs = 0;
        for (const SourceParam& sp : pt.poly.source_params) segs = std::max(segs, sp.segment + 1);
        grads.points[pi].assign(static_cast<size_t>(3 * segs), Vec2{});
        std::array<double, 4>& cg = grads.colors[pi];
        const double rgb[3] = {pt.color.r, pt.color.g, pt.color.b};

        for (const TapeEntry& e : pt.entries) {
            const double T = trans[static_cast<size_t>(e.pixel)];
            const double cov = e.cov;
            const double alpha = pt.color.a * cov;
            const double* dL = &dL_dImage.data[static_cast<size_t>(e.pixel) * 3];

            double dL_dalpha = 0.0;
            for (int c = 0; c < 3; ++c) {
                cg[c] += dL[c] * alpha * T;
                dL_dalpha += dL[c] * (rgb[c] - e.prefix[c]) * T;
            }
            cg[3] += dL_dalpha * cov;

            trans[static_cast<size_t>(e.pixel)] = T * (1.0 - alpha);

            // Coverage ramp is flat outside (-sigma, sigma); nothing to chain.
            const double sd = static_cast<double>(e.sd);
            if (std::abs(sd) >= tape.sigma || e.edge < 0) continue;
            const double u = sd / tape.sigma;
            const double dcov_dsd = -3.0 * (1.0 - u * u) / (4.0 * tape.sigma);
            const double dL_dsd = dL_dalpha * pt.color.a * dcov_dsd;

            const double dist = std::abs(sd);
            if (dist < 1e-9) continue;  // pixel center on the contour
            const double sign = sd < 0.0 ? -1.0 : 1.0;
            const int x = e.pixel % tape.width;
            const int y = e.pixel / tape.width;
            const Vec2 p{x + 0.5, y + 0.5};
            const Vec2 va = pt.poly.vertices[static_cast<size_t>(e.edge)];
            const Vec2 vb = pt.poly.vertices[(static_cast<size_t>(e.edge) + 1) % n_vertices];
            const double t = static_cast<double>(e.edge_t);
            const Vec2 q = va + t * (vb - va);
            const Vec2 dir = (1.0 / dist) * (q - p);  // d dist / d q

            const double scale = dL_dsd * sign;
            const Vec2 g_va = (scale * (1.0 - t)) * dir;
            const Vec2 g_vb = (scale * t) * dir;

            // Route vertex adjoints to control points via the Bezier basis at
            // the recorded parameters (t treated as constant).
            const size_t verts[2] = {static_cast<size_t>(e.edge),
                                     (static_cast<size_t>(e.edge) + 1) % n_vertices};
            const Vec2 gv[2] = {g_va, g_vb};
            for (int vi = 0; vi < 2; ++vi) {
                const SourceParam sp = pt.poly.source_params[verts[vi]];
                const double tt = sp.t;
                const double s = 1.0 - tt;
                const double w[4] = {s * s * s, 3.0 * s * s * tt, 3.0 * s * tt * tt, tt * tt * tt};
                const int base = 3 * sp.segment;
                const int idx[4] = {base, base + 1, base + 2, (base + 3) % (3 * segs)};
                for (int ci = 0; ci < 4; ++ci) {
                    grads.points[pi][static_cast<size_t>(idx[ci])] =
                        grads.points[pi][static_cast<size_t>(idx[ci])] + w[ci] * gv[vi];
                }
            }
        }
    }
    return grads;
}

uint64_t field_build_count() { return g_field_builds.load(); }

}  // namespace layervec
