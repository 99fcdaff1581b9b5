#include "layervec/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace layervec {

double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

std::array<Vec2, 4> ClosedBezierPath::segment(int k) const {
    const size_t n = points.size();
    const size_t i = static_cast<size_t>(3 * k);
    return {points[i], points[i + 1], points[i + 2], points[(i + 3) % n]};
}

Vec2 eval_cubic(const std::array<Vec2, 4>& quad, double t) {
    assert(t >= 0.0 && t <= 1.0);
    const double s = 1.0 - t;
    const double b0 = s * s * s;
    const double b1 = 3.0 * s * s * t;
    const double b2 = 3.0 * s * t * t;
    const double b3 = t * t * t;
    return b0 * quad[0] + b1 * quad[1] + b2 * quad[2] + b3 * quad[3];
}

namespace {

// Control-point distance to the chord segment bounds the curve's deviation
// from it: the curve lies in the control hull, and point-to-segment distance
// is convex, so its maximum over the hull sits at a control point.
bool flat_enough(const std::array<Vec2, 4>& q, double tol) {
    return point_segment_distance(q[1], q[0], q[3]) <= tol &&
           point_segment_distance(q[2], q[0], q[3]) <= tol;
}

void split_cubic(const std::array<Vec2, 4>& q, std::array<Vec2, 4>& left,
                 std::array<Vec2, 4>& right) {
    const Vec2 p01 = 0.5 * (q[0] + q[1]);
    const Vec2 p12 = 0.5 * (q[1] + q[2]);
    const Vec2 p23 = 0.5 * (q[2] + q[3]);
    const Vec2 p012 = 0.5 * (p01 + p12);
    const Vec2 p123 = 0.5 * (p12 + p23);
    const Vec2 mid = 0.5 * (p012 + p123);
    left = {q[0], p01, p012, mid};
    right = {mid, p123, p23, q[3]};
}

constexpr int kMaxFlattenDepth = 24;

void flatten_segment(const std::array<Vec2, 4>& q, int seg, double t0, double t1, double tol,
                     int depth, Polyline& out) {
    if (depth >= kMaxFlattenDepth || flat_enough(q, tol)) {
        out.vertices.push_back(q[0]);
        out.source_params.push_back({seg, t0});
        return;
    }
    std::array<Vec2, 4> left, right;
    split_cubic(q, left, right);
    const double tm = 0.5 * (t0 + t1);
    flatten_segment(left, seg, t0, tm, tol, depth + 1, out);
    flatten_segment(right, seg, tm, t1, tol, depth + 1, out);
}

}  // namespace

Polyline flatten(const ClosedBezierPath& path, double tol) {
    assert(path.valid());
    assert(tol > 0.0);
    Polyline out;
    out.closed = true;
    const int s = path.segment_count();
    for (int k = 0; k < s; ++k) {
        flatten_segment(path.segment(k), k, 0.0, 1.0, tol, 0, out);
    }
    return out;
}

int winding_number(const Polyline& poly, Vec2 p) {
    assert(poly.closed);
    int wn = 0;
    const int e = poly.edge_count();
    for (int i = 0; i < e; ++i) {
        const Vec2 a = poly.edge_start(i);
        const Vec2 b = poly.edge_end(i);
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0.0) ++wn;
        } else {
            if (b.y <= p.y && cross(b - a, p - a) < 0.0) --wn;
        }
    }
    return wn;
}

Polyline make_polyline(std::vector<Vec2> vertices, bool closed) {
    Polyline poly;
    poly.vertices = std::move(vertices);
    poly.source_params.assign(poly.vertices.size(), SourceParam{});
    poly.closed = closed;
    return poly;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, double* t_out) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = 0.0;
    if (len2 > 1e-24) {
        t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    }
    const Vec2 q = a + t * ab;
    if (t_out) *t_out = t;
    return distance(p, q);
}

// ---------------------------------------------------------------------------
// EdgeGrid

EdgeGrid::EdgeGrid(const Polyline& poly) : poly_(poly) {
    const int e = poly.edge_count();
    double total_len = 0.0;
    double min_x = std::numeric_limits<double>::max(), min_y = min_x;
    double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
    for (const Vec2& v : poly.vertices) {
        min_x = std::min(min_x, v.x);
        min_y = std::min(min_y, v.y);
        max_x = std::max(max_x, v.x);
        max_y = std::max(max_y, v.y);
    }
    for (int i = 0; i < e; ++i) total_len += distance(poly.edge_start(i), poly.edge_end(i));
    cell_ = std::max(4.0, e > 0 ? total_len / e : 4.0);
    min_x_ = min_x - 0.5 * cell_;
    min_y_ = min_y - 0.5 * cell_;
    nx_ = std::max(1, static_cast<int>(std::ceil((max_x - min_x_) / cell_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::ceil((max_y - min_y_) / cell_)) + 1);
    buckets_.assign(static_cast<size_t>(nx_) * ny_, {});

    auto cell_of = [&](double v, double lo) { return static_cast<int>(std::floor((v - lo) / cell_)); };
    for (int i = 0; i < e; ++i) {
        const Vec2 a = poly.edge_start(i);
        const Vec2 b = poly.edge_end(i);
        const int x0 = std::clamp(cell_of(std::min(a.x, b.x), min_x_), 0, nx_ - 1);
        const int x1 = std::clamp(cell_of(std::max(a.x, b.x), min_x_), 0, nx_ - 1);
        const int y0 = std::clamp(cell_of(std::min(a.y, b.y), min_y_), 0, ny_ - 1);
        const int y1 = std::clamp(cell_of(std::max(a.y, b.y), min_y_), 0, ny_ - 1);
        for (int cy = y0; cy <= y1; ++cy)
            for (int cx = x0; cx <= x1; ++cx)
                buckets_[static_cast<size_t>(cy) * nx_ + cx].push_back(i);
    }

    // Chebyshev cell distance to the nearest occupied cell (8-connected BFS),
    // so queries can start scanning at the right ring instead of ring 0.
    cell_rings_.assign(buckets_.size(), std::numeric_limits<uint16_t>::max());
    std::queue<int32_t> frontier;
    for (size_t i = 0; i < buckets_.size(); ++i) {
        if (!buckets_[i].empty()) {
            occupied_.push_back(static_cast<int32_t>(i));
            cell_rings_[i] = 0;
            frontier.push(static_cast<int32_t>(i));
        }
    }
    while (!frontier.empty()) {
        const int32_t c = frontier.front();
        frontier.pop();
        const int cx = c % nx_, cy = c / nx_;
        const uint16_t next = static_cast<uint16_t>(cell_rings_[c] + 1);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= nx_ || y >= ny_) continue;
                const size_t n = static_cast<size_t>(y) * nx_ + x;
                if (cell_rings_[n] > next) {
                    cell_rings_[n] = next;
                    frontier.push(static_cast<int32_t>(n));
                }
            }
        }
    }
}

void EdgeGrid::scan_cells(int cx, int cy, int ring, Vec2 p, Result& best) const {
    const int x0 = cx - ring, x1 = cx + ring;
    const int y0 = cy - ring, y1 = cy + ring;
    auto visit = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return;
        for (int32_t e : buckets_[static_cast<size_t>(y) * nx_ + x]) {
            double t;
            const double d = point_segment_distance(p, poly_.edge_start(e), poly_.edge_end(e), &t);
            if (d < best.distance) best = {d, e, t};
        }
    };
    if (ring == 0) {
        visit(cx, cy);
        return;
    }
    for (int x = x0; x <= x1; ++x) {
        visit(x, y0);
        visit(x, y1);
    }
    for (int y = y0 + 1; y <= y1 - 1; ++y) {
        visit(x0, y);
        visit(x1, y);
    }
}

EdgeGrid::Result EdgeGrid::query(Vec2 p) const {
    Result best;
    best.distance = std::numeric_limits<double>::max();
    if (occupied_.empty()) return best;

    const int cx = std::clamp(static_cast<int>(std::floor((p.x - min_x_) / cell_)), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((p.y - min_y_) / cell_)), 0, ny_ - 1);
    const int start = cell_rings_[static_cast<size_t>(cy) * nx_ + cx];

    constexpr int kRingScanLimit = 8;
    if (start <= kRingScanLimit) {
        // Expand rings until no closer edge can exist beyond the next ring.
        for (int ring = start; ; ++ring) {
            if (best.edge >= 0 && (ring - 1) * cell_ > best.distance) break;
            const int span = std::max(nx_, ny_);
            if (ring > span && best.edge >= 0) break;
            scan_cells(cx, cy, ring, p, best);
        }
        return best;
    }

    // Far from the contour: only a handful of cells are occupied, so walk the
    // occupied list with a rectangle-distance reject.
    for (int32_t c : occupied_) {
        const int ox = c % nx_, oy = c / nx_;
        const double rx0 = min_x_ + ox * cell_, ry0 = min_y_ + oy * cell_;
        const double ddx = std::max({rx0 - p.x, 0.0, p.x - (rx0 + cell_)});
        const double ddy = std::max({ry0 - p.y, 0.0, p.y - (ry0 + cell_)});
        if (best.edge >= 0 && ddx * ddx + ddy * ddy >= best.distance * best.distance) continue;
        for (int32_t e : buckets_[c]) {
            double t;
            const double d = point_segment_distance(p, poly_.edge_start(e), poly_.edge_end(e), &t);
            if (d < best.distance) best = {d, e, t};
        }
    }
    return best;
}

DistanceMap unsigned_distance_map(const ClosedBezierPath& path, int width, int height, double tol) {
    assert(width >= 1 && height >= 1);
    const Polyline poly = flatten(path, tol);
    const EdgeGrid grid(poly);
    DistanceMap dm;
    dm.width = width;
    dm.height = height;
    dm.values.resize(static_cast<size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            dm.at(x, y) = grid.query({x + 0.5, y + 0.5}).distance;
        }
    }
    return dm;
}

namespace {

// Strict transversal crossing test: endpoints touching or collinear overlap
// do not count.
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
           ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

}  // namespace

int count_self_intersections(const ClosedBezierPath& path, double tol) {
    const Polyline poly = flatten(path, tol);
    const int e = poly.edge_count();
    int count = 0;
    for (int i = 0; i < e; ++i) {
        for (int j = i + 2; j < e; ++j) {
            if (i == 0 && j == e - 1) continue;  // adjacent through closure
            if (segments_cross(poly.edge_start(i), poly.edge_end(i), poly.edge_start(j),
                               poly.edge_end(j)))
                ++count;
        }
    }
    return count;
}

ClosedBezierPath make_circle_path(Vec2 center, double radius, int segments) {
    assert(radius > 0.0 && segments >= 1);
    ClosedBezierPath path;
    const int n = 3 * segments;
    path.points.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * k / n;
        path.points.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return path;
}

}  // namespace layervec
