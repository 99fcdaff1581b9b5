// Cubic Bezier paths, flattening, winding numbers and distance fields.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace layervec {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

/// A closed chain of cubic Bezier segments sharing endpoints.
///
/// Stores the 3s free control points of an s-segment loop; segment k uses
/// (p[3k], p[3k+1], p[3k+2], p[3(k+1) mod 3s]), so the boundary is closed by
/// construction and needs no closure constraint during optimization.
struct ClosedBezierPath {
    std::vector<Vec2> points;

    int segment_count() const { return static_cast<int>(points.size()) / 3; }
    std::array<Vec2, 4> segment(int k) const;
    bool valid() const { return points.size() >= 3 && points.size() % 3 == 0; }
};

/// Where a polyline vertex came from on the source path.
struct SourceParam {
    int segment = 0;
    double t = 0.0;
};

struct Polyline {
    std::vector<Vec2> vertices;
    std::vector<SourceParam> source_params;
    bool closed = false;

    int edge_count() const {
        int n = static_cast<int>(vertices.size());
        return closed ? n : (n > 0 ? n - 1 : 0);
    }
    // Edge e runs from vertices[e] to vertices[(e+1) % n].
    Vec2 edge_start(int e) const { return vertices[static_cast<size_t>(e)]; }
    Vec2 edge_end(int e) const { return vertices[static_cast<size_t>(e + 1) % vertices.size()]; }
};

/// Per-pixel unsigned distance (pixels) from pixel centers (i+0.5, j+0.5)
/// to a path's contour.
struct DistanceMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
};

/// Point on the cubic with control quadruple `quad` at parameter t in [0,1].
Vec2 eval_cubic(const std::array<Vec2, 4>& quad, double t);

/// Adaptive flattening: the returned closed polyline deviates from the true
/// curve by at most `tol` pixels. Every vertex records the (segment, t) it
/// was evaluated at so gradients can be routed back to control points.
Polyline flatten(const ClosedBezierPath& path, double tol);

/// Standard winding count of a closed polyline around `p`; nonzero means
/// inside under the nonzero fill rule. Points exactly on an edge get one of
/// the two adjacent values.
int winding_number(const Polyline& poly, Vec2 p);

Polyline make_polyline(std::vector<Vec2> vertices, bool closed = true);

/// Distance from `p` to edge (a, b); `t_out`, if non-null, receives the
/// parameter of the closest point along the edge.
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, double* t_out = nullptr);

DistanceMap unsigned_distance_map(const ClosedBezierPath& path, int width, int height, double tol);

/// Number of transversal crossings between non-adjacent edges of the
/// flattened contour. Zero for simple (non-self-intersecting) paths.
int count_self_intersections(const ClosedBezierPath& path, double tol);

/// 3s control points placed uniformly on a circle, at angles 2*pi*k/(3s).
ClosedBezierPath make_circle_path(Vec2 center, double radius, int segments);

/// Uniform spatial hash over polyline edges. Exact nearest-edge queries;
/// cell size is max(4px, mean edge length).
class EdgeGrid {
public:
    explicit EdgeGrid(const Polyline& poly);

    struct Result {
        double distance = 0.0;
        int edge = -1;
        double edge_t = 0.0;
    };
    Result query(Vec2 p) const;

private:
    const Polyline& poly_;
    double cell_ = 4.0;
    double min_x_ = 0.0, min_y_ = 0.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int32_t>> buckets_;
    std::vector<int32_t> occupied_;       // flat indices of non-empty cells
    std::vector<uint16_t> cell_rings_;    // Chebyshev cell distance to nearest occupied cell

    void scan_cells(int cx, int cy, int ring, Vec2 p, Result& best) const;
};

}  // namespace layervec
