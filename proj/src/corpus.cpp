#include "layervec/corpus.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

namespace layervec {

namespace {

// Explicit [0,1) mapping keeps the corpus byte-identical across standard
// library implementations (uniform_real_distribution is not pinned).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int index(int n) { return static_cast<int>(gen_() % static_cast<uint64_t>(n)); }

private:
    std::mt19937_64 gen_;
};

enum class ShapeKind { kDisc, kRoundedSquare, kCrescent };

struct Shape {
    ShapeKind kind = ShapeKind::kDisc;
    Vec2 center;
    double radius = 0.0;       // disc / crescent base
    double half = 0.0;         // rounded square half-size
    double corner = 0.0;       // rounded square corner radius
    Vec2 cut_center;           // crescent cut disc
    double cut_radius = 0.0;
    std::array<double, 3> color{};

    bool contains(Vec2 p) const {
        switch (kind) {
            case ShapeKind::kDisc: {
                const Vec2 d = p - center;
                return dot(d, d) < radius * radius;
            }
            case ShapeKind::kRoundedSquare: {
                const double qx = std::abs(p.x - center.x) - (half - corner);
                const double qy = std::abs(p.y - center.y) - (half - corner);
                const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0);
                const double d = std::sqrt(ox * ox + oy * oy) + std::min(std::max(qx, qy), 0.0);
                return d < corner;
            }
            case ShapeKind::kCrescent: {
                const Vec2 d = p - center;
                if (dot(d, d) >= radius * radius) return false;
                const Vec2 c = p - cut_center;
                return dot(c, c) >= cut_radius * cut_radius;
            }
        }
        return false;
    }
};

const std::array<std::array<double, 3>, 12> kPalette = {{
    {0.86, 0.20, 0.18},  // red
    {0.95, 0.56, 0.12},  // orange
    {0.98, 0.78, 0.10},  // yellow
    {0.20, 0.65, 0.32},  // green
    {0.20, 0.40, 0.85},  // blue
    {0.55, 0.30, 0.75},  // purple
    {0.55, 0.35, 0.20},  // brown
    {0.25, 0.25, 0.28},  // dark gray
    {0.10, 0.60, 0.60},  // teal
    {0.95, 0.45, 0.60},  // pink
    {0.10, 0.15, 0.45},  // navy
    {0.12, 0.12, 0.12},  // near-black
}};

std::vector<std::array<double, 3>> pick_colors(Rng& rng, int n) {
    std::vector<int> pool(kPalette.size());
    for (size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
    std::vector<std::array<double, 3>> out;
    for (int i = 0; i < n; ++i) {
        const int j = rng.index(static_cast<int>(pool.size()));
        out.push_back(kPalette[static_cast<size_t>(pool[static_cast<size_t>(j)])]);
        pool.erase(pool.begin() + j);
    }
    return out;
}

CorpusImage rasterize(const std::string& name, const std::vector<Shape>& shapes) {
    constexpr int kSS = 4;  // 4x4 = 16 samples per pixel
    const int n = kCorpusSize;
    CorpusImage out;
    out.name = name;
    out.image = RasterImage(n, n, 1.0);  // white background
    out.component_count = static_cast<int>(shapes.size());
    out.components.resize(shapes.size());
    for (size_t s = 0; s < shapes.size(); ++s) out.components[s].color = shapes[s].color;

    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double acc[3] = {0, 0, 0};
            int pure = -2;  // -2 unset, -1 background, >=0 shape index, INT_MIN mixed
            bool mixed = false;
            for (int sy = 0; sy < kSS; ++sy) {
                for (int sx = 0; sx < kSS; ++sx) {
                    const Vec2 p{x + (sx + 0.5) / kSS, y + (sy + 0.5) / kSS};
                    int hit = -1;
                    for (int s = static_cast<int>(shapes.size()) - 1; s >= 0; --s) {
                        if (shapes[static_cast<size_t>(s)].contains(p)) {
                            hit = s;
                            break;
                        }
                    }
                    if (pure == -2) pure = hit;
                    else if (pure != hit) mixed = true;
                    if (hit >= 0) {
                        for (int c = 0; c < 3; ++c) acc[c] += shapes[static_cast<size_t>(hit)].color[c];
                    } else {
                        for (int c = 0; c < 3; ++c) acc[c] += 1.0;
                    }
                }
            }
            for (int c = 0; c < 3; ++c) out.image.at(x, y, c) = acc[c] / (kSS * kSS);
            if (!mixed && pure >= 0) out.components[static_cast<size_t>(pure)].area += 1;
        }
    }
    return out;
}

std::vector<Shape> make_face(Rng& rng, int component_count) {
    std::vector<Shape> shapes;
    const double fr = rng.uniform(68.0, 84.0);
    const Vec2 fc{kCorpusSize / 2.0 + rng.uniform(-10.0, 10.0),
                  kCorpusSize / 2.0 + rng.uniform(-10.0, 10.0)};
    const auto colors = pick_colors(rng, component_count);

    Shape face;
    face.kind = ShapeKind::kDisc;
    face.center = fc;
    face.radius = fr;
    face.color = colors[0];
    shapes.push_back(face);

    // Fixed feature slots scaled by the face radius; all stay well inside.
    struct Slot {
        double dx, dy, size;
        bool bar;  // rounded bar instead of a disc
    };
    const Slot slots[7] = {
        {-0.38, -0.28, 0.16, false},  // left eye
        {+0.38, -0.28, 0.16, false},  // right eye
        {0.0, +0.42, 0.30, true},     // mouth
        {0.0, +0.05, 0.11, false},    // nose
        {-0.55, +0.18, 0.12, false},  // left cheek
        {+0.55, +0.18, 0.12, false},  // right cheek
        {0.0, -0.62, 0.22, true},     // brow bar
    };
    for (int i = 0; i < component_count - 1; ++i) {
        const Slot& slot = slots[i];
        Shape s;
        s.center = {fc.x + slot.dx * fr + rng.uniform(-2.0, 2.0),
                    fc.y + slot.dy * fr + rng.uniform(-2.0, 2.0)};
        s.color = colors[static_cast<size_t>(i + 1)];
        if (slot.bar) {
            s.kind = ShapeKind::kRoundedSquare;
            s.half = slot.size * fr * 0.5 + 4.0;
            s.corner = std::min(6.0, s.half * 0.6);
        } else {
            s.kind = ShapeKind::kDisc;
            s.radius = slot.size * fr * 0.5 + 6.0;
        }
        shapes.push_back(s);
    }
    return shapes;
}

}  // namespace

std::vector<CorpusImage> generate_corpus(uint64_t seed) {
    Rng rng(seed);
    std::vector<CorpusImage> corpus;
    corpus.reserve(20);
    char name[64];

    for (int i = 0; i < 5; ++i) {
        Shape s;
        s.kind = ShapeKind::kDisc;
        s.center = {kCorpusSize / 2.0 + rng.uniform(-25.0, 25.0),
                    kCorpusSize / 2.0 + rng.uniform(-25.0, 25.0)};
        s.radius = rng.uniform(52.0, 88.0);
        s.color = pick_colors(rng, 1)[0];
        std::snprintf(name, sizeof(name), "disc_%02d", i);
        corpus.push_back(rasterize(name, {s}));
    }
    for (int i = 5; i < 9; ++i) {
        Shape s;
        s.kind = ShapeKind::kRoundedSquare;
        s.center = {kCorpusSize / 2.0 + rng.uniform(-20.0, 20.0),
                    kCorpusSize / 2.0 + rng.uniform(-20.0, 20.0)};
        s.half = rng.uniform(42.0, 70.0);
        s.corner = rng.uniform(8.0, 20.0);
        s.color = pick_colors(rng, 1)[0];
        std::snprintf(name, sizeof(name), "rsquare_%02d", i);
        corpus.push_back(rasterize(name, {s}));
    }
    for (int i = 9; i < 12; ++i) {
        Shape s;
        s.kind = ShapeKind::kCrescent;
        s.center = {kCorpusSize / 2.0 + rng.uniform(-15.0, 15.0),
                    kCorpusSize / 2.0 + rng.uniform(-15.0, 15.0)};
        s.radius = rng.uniform(55.0, 75.0);
        const double ang = rng.uniform(0.0, 6.28318);
        const double off = s.radius * rng.uniform(0.55, 0.8);
        s.cut_center = {s.center.x + off * std::cos(ang), s.center.y + off * std::sin(ang)};
        s.cut_radius = s.radius * rng.uniform(0.6, 0.85);
        s.color = pick_colors(rng, 1)[0];
        std::snprintf(name, sizeof(name), "crescent_%02d", i);
        corpus.push_back(rasterize(name, {s}));
    }
    const int face_k[8] = {2, 3, 4, 5, 6, 7, 8, 4};
    for (int i = 0; i < 8; ++i) {
        std::snprintf(name, sizeof(name), "face_k%d_%02d", face_k[i], 12 + i);
        corpus.push_back(rasterize(name, make_face(rng, face_k[i])));
    }
    return corpus;
}

std::string corpus_sidecar_json(const CorpusImage& img) {
    nlohmann::json j;
    j["name"] = img.name;
    j["width"] = img.image.width;
    j["height"] = img.image.height;
    j["component_count"] = img.component_count;
    nlohmann::json comps = nlohmann::json::array();
    for (const CorpusComponent& c : img.components) {
        comps.push_back({{"color", {c.color[0], c.color[1], c.color[2]}}, {"area", c.area}});
    }
    j["components"] = comps;
    return j.dump(2) + "\n";
}

}  // namespace layervec
