#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "layervec/losses.hpp"
#include "layervec/render.hpp"
#include "oracles.hpp"

using namespace layervec;

namespace {

const FillColor kWhite{1, 1, 1, 1};

RasterImage checker_target(int w, int h) {
    RasterImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) = ((x / 8 + y / 8 + c) % 2) ? 0.85 : 0.25;
    return img;
}

}  // namespace

TEST_CASE("soft_coverage ramp endpoints, center and stated value") {
    CHECK(soft_coverage(0.0, 1.0) == doctest::Approx(0.5));
    CHECK(soft_coverage(-1.0, 1.0) == doctest::Approx(1.0));
    CHECK(soft_coverage(1.0, 1.0) == doctest::Approx(0.0));
    // 0.5 - (3u - u^3)/4 at u = 1/2
    CHECK(soft_coverage(0.5, 1.0) == doctest::Approx(0.15625).epsilon(1e-12));
    CHECK(soft_coverage(2.5, 5.0) == doctest::Approx(0.15625).epsilon(1e-12));
}

TEST_CASE("render: empty path list gives the background") {
    const RasterImage img = render({}, {}, 8, 8, kWhite, {});
    for (double v : img.data) CHECK(v == 1.0);
}

TEST_CASE("render: full-canvas opaque path gives uniform color") {
    // Big circle path covering the whole 16x16 canvas with margin > sigma.
    const std::vector<ClosedBezierPath> paths = {make_circle_path({8, 8}, 40, 4)};
    const std::vector<FillColor> colors = {{0.9, 0.1, 0.1, 1.0}};
    const RasterImage img = render(paths, colors, 16, 16, kWhite, {});
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            CHECK(img.at(x, y, 0) == doctest::Approx(0.9));
            CHECK(img.at(x, y, 1) == doctest::Approx(0.1));
        }
    }
}

TEST_CASE("render: pixel centered on a straight edge blends 50/50") {
    const ClosedBezierPath rect =
        oracles::polygon_path({{10.5, 2}, {17, 2}, {17, 18}, {10.5, 18}});
    const std::vector<ClosedBezierPath> paths = {rect};
    const std::vector<FillColor> colors = {{0.2, 0.4, 0.8, 1.0}};
    RenderOptions opts;
    opts.sigma = 1.0;
    const RasterImage img = render(paths, colors, 20, 20, kWhite, opts);
    CHECK(img.at(10, 10, 0) == doctest::Approx(0.5 * 0.2 + 0.5).epsilon(1e-9));
    CHECK(img.at(10, 10, 2) == doctest::Approx(0.5 * 0.8 + 0.5).epsilon(1e-9));

    const RasterImage oracle = oracles::hard_render(paths, colors, 20, 20, kWhite, 16, 0.05);
    CHECK(std::abs(img.at(10, 10, 0) - oracle.at(10, 10, 0)) < 0.02);
}

TEST_CASE("render_with_tape: replay is bit-exact and matches render()") {
    std::mt19937_64 rng(41);
    std::vector<ClosedBezierPath> paths;
    std::vector<FillColor> colors;
    for (int i = 0; i < 3; ++i) {
        paths.push_back(oracles::random_blob(
            rng, {oracles::urand(rng, 10, 50), oracles::urand(rng, 10, 50)},
            oracles::urand(rng, 5, 15), 4, 0.3));
        colors.push_back({oracles::urand(rng), oracles::urand(rng), oracles::urand(rng),
                          oracles::urand(rng, 0.4, 1.0)});
    }
    const auto [img, tape] = render_with_tape(paths, colors, 64, 64, kWhite, {});
    const RasterImage replayed = replay(tape);
    REQUIRE(replayed.data.size() == img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) CHECK(replayed.data[i] == img.data[i]);

    const RasterImage direct = render(paths, colors, 64, 64, kWhite, {});
    for (size_t i = 0; i < img.data.size(); ++i) CHECK(direct.data[i] == img.data[i]);
}

TEST_CASE("tape covers the boundary band and only coverage > 0") {
    // 240x240 instrumentation: entries must be exactly the pixels with
    // coverage, i.e. O(boundary band + covered interior), not O(bbox).
    const std::vector<ClosedBezierPath> paths = {make_circle_path({120, 120}, 40, 4)};
    const std::vector<FillColor> colors = {{0.3, 0.6, 0.2, 0.8}};
    RenderOptions opts;
    opts.sigma = 1.0;
    const auto [img, tape] = render_with_tape(paths, colors, 240, 240, kWhite, opts);

    // Independent count via exhaustive distance + winding.
    const Polyline poly = flatten(paths[0], opts.flatten_tol);
    size_t expected = 0;
    size_t band_pixels = 0;
    for (int y = 0; y < 240; ++y) {
        for (int x = 0; x < 240; ++x) {
            const Vec2 p{x + 0.5, y + 0.5};
            const double d = oracles::point_to_polyline(p, poly);
            const bool inside = oracles::raycast_winding(poly, p) != 0;
            const double sd = inside ? -d : d;
            if (soft_coverage(sd, opts.sigma) > 0.0) ++expected;
            if (std::abs(sd) < opts.sigma) ++band_pixels;
        }
    }
    CHECK(tape.entry_count() == expected);
    CHECK(tape.entry_count() >= band_pixels);
    // Compact tape: entries plus the polyline, far below a dense raster.
    CHECK(tape.byte_size() < expected * sizeof(TapeEntry) * 3 + 16384);
    CHECK(tape.byte_size() <
          static_cast<size_t>(240) * 240 * sizeof(TapeEntry) / 4);
}

TEST_CASE("backprop: zero loss gradient gives zero parameter gradients") {
    const std::vector<ClosedBezierPath> paths = {make_circle_path({16, 16}, 8, 4)};
    const std::vector<FillColor> colors = {{0.5, 0.2, 0.7, 0.9}};
    const auto [img, tape] = render_with_tape(paths, colors, 32, 32, kWhite, {});
    const RenderGrads grads = backprop(tape, RasterImage(32, 32, 0.0));
    for (const Vec2& g : grads.points[0]) {
        CHECK(g.x == 0.0);
        CHECK(g.y == 0.0);
    }
    for (double g : grads.colors[0]) CHECK(g == 0.0);
}

TEST_CASE("backprop: fully occluded layers get no color gradient") {
    // Small disc completely under a bigger opaque disc.
    const std::vector<ClosedBezierPath> paths = {make_circle_path({16, 16}, 4, 4),
                                                 make_circle_path({16, 16}, 12, 4)};
    const std::vector<FillColor> colors = {{0.9, 0.0, 0.0, 1.0}, {0.0, 0.9, 0.0, 1.0}};
    const auto [img, tape] = render_with_tape(paths, colors, 32, 32, kWhite, {});
    const RenderGrads grads = backprop(tape, RasterImage(32, 32, 1.0));
    for (int c = 0; c < 4; ++c) CHECK(grads.colors[0][c] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(grads.colors[1][0]) > 0.0);
}

TEST_CASE("backprop rejects mismatched shapes") {
    const std::vector<ClosedBezierPath> paths = {make_circle_path({8, 8}, 4, 4)};
    const std::vector<FillColor> colors = {{0.5, 0.5, 0.5, 1.0}};
    const auto [img, tape] = render_with_tape(paths, colors, 16, 16, kWhite, {});
    CHECK_THROWS_AS(backprop(tape, RasterImage(8, 16, 0.0)), std::invalid_argument);
}

TEST_CASE("analytic gradients match finite differences on a random scene") {
    std::mt19937_64 rng(43);
    const RasterImage target = checker_target(48, 48);
    for (int trial = 0; trial < 3; ++trial) {
        const std::vector<ClosedBezierPath> paths = {oracles::random_blob(
            rng, {oracles::urand(rng, 18, 30), oracles::urand(rng, 18, 30)},
            oracles::urand(rng, 8, 14), 4, 0.25)};
        const std::vector<FillColor> colors = {{oracles::urand(rng, 0.1, 0.9),
                                                oracles::urand(rng, 0.1, 0.9),
                                                oracles::urand(rng, 0.1, 0.9),
                                                oracles::urand(rng, 0.3, 0.9)}};
        const double sigma = 1.0, lambda = 0.01, tau = 10.0;
        const oracles::FrozenScene scene =
            oracles::freeze_scene(paths, colors, target, kWhite, sigma, lambda, tau, 0.25);

        RenderOptions opts;
        opts.sigma = sigma;
        opts.band = std::max(sigma, tau) + 1.0;
        std::vector<DistanceMap> dmaps;
        const auto [img, tape] = render_with_tape(paths, colors, 48, 48, kWhite, opts, &dmaps);
        const UdfWeights weights = udf_weights(dmaps, tau);
        const UdfLossResult udf = udf_loss(target, img, weights);
        const XingLossResult xing = xing_loss(paths);
        const RenderGrads grads = backprop(tape, udf.dL_dImage);

        const oracles::FdGradients fd = oracles::finite_difference_gradients(scene, 1e-3, 1e-3);

        std::vector<double> ga, gf;
        for (size_t i = 0; i < paths[0].points.size(); ++i) {
            Vec2 g = grads.points[0][i] + lambda * xing.point_grads[0][i];
            ga.push_back(g.x);
            ga.push_back(g.y);
            gf.push_back(fd.points[0][i].x);
            gf.push_back(fd.points[0][i].y);
        }
        CHECK(oracles::relative_error(ga, gf, 1e-12) < 1e-2);

        std::vector<double> ca(grads.colors[0].begin(), grads.colors[0].end());
        std::vector<double> cf(fd.colors[0].begin(), fd.colors[0].end());
        CHECK(oracles::relative_error(ca, cf, 1e-12) < 1e-6);
    }
}

TEST_CASE("swapping non-overlapping opaque paths leaves the image unchanged") {
    const std::vector<ClosedBezierPath> a = {make_circle_path({12, 12}, 6, 4),
                                             make_circle_path({40, 40}, 6, 4)};
    const std::vector<ClosedBezierPath> b = {a[1], a[0]};
    const std::vector<FillColor> ca = {{0.8, 0.1, 0.1, 1.0}, {0.1, 0.1, 0.8, 1.0}};
    const std::vector<FillColor> cb = {ca[1], ca[0]};
    const RasterImage ia = render(a, ca, 52, 52, kWhite, {});
    const RasterImage ib = render(b, cb, 52, 52, kWhite, {});
    for (size_t i = 0; i < ia.data.size(); ++i) CHECK(ia.data[i] == ib.data[i]);
}

TEST_CASE("sigma 0.5 render tracks the supersampled hard oracle") {
    std::mt19937_64 rng(47);
    std::vector<ClosedBezierPath> paths;
    std::vector<FillColor> colors;
    for (int i = 0; i < 3; ++i) {
        paths.push_back(oracles::random_blob(
            rng, {oracles::urand(rng, 16, 48), oracles::urand(rng, 16, 48)},
            oracles::urand(rng, 8, 18), 4, 0.2));
        colors.push_back(
            {oracles::urand(rng), oracles::urand(rng), oracles::urand(rng), 1.0});
    }
    RenderOptions opts;
    opts.sigma = 0.5;
    const RasterImage soft = render(paths, colors, 64, 64, kWhite, opts);
    const RasterImage hard = oracles::hard_render(paths, colors, 64, 64, kWhite, 16, 0.05);
    CHECK(oracles::mean_abs_diff(soft, hard) < 0.01);
}

TEST_CASE("threads > 1 reproduces the single-thread image") {
    std::mt19937_64 rng(53);
    std::vector<ClosedBezierPath> paths;
    std::vector<FillColor> colors;
    for (int i = 0; i < 4; ++i) {
        paths.push_back(oracles::random_blob(
            rng, {oracles::urand(rng, 10, 54), oracles::urand(rng, 10, 54)},
            oracles::urand(rng, 6, 14), 4, 0.3));
        colors.push_back({oracles::urand(rng), oracles::urand(rng), oracles::urand(rng), 0.8});
    }
    RenderOptions one;
    RenderOptions four;
    four.threads = 4;
    const RasterImage i1 = render(paths, colors, 64, 64, kWhite, one);
    const RasterImage i4 = render(paths, colors, 64, 64, kWhite, four);
    for (size_t i = 0; i < i1.data.size(); ++i) CHECK(i1.data[i] == i4.data[i]);
}

TEST_CASE("field build counter advances with every render") {
    const std::vector<ClosedBezierPath> paths = {make_circle_path({8, 8}, 4, 4)};
    const std::vector<FillColor> colors = {{0.5, 0.5, 0.5, 1.0}};
    const uint64_t before = field_build_count();
    render(paths, colors, 16, 16, kWhite, {});
    render(paths, colors, 16, 16, kWhite, {});
    CHECK(field_build_count() == before + 2);
}
