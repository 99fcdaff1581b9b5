// SVG serialization and subset parsing, plus linear interpolation between
// two structurally matching documents.
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "layervec/geometry.hpp"
#include "layervec/render.hpp"

namespace layervec {

struct SvgShape {
    ClosedBezierPath path;
    FillColor fill;
};

/// Layer-ordered document: shapes appear bottom-most first, every path is a
/// closed cubic chain (one M, s C commands returning to the start, one Z).
struct SvgDocument {
    int width = 0;
    int height = 0;
    std::optional<FillColor> background;  // emitted as a full-canvas rect
    std::vector<SvgShape> shapes;
};

class SvgParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SvgDocument to_svg(std::span<const ClosedBezierPath> paths, std::span<const FillColor> colors,
                   int width, int height, std::optional<FillColor> background);

/// Canonical SVG 1.1 text: viewBox "0 0 w h", absolute M/C/Z commands with
/// 4-decimal coordinates, fills as rgb(...) plus fill-opacity, nonzero fill
/// rule. Serializing a parsed canonical document is byte-stable.
std::string svg_text(const SvgDocument& doc);

/// Inverse of svg_text for the emitted subset; anything outside it (strokes,
/// transforms, arcs, other elements) is rejected with a clear message.
SvgDocument from_svg(std::string_view text);

/// Pointwise (1-t)*a + t*b over control points and RGBA colors, pairing
/// shapes by layer index. Throws SvgParseError when the documents are not
/// interpolation-compatible.
SvgDocument interpolate(const SvgDocument& a, const SvgDocument& b, double t);

}  // namespace layervec
