#include "layervec/svgio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace layervec {

namespace {

int to_byte(double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

void append_coord(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    out += buf;
}

}  // namespace

SvgDocument to_svg(std::span<const ClosedBezierPath> paths, std::span<const FillColor> colors,
                   int width, int height, std::optional<FillColor> background) {
    if (paths.size() != colors.size()) throw SvgParseError("to_svg: |paths| != |colors|");
    SvgDocument doc;
    doc.width = width;
    doc.height = height;
    doc.background = background;
    doc.shapes.reserve(paths.size());
    for (size_t i = 0; i < paths.size(); ++i) doc.shapes.push_back({paths[i], colors[i]});
    return doc;
}

std::string svg_text(const SvgDocument& doc) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    char head[160];
    std::snprintf(head, sizeof(head),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  doc.width, doc.height, doc.width, doc.height);
    out += head;
    if (doc.background) {
        char rect[96];
        std::snprintf(rect, sizeof(rect), "<rect width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,%d)\"/>\n",
                      doc.width, doc.height, to_byte(doc.background->r), to_byte(doc.background->g),
                      to_byte(doc.background->b));
        out += rect;
    }
    for (const SvgShape& shape : doc.shapes) {
        const std::vector<Vec2>& pts = shape.path.points;
        const int s = shape.path.segment_count();
        out += "<path d=\"M ";
        append_coord(out, pts[0].x);
        out += ',';
        append_coord(out, pts[0].y);
        for (int k = 0; k < s; ++k) {
            out += " C";
            for (int j = 1; j <= 3; ++j) {
                const Vec2& p = pts[static_cast<size_t>(3 * k + j) % pts.size()];
                out += ' ';
                append_coord(out, p.x);
                out += ',';
                append_coord(out, p.y);
            }
        }
        out += " Z\"";
        char fill[96];
        std::snprintf(fill, sizeof(fill), " fill=\"rgb(%d,%d,%d)\" fill-opacity=\"%.4f\"",
                      to_byte(shape.fill.r), to_byte(shape.fill.g), to_byte(shape.fill.b),
                      std::clamp(shape.fill.a, 0.0, 1.0));
        out += fill;
        out += " fill-rule=\"nonzero\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eof() {
        skip_ws();
        return pos_ >= text_.size();
    }
    bool consume(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }
    bool peek_is(std::string_view token) {
        skip_ws();
        return text_.substr(pos_, token.size()) == token;
    }
    std::string_view rest() const { return text_.substr(pos_); }
    void advance(size_t n) { pos_ += n; }

    // Parses name="value" attribute pairs until '>' or '/>'.
    std::map<std::string, std::string> attributes(bool& self_closing) {
        std::map<std::string, std::string> attrs;
        self_closing = false;
        while (true) {
            skip_ws();
            if (pos_ >= text_.size()) throw SvgParseError("unexpected end of file inside a tag");
            if (text_[pos_] == '>') {
                ++pos_;
                return attrs;
            }
            if (text_.substr(pos_, 2) == "/>") {
                pos_ += 2;
                self_closing = true;
                return attrs;
            }
            size_t eq = pos_;
            while (eq < text_.size() && text_[eq] != '=' && !std::isspace(static_cast<unsigned char>(text_[eq])))
                ++eq;
            if (eq >= text_.size() || text_[eq] != '=')
                throw SvgParseError("malformed attribute near: " + std::string(text_.substr(pos_, 24)));
            std::string name(text_.substr(pos_, eq - pos_));
            pos_ = eq + 1;
            if (pos_ >= text_.size() || text_[pos_] != '"')
                throw SvgParseError("attribute value must be double-quoted: " + name);
            ++pos_;
            const size_t end = text_.find('"', pos_);
            if (end == std::string_view::npos) throw SvgParseError("unterminated attribute: " + name);
            attrs[name] = std::string(text_.substr(pos_, end - pos_));
            pos_ = end + 1;
        }
    }

private:
    std::string_view text_;
    size_t pos_ = 0;
};

double parse_number(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw SvgParseError(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

FillColor parse_rgb(const std::string& s, const char* what) {
    int r, g, b;
    if (std::sscanf(s.c_str(), "rgb(%d,%d,%d)", &r, &g, &b) != 3)
        throw SvgParseError(std::string(what) + " must use rgb(r,g,b): '" + s + "'");
    return {r / 255.0, g / 255.0, b / 255.0, 1.0};
}

struct DCursor {
    const std::string& d;
    size_t pos = 0;

    void skip() {
        while (pos < d.size() &&
               (std::isspace(static_cast<unsigned char>(d[pos])) || d[pos] == ',')) ++pos;
    }
    bool next_command(char& cmd) {
        skip();
        if (pos >= d.size()) return false;
        cmd = d[pos];
        if (std::isalpha(static_cast<unsigned char>(cmd))) {
            ++pos;
            return true;
        }
        throw SvgParseError("expected a path command, got: '" + d.substr(pos, 8) + "'");
    }
    Vec2 pair() {
        Vec2 p;
        p.x = number();
        p.y = number();
        return p;
    }
    double number() {
        skip();
        const char* start = d.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) throw SvgParseError("expected a coordinate in path data");
        pos += static_cast<size_t>(end - start);
        return v;
    }
};

ClosedBezierPath parse_path_data(const std::string& d) {
    DCursor cur{d};
    char cmd;
    if (!cur.next_command(cmd) || cmd != 'M')
        throw SvgParseError("path data must start with an absolute M command");
    const Vec2 start = cur.pair();
    ClosedBezierPath path;
    path.points.push_back(start);

    bool closed = false;
    while (cur.next_command(cmd)) {
        if (cmd == 'C') {
            const Vec2 c1 = cur.pair();
            const Vec2 c2 = cur.pair();
            const Vec2 end = cur.pair();
            path.points.push_back(c1);
            path.points.push_back(c2);
            path.points.push_back(end);
        } else if (cmd == 'Z' || cmd == 'z') {
            closed = true;
            break;
        } else {
            throw SvgParseError(std::string("unsupported path command '") + cmd +
                                "' (only absolute M, C, Z are accepted)");
        }
    }
    if (!closed) throw SvgParseError("path data must end with Z");
    if (path.points.size() < 4) throw SvgParseError("path needs at least one cubic segment");

    // The final C endpoint must return to the M point; it is dropped because
    // closure is structural.
    const Vec2 last = path.points.back();
    if (std::abs(last.x - start.x) > 5e-4 || std::abs(last.y - start.y) > 5e-4)
        throw SvgParseError("path is not closed: last curve endpoint differs from the M point");
    path.points.pop_back();
    if (path.points.size() % 3 != 0)
        throw SvgParseError("path must consist of whole cubic segments");
    return path;
}

}  // namespace

SvgDocument from_svg(std::string_view text) {
    Cursor cur(text);
    if (cur.peek_is("<?xml")) {
        const size_t end = cur.rest().find("?>");
        if (end == std::string_view::npos) throw SvgParseError("unterminated xml declaration");
        cur.advance(end + 2);
    }
    if (!cur.consume("<svg")) throw SvgParseError("expected an <svg> root element");
    bool self_closing = false;
    const auto svg_attrs = cur.attributes(self_closing);
    if (self_closing) throw SvgParseError("empty <svg/> document");

    SvgDocument doc;
    auto it = svg_attrs.find("width");
    if (it == svg_attrs.end()) throw SvgParseError("<svg> needs a width attribute");
    doc.width = static_cast<int>(parse_number(it->second, "width"));
    it = svg_attrs.find("height");
    if (it == svg_attrs.end()) throw SvgParseError("<svg> needs a height attribute");
    doc.height = static_cast<int>(parse_number(it->second, "height"));

    bool seen_path = false;
    while (true) {
        if (cur.consume("</svg>")) break;
        if (cur.eof()) throw SvgParseError("missing </svg>");
        if (cur.consume("<rect")) {
            auto attrs = cur.attributes(self_closing);
            if (!self_closing) throw SvgParseError("<rect> must be self-closing");
            if (seen_path || doc.background)
                throw SvgParseError("only one background <rect> (before all paths) is supported");
            const int rw = attrs.count("width") ? static_cast<int>(parse_number(attrs["width"], "rect width")) : -1;
            const int rh = attrs.count("height") ? static_cast<int>(parse_number(attrs["height"], "rect height")) : -1;
            if (rw != doc.width || rh != doc.height)
                throw SvgParseError("background <rect> must span the full canvas");
            if (!attrs.count("fill")) throw SvgParseError("background <rect> needs a fill");
            doc.background = parse_rgb(attrs["fill"], "rect fill");
            continue;
        }
        if (cur.consume("<path")) {
            auto attrs = cur.attributes(self_closing);
            if (!self_closing) throw SvgParseError("<path> must be self-closing");
            static const char* kRejected[] = {"transform", "stroke", "stroke-width", "style"};
            for (const char* bad : kRejected)
                if (attrs.count(bad))
                    throw SvgParseError(std::string("unsupported attribute '") + bad +
                                        "' on <path> (plain filled paths only)");
            if (attrs.count("fill-rule") && attrs["fill-rule"] != "nonzero")
                throw SvgParseError("only fill-rule=\"nonzero\" is supported");
            if (!attrs.count("d")) throw SvgParseError("<path> needs a d attribute");
            SvgShape shape;
            shape.path = parse_path_data(attrs["d"]);
            if (!attrs.count("fill")) throw SvgParseError("<path> needs a fill");
            shape.fill = parse_rgb(attrs["fill"], "path fill");
            if (attrs.count("fill-opacity"))
                shape.fill.a = parse_number(attrs["fill-opacity"], "fill-opacity");
            doc.shapes.push_back(std::move(shape));
            seen_path = true;
            continue;
        }
        // Name the offending element in the rejection.
        const std::string_view rest = cur.rest();
        size_t len = 1;
        while (len < rest.size() && len < 16 && rest[len] != ' ' && rest[len] != '>' &&
               rest[len] != '\n')
            ++len;
        throw SvgParseError("unsupported SVG content: '" + std::string(rest.substr(0, len)) + "'");
    }
    return doc;
}

SvgDocument interpolate(const SvgDocument& a, const SvgDocument& b, double t) {
    if (a.width != b.width || a.height != b.height)
        throw SvgParseError("interpolate: canvas sizes differ");
    if (a.shapes.size() != b.shapes.size())
        throw SvgParseError("interpolate: documents have different path counts");
    if (a.background.has_value() != b.background.has_value())
        throw SvgParseError("interpolate: one document has a background, the other does not");

    auto lerp = [t](double x, double y) { return (1.0 - t) * x + t * y; };
    SvgDocument out;
    out.width = a.width;
    out.height = a.height;
    if (a.background) {
        out.background = FillColor{lerp(a.background->r, b.background->r),
                                   lerp(a.background->g, b.background->g),
                                   lerp(a.background->b, b.background->b), 1.0};
    }
    out.shapes.resize(a.shapes.size());
    for (size_t i = 0; i < a.shapes.size(); ++i) {
        const SvgShape& sa = a.shapes[i];
        const SvgShape& sb = b.shapes[i];
        if (sa.path.points.size() != sb.path.points.size())
            throw SvgParseError("interpolate: path " + std::to_string(i) +
                                " has different segment counts in the two documents");
        SvgShape& so = out.shapes[i];
        so.path.points.resize(sa.path.points.size());
        for (size_t j = 0; j < sa.path.points.size(); ++j) {
            so.path.points[j] = {lerp(sa.path.points[j].x, sb.path.points[j].x),
                                 lerp(sa.path.points[j].y, sb.path.points[j].y)};
        }
        so.fill = {lerp(sa.fill.r, sb.fill.r), lerp(sa.fill.g, sb.fill.g),
                   lerp(sa.fill.b, sb.fill.b), lerp(sa.fill.a, sb.fill.a)};
    }
    return out;
}

}  // namespace layervec
