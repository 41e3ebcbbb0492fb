#pragma once

// Deterministic SVG rendering of an item and its feedback overlay.
//
// The inner plotting square is 400 px (the grading geometry depends on it);
// labels live in a margin around it. Element order is fixed as grid, axes,
// curve, overlay, labels so golden files stay byte-stable.

#include <cstdio>
#include <optional>
#include <string>
#include <utility>

#include "graphgrade/feedback.hpp"
#include "graphgrade/itemgen.hpp"
#include "graphgrade/rational.hpp"

namespace graphgrade {

struct PlotStyle {
    int innerSizePx = kCanvasPx;
    int marginPx = 40;
    std::string gridStroke = "#c8c8c8";
    std::string gridWidth = "1";
    std::string axisStroke = "#000000";
    std::string axisWidth = "2";
    std::string curveStroke = "#1f5fbf";
    std::string curveWidth = "2.5";
    std::string guideStroke = "#d04020";
    std::string guideWidth = "1.5";
    std::string guideDash = "6 4";
    std::string bandFill = "#30a050";
    std::string bandOpacity = "0.25";
    std::string fontFamily = "sans-serif";
    std::string fontSize = "11";
    int labelEveryX = 2;
    int labelEveryY = 1;

    [[nodiscard]] int outerSizePx() const { return innerSizePx + 2 * marginPx; }
};

struct MathPoint {
    Rational x;
    Rational y;
};

/// Pixel coordinates; y grows downward.
struct PixelPoint {
    Rational px;
    Rational py;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

inline PixelPoint to_pixels(const MathPoint& p, const Viewport& vp, const PlotStyle& style = {})
{
    const Rational inner(style.innerSizePx);
    const Rational margin(style.marginPx);
    return {margin + (p.x - vp.xMin) / (vp.xMax - vp.xMin) * inner, margin + (vp.yMax - p.y) / (vp.yMax - vp.yMin) * inner};
}

inline MathPoint from_pixels(const PixelPoint& p, const Viewport& vp, const PlotStyle& style = {})
{
    const Rational inner(style.innerSizePx);
    const Rational margin(style.marginPx);
    return {vp.xMin + (p.px - margin) / inner * (vp.xMax - vp.xMin), vp.yMax - (p.py - margin) / inner * (vp.yMax - vp.yMin)};
}

/// Parametric (Liang-Barsky) clip of segment a-b to the viewport rectangle.
inline std::optional<std::pair<MathPoint, MathPoint>> clip_segment(const MathPoint& a, const MathPoint& b, const Viewport& vp)
{
    Rational t0(0), t1(1);
    const Rational dx = b.x - a.x;
    const Rational dy = b.y - a.y;
    const std::pair<Rational, Rational> edges[] = {
        {-dx, a.x - vp.xMin}, {dx, vp.xMax - a.x}, {-dy, a.y - vp.yMin}, {dy, vp.yMax - a.y}};
    for (const auto& [p, q] : edges) {
        if (p == Rational(0)) {
            if (q < Rational(0)) return std::nullopt;
            continue;
        }
        const Rational t = q / p;
        if (p < Rational(0)) {
            if (t > t1) return std::nullopt;
            if (t > t0) t0 = t;
        } else {
            if (t < t0) return std::nullopt;
            if (t < t1) t1 = t;
        }
    }
    return std::pair{MathPoint{a.x + t0 * dx, a.y + t0 * dy}, MathPoint{a.x + t1 * dx, a.y + t1 * dy}};
}

/// Nine fractional digits, trailing zeros trimmed.
inline std::string svg_number(const Rational& v)
{
    if (v.is_integer()) return std::to_string(v.num());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v.to_double());
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

namespace detail {

inline std::string svg_line(const PixelPoint& a, const PixelPoint& b, const std::string& cls)
{
    return "<line class=\"" + cls + "\" x1=\"" + svg_number(a.px) + "\" y1=\"" + svg_number(a.py) + "\" x2=\"" + svg_number(b.px) +
           "\" y2=\"" + svg_number(b.py) + "\"/>\n";
}

inline std::string svg_text(const PixelPoint& at, const std::string& anchor, const std::string& body)
{
    return "<text x=\"" + svg_number(at.px) + "\" y=\"" + svg_number(at.py) + "\" text-anchor=\"" + anchor + "\">" + body + "</text>\n";
}

inline std::string svg_open(const PlotStyle& st)
{
    const std::string size = std::to_string(st.outerSizePx());
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           size + "\" height=\"" + size + "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
}

inline std::string grid_group(const Viewport& vp, const PlotStyle& st)
{
    std::string out = "<g id=\"grid\" stroke=\"" + st.gridStroke + "\" stroke-width=\"" + st.gridWidth + "\">\n";
    for (auto i = (vp.xMin / vp.gridX).ceil(); Rational(i) * vp.gridX <= vp.xMax; ++i) {
        const Rational x = Rational(i) * vp.gridX;
        out += svg_line(to_pixels({x, vp.yMin}, vp, st), to_pixels({x, vp.yMax}, vp, st), "grid-v");
    }
    for (auto j = (vp.yMin / vp.gridY).ceil(); Rational(j) * vp.gridY <= vp.yMax; ++j) {
        const Rational y = Rational(j) * vp.gridY;
        out += svg_line(to_pixels({vp.xMin, y}, vp, st), to_pixels({vp.xMax, y}, vp, st), "grid-h");
    }
    return out + "</g>\n";
}

inline std::string axes_group(const Viewport& vp, const PlotStyle& st)
{
    std::string out = "<g id=\"axes\" stroke=\"" + st.axisStroke + "\" stroke-width=\"" + st.axisWidth + "\">\n";
    out += svg_line(to_pixels({vp.xMin, 0}, vp, st), to_pixels({vp.xMax, 0}, vp, st), "axis-x");
    out += svg_line(to_pixels({0, vp.yMin}, vp, st), to_pixels({0, vp.yMax}, vp, st), "axis-y");
    return out + "</g>\n";
}

inline std::string curve_group(const ItemSpec& item, const Viewport& vp, const PlotStyle& st)
{
    std::string out = "<g id=\"curve\" stroke=\"" + st.curveStroke + "\" stroke-width=\"" + st.curveWidth + "\" fill=\"none\">\n";
    const MathPoint a{vp.xMin, item.coeffs.at(vp.xMin)};
    const MathPoint b{vp.xMax, item.coeffs.at(vp.xMax)};
    if (auto seg = clip_segment(a, b, vp))
        out += svg_line(to_pixels(seg->first, vp, st), to_pixels(seg->second, vp, st), "curve");
    return out + "</g>\n";
}

inline std::string labels_group(const Viewport& vp, const PlotStyle& st)
{
    std::string out = "<g id=\"labels\" font-family=\"" + st.fontFamily + "\" font-size=\"" + st.fontSize + "\" fill=\"#000000\">\n";
    const Rational below(14), left(6), baseline(4);
    for (auto i = (vp.xMin / vp.gridX).ceil(); Rational(i) * vp.gridX <= vp.xMax; ++i) {
        if (i == 0 || i % st.labelEveryX != 0) continue;
        const Rational x = Rational(i) * vp.gridX;
        const PixelPoint at = to_pixels({x, vp.yMin}, vp, st);
        out += svg_text({at.px, at.py + below}, "middle", to_decimal_string(x));
    }
    for (auto j = (vp.yMin / vp.gridY).ceil(); Rational(j) * vp.gridY <= vp.yMax; ++j) {
        if (j % st.labelEveryY != 0) continue;
        const Rational y = Rational(j) * vp.gridY;
        const PixelPoint at = to_pixels({vp.xMin, y}, vp, st);
        out += svg_text({at.px - left, at.py + baseline}, "end", to_decimal_string(y));
    }
    return out + "</g>\n";
}

}  // namespace detail

inline std::string render_item(const ItemSpec& item, const Viewport& vp, const PlotStyle& style = {})
{
    return detail::svg_open(style) + detail::grid_group(vp, style) + detail::axes_group(vp, style) + detail::curve_group(item, vp, style) +
           detail::labels_group(vp, style) + "</svg>\n";
}

/// Pixel rectangle of the acceptance band, clipped to the inner square.
inline std::pair<PixelPoint, PixelPoint> acceptance_band_pixels(const AcceptanceInterval& iv, const Viewport& vp, const PlotStyle& style = {})
{
    const Rational top = min(iv.hi, vp.yMax);
    const Rational bottom = max(iv.lo, vp.yMin);
    return {to_pixels({vp.xMin, top}, vp, style), to_pixels({vp.xMax, bottom}, vp, style)};
}

inline std::string render_feedback_overlay(const ItemSpec& item, const Viewport& vp, const FeedbackPlan& plan, const PlotStyle& style = {})
{
    using detail::svg_line;
    std::string overlay = "<g id=\"overlay\">\n";
    const auto [topLeft, bottomRight] = acceptance_band_pixels(plan.interval, vp, style);
    overlay += "<rect class=\"band\" x=\"" + svg_number(topLeft.px) + "\" y=\"" + svg_number(topLeft.py) + "\" width=\"" +
               svg_number(bottomRight.px - topLeft.px) + "\" height=\"" + svg_number(bottomRight.py - topLeft.py) + "\" fill=\"" +
               style.bandFill + "\" fill-opacity=\"" + style.bandOpacity + "\" stroke=\"none\"/>\n";
    overlay += "<g stroke=\"" + style.guideStroke + "\" stroke-width=\"" + style.guideWidth + "\" stroke-dasharray=\"" + style.guideDash + "\">\n";
    const Rational x0(plan.x0);
    overlay += svg_line(to_pixels({x0, 0}, vp, style), to_pixels({x0, plan.trueImage}, vp, style), "guide-v");
    overlay += svg_line(to_pixels({x0, plan.trueImage}, vp, style), to_pixels({0, plan.trueImage}, vp, style), "guide-h");
    overlay += "</g>\n</g>\n";
    return detail::svg_open(style) + detail::grid_group(vp, style) + detail::axes_group(vp, style) + detail::curve_group(item, vp, style) +
           overlay + detail::labels_group(vp, style) + "</svg>\n";
}

}  // namespace graphgrade
