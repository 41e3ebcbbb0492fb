#pragma once

// Step-by-step solution feedback: draw the vertical guide at x0, the
// horizontal guide at the image, then say where in the cell the image falls.

#include <stdexcept>
#include <string>
#include <string_view>

#include "graphgrade/grading.hpp"
#include "graphgrade/itemgen.hpp"

namespace graphgrade {

enum class HalfCell { lower, upper };
enum class QuarterOrdinal { none, first, second, third, fourth };

inline std::string_view to_string(HalfCell h) { return h == HalfCell::lower ? "lower" : "upper"; }

inline std::string_view to_string(QuarterOrdinal q)
{
    switch (q) {
    case QuarterOrdinal::first: return "first";
    case QuarterOrdinal::second: return "second";
    case QuarterOrdinal::third: return "third";
    case QuarterOrdinal::fourth: return "fourth";
    case QuarterOrdinal::none: break;
    }
    return "none";
}

struct FeedbackPlan {
    int x0 = 0;
    Rational trueImage;
    Rational cellLow;
    Rational spacing;
    int k = 4;
    int r = 0;
    HalfCell halfCell = HalfCell::lower;
    QuarterOrdinal quarterOrdinal = QuarterOrdinal::none;
    AcceptanceInterval interval;

    friend bool operator==(const FeedbackPlan&, const FeedbackPlan&) = default;

    [[nodiscard]] Rational cellHigh() const { return cellLow + spacing; }
    [[nodiscard]] Rational cellMid() const { return cellLow + spacing / Rational(2); }
};

/// Half-cell and quarter position of a normalized cell offset t in [0, 1).
inline HalfCell half_cell_of(const Rational& t) { return t < Rational(1, 2) ? HalfCell::lower : HalfCell::upper; }

inline QuarterOrdinal quarter_of(const Rational& t)
{
    Rational within = Rational(2) * t;
    within -= Rational(within.floor());
    switch ((Rational(4) * within).floor()) {
    case 0: return QuarterOrdinal::first;
    case 1: return QuarterOrdinal::second;
    case 2: return QuarterOrdinal::third;
    default: return QuarterOrdinal::fourth;
    }
}

inline FeedbackPlan build_feedback_plan(const ItemSpec& item, const Viewport& vp, const AcceptanceInterval& interval)
{
    const Rational yStar = true_image(item);
    if (yStar != interval.trueImage) throw std::invalid_argument("build_feedback_plan: interval belongs to another item");
    const CellLocator loc = locate_cell(yStar, vp, interval.k);
    FeedbackPlan plan;
    plan.x0 = item.x0;
    plan.trueImage = yStar;
    plan.cellLow = loc.cellLow;
    plan.spacing = loc.spacing;
    plan.k = interval.k;
    plan.r = loc.r;
    plan.halfCell = half_cell_of(loc.t);
    plan.quarterOrdinal = interval.k == 8 ? quarter_of(loc.t) : QuarterOrdinal::none;
    plan.interval = interval;
    return plan;
}

/// "]lo, hi[" with point decimals and trimmed zeros.
inline std::string format_open_interval(const AcceptanceInterval& iv)
{
    return "]" + to_decimal_string(iv.lo) + ", " + to_decimal_string(iv.hi) + "[";
}

namespace detail {

inline std::string coarse_position(const FeedbackPlan& p)
{
    const std::string lo = to_decimal_string(p.cellLow);
    const std::string hi = to_decimal_string(p.cellHigh());
    const std::string center = "the horizontal line that passes through the center of the stretch between " + lo + " and " + hi;
    switch (p.r) {
    case 0: return "very close to the horizontal line y=" + lo;
    case 1: return "between the horizontal line y=" + lo + " and " + center;
    case 2: return "close to " + center;
    case 3: return "between " + center + " and the horizontal line y=" + hi;
    default: return "very close to the horizontal line y=" + hi;
    }
}

/// Nearest of {lower line, center, upper line} to the accepted slot; ties go to the center.
inline std::string fine_reference(const FeedbackPlan& p)
{
    if (p.r * 4 < p.k) return "the line y=" + to_decimal_string(p.cellLow);
    if (p.r * 4 > 3 * p.k) return "the line y=" + to_decimal_string(p.cellHigh());
    return "the center";
}

}  // namespace detail

inline std::string render_feedback_text(const FeedbackPlan& p)
{
    std::string text = "Draw a vertical line from x=" + std::to_string(p.x0) +
                       " on the x-axis up to the graph, and from there a horizontal line to the y-axis. ";
    if (p.k == 4) {
        text += "We can observe that the value is " + detail::coarse_position(p) + ". ";
        text += "Then we can assure that the image asked is a value within the range " + format_open_interval(p.interval) + ".";
        return text;
    }
    const bool lower = p.halfCell == HalfCell::lower;
    const Rational halfLo = lower ? p.cellLow : p.cellMid();
    const Rational halfHi = lower ? p.cellMid() : p.cellHigh();
    if (lower)
        text += "We can see that its value is between the line y=" + to_decimal_string(p.cellLow) + " and the center. ";
    else
        text += "We can see that its value is between the center and the line y=" + to_decimal_string(p.cellHigh()) + ". ";
    text += "As it is close to " + detail::fine_reference(p) + ", we can assure that it is within the " +
            std::string(to_string(p.quarterOrdinal)) + " quarter of the stretch between " + to_decimal_string(halfLo) + " and " +
            to_decimal_string(halfHi) + ". ";
    text += "So, we can assure that the image asked is some value within the interval " + format_open_interval(p.interval) + ".";
    return text;
}

}  // namespace graphgrade
