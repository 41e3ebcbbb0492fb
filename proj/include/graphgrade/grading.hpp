#pragma once

// Acceptance intervals for read-off-the-graph answers.
//
// The true image y* is located inside its grid cell [L, L+s). The cell is cut
// into k slots (k = 4 on short cells, 8 on tall ones), y* is snapped to the
// nearest slot boundary c = L + r*s/k, and every answer in ]c - s/k, c + s/k[
// is accepted. Since |y* - c| <= s/(2k), y* always sits strictly inside.

#include <stdexcept>
#include <string_view>

#include "graphgrade/itemgen.hpp"
#include "graphgrade/rational.hpp"

namespace graphgrade {

enum class Verdict { correct, incorrect };

inline std::string_view to_string(Verdict v) { return v == Verdict::correct ? "correct" : "incorrect"; }

/// Cell height (pixels) from which eighths are used instead of quarters.
inline constexpr int kFineResolutionMinPx = 40;

struct CellLocator {
    Rational cellLow;  ///< gridline at or below y*
    Rational spacing;
    Rational t;        ///< (y* - cellLow) / spacing, in [0, 1)
    int r = 0;         ///< round(k t), ties up

    friend bool operator==(const CellLocator&, const CellLocator&) = default;
};

/// Open interval ]lo, hi[ plus the exact image it was built around.
struct AcceptanceInterval {
    Rational lo;
    Rational hi;
    int k = 4;
    Rational trueImage;

    friend bool operator==(const AcceptanceInterval&, const AcceptanceInterval&) = default;

    [[nodiscard]] Rational width() const { return hi - lo; }
    [[nodiscard]] bool contains(const Rational& v) const { return lo < v && v < hi; }
};

inline Rational true_image(const ItemSpec& item) { return item.coeffs.at(item.x0); }

inline int resolution_divisor(const Viewport& vp)
{
    return vp.cellPxY >= Rational(kFineResolutionMinPx) ? 8 : 4;
}

inline CellLocator locate_cell(const Rational& yStar, const Rational& spacing, int k)
{
    if (spacing <= Rational(0)) throw std::invalid_argument("locate_cell: spacing must be positive");
    if (k <= 0) throw std::invalid_argument("locate_cell: k must be positive");
    CellLocator loc;
    loc.spacing = spacing;
    loc.cellLow = spacing * Rational((yStar / spacing).floor());
    loc.t = (yStar - loc.cellLow) / spacing;
    loc.r = static_cast<int>((Rational(k) * loc.t).round_half_up());
    return loc;
}

/// Rejects images outside the viewport; the generator never produces them.
inline CellLocator locate_cell(const Rational& yStar, const Viewport& vp, int k)
{
    if (!vp.contains_y(yStar)) throw std::out_of_range("locate_cell: image " + to_decimal_string(yStar) + " outside viewport");
    return locate_cell(yStar, vp.gridY, k);
}

inline AcceptanceInterval acceptance_interval(const CellLocator& loc, int k)
{
    if (loc.r < 0 || loc.r > k) throw std::invalid_argument("acceptance_interval: locator built for another k");
    const Rational step = loc.spacing / Rational(k);
    const Rational center = loc.cellLow + Rational(loc.r) * step;
    AcceptanceInterval iv;
    iv.lo = center - step;
    iv.hi = center + step;
    iv.k = k;
    iv.trueImage = loc.cellLow + loc.t * loc.spacing;
    return iv;
}

/// Strict membership; the exact image is accepted regardless.
inline Verdict grade(const Rational& answer, const AcceptanceInterval& iv)
{
    return (iv.contains(answer) || answer == iv.trueImage) ? Verdict::correct : Verdict::incorrect;
}

/// Everything grading derives from an item, computed once.
struct GradingKey {
    Rational trueImage;
    int k = 4;
    CellLocator locator;
    AcceptanceInterval interval;
};

inline GradingKey grading_key(const ItemSpec& item, const Viewport& vp)
{
    GradingKey key;
    key.trueImage = true_image(item);
    key.k = resolution_divisor(vp);
    key.locator = locate_cell(key.trueImage, vp, key.k);
    key.interval = acceptance_interval(key.locator, key.k);
    return key;
}

}  // namespace graphgrade
