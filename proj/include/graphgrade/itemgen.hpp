#pragma once

// Random item parameters and the cartesian viewport they are drawn on.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "graphgrade/random.hpp"
#include "graphgrade/rational.hpp"

namespace graphgrade {

enum class VersionKind { integer, decimal };

inline std::string_view to_string(VersionKind v) { return v == VersionKind::integer ? "integer" : "decimal"; }

inline std::optional<VersionKind> parse_version(std::string_view s)
{
    if (s == "integer") return VersionKind::integer;
    if (s == "decimal") return VersionKind::decimal;
    return std::nullopt;
}

/// y = m x + b
struct Coefficients {
    Rational m;
    Rational b;

    friend bool operator==(const Coefficients&, const Coefficients&) = default;

    [[nodiscard]] Rational at(const Rational& x) const { return m * x + b; }
};

struct ItemSpec {
    VersionKind version = VersionKind::integer;
    Coefficients coeffs;
    int x0 = 1;  ///< probed preimage
    std::uint64_t seed = 0;

    friend bool operator==(const ItemSpec&, const ItemSpec&) = default;
};

/// The visible plane. x spans [-10, 10] with unit grid; y is symmetric about 0.
struct Viewport {
    Rational xMin{-10};
    Rational xMax{10};
    Rational yMin;
    Rational yMax;
    Rational gridX{1};
    Rational gridY;
    int canvasPx = 400;
    Rational cellPxY;  ///< pixel height of one y-cell

    friend bool operator==(const Viewport&, const Viewport&) = default;

    [[nodiscard]] bool contains_y(const Rational& y) const { return yMin <= y && y <= yMax; }
};

inline constexpr std::array<int, 4> kGridSpacings{2, 5, 10, 20};
inline constexpr int kMaxVisibleCells = 16;
inline constexpr int kCanvasPx = 400;
inline constexpr int kPreimageBound = 8;

/// m = random(1,5)*random{-1,1} [+ random(1,9)/10], b likewise with random(1,10).
/// Draw order: |m|, sign(m), [frac(m)], |b|, sign(b), [frac(b)].
template <DrawSource Draws>
Coefficients sample_coefficients(VersionKind version, Draws& rng)
{
    auto draw = [&](int magnitude_hi) {
        const int magnitude = rng.uniform_int(1, magnitude_hi);
        const int sign = rng.sign();
        Rational v(magnitude * sign);
        // Fraction is added after the sign, so -3 + 0.6 = -2.4.
        if (version == VersionKind::decimal) v += Rational(rng.uniform_int(1, 9), 10);
        return v;
    };
    Coefficients c;
    c.m = draw(5);
    c.b = draw(10);
    return c;
}

/// Uniform over {-8..-1, 1..8}: inclusive draw on [-8, 8] with 0 rejected.
template <DrawSource Draws>
int sample_preimage(Draws& rng)
{
    int v = 0;
    while (v == 0) v = rng.uniform_int(-kPreimageBound, kPreimageBound);
    return v;
}

/// Largest |f(x)| over x in [-10, 10].
inline Rational max_abs_height(const Coefficients& c)
{
    return max(c.at(-10).abs(), c.at(10).abs());
}

/// Smallest spacing in {2,5,10,20} that shows the whole segment in at most 16 cells.
inline Viewport build_viewport(const Coefficients& c)
{
    const Rational h = max_abs_height(c);
    if (h == Rational(0)) throw std::invalid_argument("build_viewport: degenerate line");
    for (int s : kGridSpacings) {
        const auto cells = (h / Rational(s)).ceil();
        if (2 * cells <= kMaxVisibleCells) {
            Viewport vp;
            vp.gridY = s;
            vp.yMax = Rational(s) * Rational(cells);
            vp.yMin = -vp.yMax;
            vp.cellPxY = Rational(vp.canvasPx) * vp.gridY / (vp.yMax - vp.yMin);
            return vp;
        }
    }
    throw std::invalid_argument("build_viewport: line too steep for the 20-unit grid");
}

struct GeneratedItem {
    ItemSpec item;
    Viewport viewport;

    friend bool operator==(const GeneratedItem&, const GeneratedItem&) = default;
};

/// Pure function of (version, seed).
inline GeneratedItem generate_item(VersionKind version, std::uint64_t seed)
{
    SeededStream rng(seed);
    GeneratedItem g;
    g.item.version = version;
    g.item.seed = seed;
    g.item.coeffs = sample_coefficients(version, rng);
    g.item.x0 = sample_preimage(rng);
    g.viewport = build_viewport(g.item.coeffs);
    return g;
}

}  // namespace graphgrade
