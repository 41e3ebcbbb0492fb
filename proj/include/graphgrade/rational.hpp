#pragma once

// Exact rational numbers over 64-bit integers.
//
// Every value is kept in lowest terms with a positive denominator, so equality
// is structural. Intermediate products are computed in 128 bits; a result that
// does not fit back into 64 bits raises RationalOverflow instead of wrapping.

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace graphgrade {

class RationalOverflow : public std::overflow_error {
public:
    RationalOverflow() : std::overflow_error("rational arithmetic overflow") {}
};

class Rational {
public:
    using int_type = std::int64_t;

    constexpr Rational() = default;
    constexpr Rational(int_type n) : num_(n), den_(1) {}  // NOLINT: implicit from integers
    Rational(int_type n, int_type d) { assign(n, d); }

    [[nodiscard]] constexpr int_type num() const { return num_; }
    [[nodiscard]] constexpr int_type den() const { return den_; }
    [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        using wide = __int128;
        return make(wide(a.num_) * b.den_ + wide(b.num_) * a.den_, wide(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b)
    {
        using wide = __int128;
        return make(wide(a.num_) * b.den_ - wide(b.num_) * a.den_, wide(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        using wide = __int128;
        return make(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        using wide = __int128;
        return make(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
    }
    Rational operator-() const
    {
        if (num_ == std::numeric_limits<int_type>::min()) throw RationalOverflow();
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend constexpr bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        using wide = __int128;
        wide lhs = wide(a.num_) * b.den_;
        wide rhs = wide(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Largest integer <= value.
    [[nodiscard]] int_type floor() const
    {
        int_type q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    /// Smallest integer >= value.
    [[nodiscard]] int_type ceil() const
    {
        int_type q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return q;
    }
    /// Nearest integer, halves rounded toward +infinity.
    [[nodiscard]] int_type round_half_up() const { return (*this + Rational(1, 2)).floor(); }

    [[nodiscard]] Rational abs() const { return num_ < 0 ? -*this : *this; }

    /// Nearest multiple of 1/denominator (halves away from zero).
    static Rational from_double_quantized(double v, int_type denominator)
    {
        const double scaled = v * static_cast<double>(denominator);
        if (!(std::abs(scaled) < 9.0e18)) throw RationalOverflow();
        const double rounded = scaled < 0 ? -std::floor(-scaled + 0.5) : std::floor(scaled + 0.5);
        return Rational(static_cast<int_type>(rounded), denominator);
    }

private:
    static Rational make(__int128 n, __int128 d)
    {
        if (d == 0) throw std::domain_error("rational division by zero");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lo = std::numeric_limits<int_type>::min() + 1;
        constexpr __int128 hi = std::numeric_limits<int_type>::max();
        if (n < lo || n > hi || d > hi) throw RationalOverflow();
        Rational r;
        r.num_ = static_cast<int_type>(n);
        r.den_ = static_cast<int_type>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b)
    {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void assign(int_type n, int_type d) { *this = make(n, d); }

    int_type num_ = 0;
    int_type den_ = 1;
};

/// Plain "p" or "p/q" form.
inline std::string to_fraction_string(const Rational& r)
{
    if (r.is_integer()) return std::to_string(r.num());
    return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

/// True when the value has a terminating decimal expansion.
inline bool has_finite_decimal(const Rational& r)
{
    auto d = r.den();
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

/// Point-decimal rendering with trailing zeros trimmed ("26.25", "-30", "0.5").
/// Values without a terminating expansion fall back to "p/q".
inline std::string to_decimal_string(const Rational& r)
{
    if (!has_finite_decimal(r)) return to_fraction_string(r);
    const bool negative = r.num() < 0;
    // |num| fits since make() excludes INT64_MIN.
    const std::uint64_t num = static_cast<std::uint64_t>(negative ? -r.num() : r.num());
    const auto den = static_cast<std::uint64_t>(r.den());
    std::string out = negative ? "-" : "";
    out += std::to_string(num / den);
    std::uint64_t rem = num % den;
    if (rem != 0) {
        out += '.';
        while (rem != 0) {
            unsigned __int128 scaled = static_cast<unsigned __int128>(rem) * 10;
            out += static_cast<char>('0' + static_cast<int>(scaled / den));
            rem = static_cast<std::uint64_t>(scaled % den);
        }
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << to_decimal_string(r); }

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace graphgrade

template <>
struct std::hash<graphgrade::Rational> {
    std::size_t operator()(const graphgrade::Rational& r) const noexcept
    {
        return std::hash<std::int64_t>{}(r.num()) * 31u ^ std::hash<std::int64_t>{}(r.den());
    }
};
