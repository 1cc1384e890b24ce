#pragma once

// 18-digit signed fixed-point decimal with directed rounding.
//
// Add/subtract are exact. Every other operation takes a RoundDir and returns
// the exact result rounded to the 1e-18 grid in that direction.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "eco/error.hpp"

namespace eco {

// Down = toward -inf, Up = toward +inf, Nearest = half away from zero.
enum class RoundDir { Down, Up, Nearest };

namespace detail {

namespace bmp = boost::multiprecision;

using Int256 = bmp::int256_t;
using Int512 = bmp::int512_t;
using BigInt = bmp::cpp_int;
// Wide working type for transcendental kernels and closed forms.
using Real = bmp::cpp_bin_float_50;

inline const Int256& dec_scale() {
    static const Int256 scale = bmp::pow(Int256(10), 18);
    return scale;
}

// |raw| must stay below 2^255 so products fit comfortably in Int512.
inline const Int512& dec_raw_limit() {
    static const Int512 limit = (Int512(1) << 255) - 1;
    return limit;
}

template <class I>
I div_round(const I& num, const I& den, RoundDir dir) {
    if (den == 0) {
        throw Error(Errc::Domain, "division by zero");
    }
    I q = num / den;
    I r = num % den;
    if (r == 0) {
        return q;
    }
    const bool negative = (num < 0) != (den < 0);
    switch (dir) {
    case RoundDir::Down:
        if (negative) --q;
        break;
    case RoundDir::Up:
        if (!negative) ++q;
        break;
    case RoundDir::Nearest: {
        I twice = bmp::abs(r) * 2;
        if (twice >= bmp::abs(den)) q += negative ? -1 : 1;
        break;
    }
    }
    return q;
}

inline Int256 narrow(const Int512& wide) {
    if (bmp::abs(wide) > dec_raw_limit()) {
        throw Error(Errc::Overflow, "fixed-point result out of range");
    }
    return static_cast<Int256>(wide);
}

inline Int256 narrow(const BigInt& wide) {
    if (bmp::abs(wide) > BigInt(dec_raw_limit())) {
        throw Error(Errc::Overflow, "fixed-point result out of range");
    }
    return static_cast<Int256>(wide);
}

} // namespace detail

class Dec {
public:
    using Raw = detail::Int256;
    static constexpr int kFractionDigits = 18;

    Dec() = default;
    explicit Dec(std::int64_t units) : raw_(Raw(units) * detail::dec_scale()) {}

    static Dec from_raw(const Raw& raw) {
        Dec d;
        d.raw_ = detail::narrow(detail::Int512(raw));
        return d;
    }

    static Dec ulp() { return from_raw(Raw(1)); }

    // Exact parse of [-]digits[.digits]; more than 18 fractional digits is an error.
    static Dec parse(std::string_view text) {
        std::string_view t = text;
        while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
        while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r')) t.remove_suffix(1);
        bool negative = false;
        if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
            negative = t.front() == '-';
            t.remove_prefix(1);
        }
        if (t.empty()) {
            throw Error(Errc::Parse, "empty decimal '" + std::string(text) + "'");
        }
        detail::Int512 whole = 0;
        detail::Int512 frac = 0;
        int frac_digits = 0;
        bool seen_point = false;
        bool any_digit = false;
        for (char ch : t) {
            if (ch == '.') {
                if (seen_point) throw Error(Errc::Parse, "bad decimal '" + std::string(text) + "'");
                seen_point = true;
                continue;
            }
            if (ch < '0' || ch > '9') {
                throw Error(Errc::Parse, "bad decimal '" + std::string(text) + "'");
            }
            any_digit = true;
            if (seen_point) {
                if (++frac_digits > kFractionDigits) {
                    throw Error(Errc::Parse, "more than 18 fractional digits in '" + std::string(text) + "'");
                }
                frac = frac * 10 + (ch - '0');
            } else {
                whole = whole * 10 + (ch - '0');
                if (whole > detail::dec_raw_limit()) {
                    throw Error(Errc::Overflow, "decimal out of range '" + std::string(text) + "'");
                }
            }
        }
        if (!any_digit) {
            throw Error(Errc::Parse, "bad decimal '" + std::string(text) + "'");
        }
        for (int i = frac_digits; i < kFractionDigits; ++i) frac *= 10;
        detail::Int512 raw = whole * detail::Int512(detail::dec_scale()) + frac;
        if (negative) raw = -raw;
        Dec d;
        d.raw_ = detail::narrow(raw);
        return d;
    }

    // Rounds a wide real onto the grid. `rel_err` is a bound on the relative
    // error already present in `v`; directed modes widen by it so the result
    // stays on the correct side of the exact value.
    static Dec from_real(const detail::Real& v, RoundDir dir, const detail::Real& rel_err = 0) {
        using detail::Real;
        const Real scaled = v * Real(detail::dec_scale());
        const Real slack = boost::multiprecision::abs(scaled) * rel_err;
        Real target;
        switch (dir) {
        case RoundDir::Down: target = boost::multiprecision::floor(scaled - slack); break;
        case RoundDir::Up: target = boost::multiprecision::ceil(scaled + slack); break;
        case RoundDir::Nearest: target = boost::multiprecision::round(scaled); break;
        }
        if (boost::multiprecision::abs(target) > Real(detail::dec_raw_limit())) {
            throw Error(Errc::Overflow, "real value out of fixed-point range");
        }
        Dec d;
        d.raw_ = target.convert_to<Raw>();
        return d;
    }

    static Dec from_double(double v, RoundDir dir = RoundDir::Nearest) {
        return from_real(detail::Real(v), dir);
    }

    const Raw& raw() const noexcept { return raw_; }

    detail::Real to_real() const { return detail::Real(raw_) / detail::Real(detail::dec_scale()); }
    double to_double() const { return to_real().convert_to<double>(); }

    bool is_zero() const { return raw_ == 0; }
    bool is_negative() const { return raw_ < 0; }
    bool is_positive() const { return raw_ > 0; }

    // Full precision, always 18 fractional digits, never scientific notation.
    std::string str() const {
        Raw mag = raw_ < 0 ? Raw(-raw_) : raw_;
        Raw whole = mag / detail::dec_scale();
        Raw frac = mag % detail::dec_scale();
        std::string frac_text = frac.str();
        frac_text.insert(0, kFractionDigits - frac_text.size(), '0');
        return std::string(raw_ < 0 ? "-" : "") + whole.str() + "." + frac_text;
    }

    // Shortest exact rendering (trailing zeros dropped).
    std::string str_short() const {
        std::string s = str();
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
        return s;
    }

    Dec operator-() const {
        Dec d;
        d.raw_ = -raw_;
        return d;
    }

    Dec& operator+=(const Dec& rhs) {
        raw_ = detail::narrow(detail::Int512(raw_) + detail::Int512(rhs.raw_));
        return *this;
    }
    Dec& operator-=(const Dec& rhs) {
        raw_ = detail::narrow(detail::Int512(raw_) - detail::Int512(rhs.raw_));
        return *this;
    }

    friend Dec operator+(Dec lhs, const Dec& rhs) { return lhs += rhs; }
    friend Dec operator-(Dec lhs, const Dec& rhs) { return lhs -= rhs; }

    friend bool operator==(const Dec& lhs, const Dec& rhs) { return lhs.raw_.compare(rhs.raw_) == 0; }
    friend std::strong_ordering operator<=>(const Dec& lhs, const Dec& rhs) {
        const int c = lhs.raw_.compare(rhs.raw_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Dec& d) { return os << d.str(); }

private:
    Raw raw_{0};
};

inline Dec mul(const Dec& a, const Dec& b, RoundDir dir) {
    using detail::Int512;
    const Int512 product = Int512(a.raw()) * Int512(b.raw());
    return Dec::from_raw(detail::narrow(detail::div_round(product, Int512(detail::dec_scale()), dir)));
}

inline Dec div(const Dec& a, const Dec& b, RoundDir dir) {
    using detail::Int512;
    if (b.is_zero()) {
        throw Error(Errc::Domain, "division by zero");
    }
    const Int512 num = Int512(a.raw()) * Int512(detail::dec_scale());
    return Dec::from_raw(detail::narrow(detail::div_round(num, Int512(b.raw()), dir)));
}

// Exact integer scaling.
inline Dec mul_int(const Dec& a, std::int64_t n) {
    return Dec::from_raw(detail::narrow(detail::Int512(a.raw()) * n));
}

inline Dec div_int(const Dec& a, std::int64_t n, RoundDir dir) {
    return Dec::from_raw(detail::narrow(detail::div_round(detail::Int512(a.raw()), detail::Int512(n), dir)));
}

inline Dec sqrt(const Dec& a, RoundDir dir) {
    using detail::Int512;
    if (a.is_negative()) {
        throw Error(Errc::Domain, "sqrt of negative value");
    }
    const Int512 n = Int512(a.raw()) * Int512(detail::dec_scale());
    Int512 r = boost::multiprecision::sqrt(n);
    const Int512 sq = r * r;
    if (sq != n) {
        if (dir == RoundDir::Up) {
            ++r;
        } else if (dir == RoundDir::Nearest) {
            // r^2 < n < (r+1)^2; compare n against (r + 1/2)^2 = r^2 + r + 1/4
            if (4 * (n - sq) > 4 * r + 1) ++r;
        }
    }
    return Dec::from_raw(detail::narrow(r));
}

inline Dec abs(const Dec& a) { return a.is_negative() ? -a : a; }
inline Dec min(const Dec& a, const Dec& b) { return b < a ? b : a; }
inline Dec max(const Dec& a, const Dec& b) { return a < b ? b : a; }

namespace literals {
inline Dec operator""_d(const char* text) { return Dec::parse(text); }
} // namespace literals

} // namespace eco
