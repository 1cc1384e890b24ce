#pragma once

// Natural-log kernel, adaptive Simpson quadrature and bracketed bisection.
//
// integrate and bracket_solve are oracles for tests and analysis. Quoting
// paths never call integrate.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>

#include "eco/dec.hpp"
#include "eco/error.hpp"

namespace eco {

namespace detail {

template <class R>
R abs_of(const R& v) {
    using std::abs;
    using boost::multiprecision::abs;
    return abs(v);
}

// 2*atanh(z) = ln((1+z)/(1-z)), summed until the next term is negligible.
template <class R>
R two_atanh_series(const R& z) {
    const R eps = std::numeric_limits<R>::epsilon();
    const R z2 = z * z;
    R power = z;
    R sum = z;
    for (int n = 3; n < 4000; n += 2) {
        power *= z2;
        const R term = power / n;
        sum += term;
        if (abs_of(term) <= eps * abs_of(sum) / 16) {
            break;
        }
    }
    return 2 * sum;
}

template <class R>
const R& ln2_constant() {
    static const R value = two_atanh_series(R(1) / 3);
    return value;
}

// ln(y) for y > 0. y = f * 2^e with f in [sqrt(1/2), sqrt(2)); ln f comes from
// the atanh form with |z| <= 0.172.
template <class R>
R log_pos(const R& y) {
    using std::frexp;
    using boost::multiprecision::frexp;
    int e = 0;
    R f = frexp(y, &e);
    if (f < R(0.70710678118654752440084436210484903928)) {
        f *= 2;
        --e;
    }
    const R u = f - 1;
    return R(e) * ln2_constant<R>() + two_atanh_series(u / (2 + u));
}

// ln(1+u) for u > -1, accurate in relative terms for tiny |u|.
template <class R>
R log1p_real(const R& u) {
    if (!(u > R(-1))) {
        throw Error(Errc::Domain, "log1p argument must exceed -1");
    }
    if (u == 0) {
        return R(0);
    }
    if (abs_of(u) < R(0.25)) {
        return two_atanh_series(u / (2 + u));
    }
    return log_pos(R(1) + u);
}

// Relative error budget for values produced by the 50-digit kernels.
inline const Real& kernel_rel_err() {
    static const Real value("1e-44");
    return value;
}

template <class R, class F>
R simpson_step(F& f, const R& lo, const R& hi, const R& flo, const R& fmid, const R& fhi, const R& whole,
               const R& tol, int depth) {
    const R mid = (lo + hi) / 2;
    const R lmid = (lo + mid) / 2;
    const R rmid = (mid + hi) / 2;
    const R flmid = f(lmid);
    const R frmid = f(rmid);
    const R left = (mid - lo) / 6 * (flo + 4 * flmid + fmid);
    const R right = (hi - mid) / 6 * (fmid + 4 * frmid + fhi);
    const R delta = left + right - whole;
    if (abs_of(delta) <= 15 * tol) {
        return left + right + delta / 15;
    }
    if (depth <= 0) {
        throw Error(Errc::ToleranceNotMet, "adaptive Simpson subdivision limit reached");
    }
    return simpson_step(f, lo, mid, flo, flmid, fmid, left, tol / 2, depth - 1) +
           simpson_step(f, mid, hi, fmid, frmid, fhi, right, tol / 2, depth - 1);
}

} // namespace detail

// ln(1+x) rounded in direction `dir`; error below one unit in the last place.
inline Dec ln1p(const Dec& x, RoundDir dir) {
    if (x <= Dec(-1)) {
        throw Error(Errc::Domain, "ln1p requires x > -1, got " + x.str());
    }
    if (x.is_zero()) {
        return Dec{};
    }
    const detail::Real v = detail::log1p_real(x.to_real());
    return Dec::from_real(v, dir, detail::kernel_rel_err());
}

// Adaptive Simpson on [lo, hi] with absolute tolerance `tol`.
template <class R, class F>
    requires(!std::same_as<R, Dec>)
R integrate(F&& f, const R& lo, const R& hi, const R& tol, int max_depth = 48) {
    if (hi < lo) {
        throw Error(Errc::Domain, "integrate requires lo <= hi");
    }
    if (!(tol > R(0))) {
        throw Error(Errc::Domain, "integrate requires tol > 0");
    }
    if (hi == lo) {
        return R(0);
    }
    const R flo = f(lo);
    const R fhi = f(hi);
    const R fmid = f((lo + hi) / 2);
    const R whole = (hi - lo) / 6 * (flo + 4 * fmid + fhi);
    return detail::simpson_step(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth);
}

inline Dec integrate(const std::function<detail::Real(const detail::Real&)>& f, const Dec& lo, const Dec& hi,
                     const Dec& tol) {
    const detail::Real v = integrate<detail::Real>(f, lo.to_real(), hi.to_real(), tol.to_real());
    return Dec::from_real(v, RoundDir::Nearest);
}

// Bisection on a monotone g whose endpoint values straddle zero. Returns the
// midpoint of the final bracket (width <= tol), or an exact root if hit.
template <class R, class G>
R bracket_solve(G&& g, R lo, R hi, const R& tol) {
    if (hi < lo) {
        std::swap(lo, hi);
    }
    R glo = g(lo);
    const R ghi = g(hi);
    if (glo == 0) return lo;
    if (ghi == 0) return hi;
    if ((glo < 0) == (ghi < 0)) {
        throw Error(Errc::NoBracket, "endpoint values share a sign");
    }
    while (hi - lo > tol) {
        const R mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const R gmid = g(mid);
        if (gmid == 0) {
            return mid;
        }
        if ((gmid < 0) == (glo < 0)) {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2;
}

// Fixed-point bisection; g is evaluated only on grid points.
template <class G>
Dec bracket_solve(G&& g, Dec lo, Dec hi, const Dec& tol) {
    if (hi < lo) {
        std::swap(lo, hi);
    }
    Dec glo = g(lo);
    const Dec ghi = g(hi);
    if (glo.is_zero()) return lo;
    if (ghi.is_zero()) return hi;
    if (glo.is_negative() == ghi.is_negative()) {
        throw Error(Errc::NoBracket, "endpoint values share a sign");
    }
    const Dec width = max(tol, Dec::ulp());
    while (hi - lo > width) {
        const Dec mid = lo + div_int(hi - lo, 2, RoundDir::Down);
        if (mid == lo) {
            break;
        }
        const Dec gmid = g(mid);
        if (gmid.is_zero()) {
            return mid;
        }
        if (gmid.is_negative() == glo.is_negative()) {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
    }
    return lo + div_int(hi - lo, 2, RoundDir::Nearest);
}

} // namespace eco
