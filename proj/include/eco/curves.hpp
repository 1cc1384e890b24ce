#pragma once

// Linear bonding curve p(s) = k*s and its tax-damped allocative transform
//
//     q(s) = (1 - tau + tau*a) * p(s) / (1 + tau * p(s)),
//
// which is strictly increasing, starts at 0 and stays below a + (1-tau)/tau.
// The efficiency predicates sample [0, S] on a caller-chosen grid.

#include <cstddef>
#include <type_traits>

#include "eco/dec.hpp"
#include "eco/error.hpp"

namespace eco {

struct LinearBondingCurve {
    Dec k;

    static LinearBondingCurve make(const Dec& k) {
        if (!k.is_positive()) {
            throw Error(Errc::InvalidParams, "bonding slope k must be positive, got " + k.str());
        }
        return LinearBondingCurve{k};
    }
};

struct AllocativeParams {
    Dec a;   // per-token assessment
    Dec tau; // tax rate, strictly inside (0, 1)

    static AllocativeParams make(const Dec& a, const Dec& tau) {
        if (a.is_negative()) {
            throw Error(Errc::InvalidParams, "assessment must be nonnegative, got " + a.str());
        }
        if (!tau.is_positive() || tau >= Dec(1)) {
            throw Error(Errc::InvalidParams, "tax rate must lie in (0,1), got " + tau.str());
        }
        return AllocativeParams{a, tau};
    }
};

struct EfficiencyQuery {
    Dec epsilon;
    Dec S;
    Dec delta;

    void validate() const {
        if (!epsilon.is_positive() || !S.is_positive() || !delta.is_positive()) {
            throw Error(Errc::InvalidParams, "efficiency query fields must be strictly positive");
        }
    }
};

inline Dec price_bonding(const LinearBondingCurve& curve, const Dec& s) {
    if (s.is_negative()) {
        throw Error(Errc::NegativeSupply, "supply " + s.str());
    }
    return mul(curve.k, s, RoundDir::Nearest);
}

// Evaluated as one exact rational and rounded once.
inline Dec price_allocative(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                            RoundDir dir = RoundDir::Nearest) {
    using detail::BigInt;
    if (s.is_negative()) {
        throw Error(Errc::NegativeSupply, "supply " + s.str());
    }
    const BigInt unit(detail::dec_scale());
    const BigInt tau(params.tau.raw());
    const BigInt p = BigInt(curve.k.raw()) * BigInt(s.raw());            // scale 1e36
    const BigInt c = unit * unit - tau * unit + tau * BigInt(params.a.raw()); // scale 1e36
    const BigInt den = unit * unit * unit + tau * p;                      // scale 1e54
    return Dec::from_raw(detail::narrow(detail::div_round(BigInt(c * p), den, dir)));
}

// a + (1 - tau)/tau, rounded up so it stays a valid upper bound.
inline Dec allocative_sup(const AllocativeParams& params) {
    return params.a + div(Dec(1) - params.tau, params.tau, RoundDir::Up);
}

// Real-valued forms for analysis at magnitudes the fixed-point grid cannot resolve.
template <class R>
R bonding_price(const R& k, const R& s) {
    return k * s;
}

template <class R>
R allocative_price(const R& k, const R& tau, const R& a, const R& s) {
    const R p = k * s;
    return (1 - tau + tau * a) * p / (1 + tau * p);
}

template <class R>
R allocative_sup(const R& tau, const R& a) {
    return a + (1 - tau) / tau;
}

// Smallest tax rate that keeps q <= a + eps everywhere.
template <class R>
R tau_plus(const R& eps) {
    return R(1) / (1 + eps);
}

inline Dec tau_plus(const Dec& eps) {
    if (!eps.is_positive()) {
        throw Error(Errc::InvalidParams, "tolerance must be positive");
    }
    return min(div(Dec(1), Dec(1) + eps, RoundDir::Up), Dec(1) - Dec::ulp());
}

// Tax rate at or below which sup_{[0,S]} |q - p| <= delta.
//
// |q - p| = tau * p * |1 + p - a| / (1 + tau*p) <= tau * p(S) * (|1 - a| + p(S)).
template <class R>
R tau_minus(const R& delta, const R& a, const R& p_at_S) {
    using std::abs;
    using boost::multiprecision::abs;
    const R spread = p_at_S * (abs(1 - a) + p_at_S);
    return delta / (spread > 1 ? spread : R(1));
}

// Clamped into [ulp, 1 - ulp]. When the exact threshold is below one ulp the
// clamp wins and the guarantee no longer holds; use the real-valued form then.
inline Dec tau_minus(const Dec& delta, const Dec& a, const Dec& p_at_S) {
    if (!delta.is_positive() || !p_at_S.is_positive()) {
        throw Error(Errc::InvalidParams, "tau_minus requires delta > 0 and p(S) > 0");
    }
    const Dec spread = mul(p_at_S, abs(Dec(1) - a) + p_at_S, RoundDir::Up);
    const Dec t = div(delta, max(Dec(1), spread), RoundDir::Down);
    return min(max(t, Dec::ulp()), Dec(1) - Dec::ulp());
}

// The threshold exactly as published: delta / max(1, |2 - a| * p(S)). Only
// valid when p(S) <= 1; kept for comparison.
inline Dec tau_minus_published(const Dec& delta, const Dec& a, const Dec& p_at_S) {
    if (!delta.is_positive() || !p_at_S.is_positive()) {
        throw Error(Errc::InvalidParams, "tau_minus requires delta > 0 and p(S) > 0");
    }
    const Dec spread = mul(abs(Dec(2) - a), p_at_S, RoundDir::Up);
    const Dec t = div(delta, max(Dec(1), spread), RoundDir::Down);
    return min(max(t, Dec::ulp()), Dec(1) - Dec::ulp());
}

enum class Monotone { No, Yes };

namespace detail {

inline Dec grid_point(const Dec& S, std::size_t i, std::size_t n) {
    return div_int(mul_int(S, static_cast<std::int64_t>(i)), static_cast<std::int64_t>(n - 1), RoundDir::Nearest);
}

template <class R>
R grid_point(const R& S, std::size_t i, std::size_t n) {
    return S * R(i) / R(n - 1);
}

inline void check_grid(std::size_t grid) {
    if (grid < 2) {
        throw Error(Errc::InvalidParams, "grid needs at least 2 points");
    }
}

} // namespace detail

// curve(s) <= a + eps on the sample grid of [0, S]. For a monotone curve only
// s = S is checked.
template <class Scalar, class Curve>
bool is_allocatively_efficient(Curve&& curve, const Scalar& a, const Scalar& eps, const Scalar& S,
                               std::size_t grid, Monotone monotone = Monotone::No) {
    detail::check_grid(grid);
    const Scalar ceiling = a + eps;
    if (monotone == Monotone::Yes) {
        return !(ceiling < curve(S));
    }
    for (std::size_t i = 0; i < grid; ++i) {
        if (ceiling < curve(detail::grid_point(S, i, grid))) {
            return false;
        }
    }
    return true;
}

// reference(s) <= curve(s) on the sample grid of [0, S].
template <class Scalar, class Curve, class Reference>
bool is_investment_efficient(Curve&& curve, Reference&& reference, const Scalar& S, std::size_t grid) {
    detail::check_grid(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        const Scalar s = detail::grid_point(S, i, grid);
        if (curve(s) < reference(s)) {
            return false;
        }
    }
    return true;
}

// max over the grid of |lhs(s) - rhs(s)|.
template <class Scalar, class F, class G>
Scalar uniform_gap(F&& lhs, G&& rhs, const Scalar& S, std::size_t grid) {
    detail::check_grid(grid);
    Scalar worst{};
    for (std::size_t i = 0; i < grid; ++i) {
        const Scalar s = detail::grid_point(S, i, grid);
        const Scalar d = lhs(s) - rhs(s);
        const Scalar mag = d < Scalar{} ? Scalar(-d) : d;
        if (worst < mag) worst = mag;
    }
    return worst;
}

// grid-max of q over [0, S]
template <class Scalar, class F>
Scalar grid_max(F&& f, const Scalar& S, std::size_t grid) {
    detail::check_grid(grid);
    Scalar best = f(detail::grid_point(S, 0, grid));
    for (std::size_t i = 1; i < grid; ++i) {
        const Scalar v = f(detail::grid_point(S, i, grid));
        if (best < v) best = v;
    }
    return best;
}

} // namespace eco
