#pragma once

// Mint/burn quoting on the allocative curve of a linear bonding curve.
//
// The signed payment for moving supply from s to s + x is the area under q:
//
//     m = theta/(tau k) * [x - ln(1 + tau k x / (1 + tau k s)) / (tau k)],
//     theta = (1 - tau + tau a) k.
//
// It is evaluated in the cancellation-free form
//
//     m = theta * [s x / D + (x / D)^2 * G(xi)],   D = 1 + tau k s,
//     xi = tau k x / D,  G(xi) = (xi - ln(1 + xi)) / xi^2,
//
// in 50-digit arithmetic and rounded once. Rounding never favours the trader:
// payments round up, rewards round down, minted tokens round down.

#include <cstddef>
#include <optional>

#include "eco/curves.hpp"
#include "eco/dec.hpp"
#include "eco/error.hpp"
#include "eco/numeric.hpp"

namespace eco {

enum class Exactness { Exact, GuaranteedLowerBound };

struct Quote {
    Dec x; // tokens: positive mint, negative burn
    Dec m; // money: positive payment, negative reward
    Exactness exactness{Exactness::Exact};
};

// (1 - tau + tau a) * k, the scale of the integrand.
class ThetaEff {
public:
    ThetaEff(const LinearBondingCurve& curve, const AllocativeParams& params)
        : value_(mul(Dec(1) - params.tau + mul(params.tau, params.a, RoundDir::Nearest), curve.k,
                     RoundDir::Nearest)) {}

    const Dec& value() const { return value_; }

private:
    Dec value_;
};

namespace detail {

struct CurveReal {
    Real k;
    Real tau;
    Real a;
    Real theta;
    Real tk;

    CurveReal(const LinearBondingCurve& curve, const AllocativeParams& params)
        : k(curve.k.to_real()), tau(params.tau.to_real()), a(params.a.to_real()) {
        theta = (1 - tau + tau * a) * k;
        tk = tau * k;
    }
};

// (xi - ln(1 + xi)) / xi^2
inline Real log_gap_ratio(const Real& xi, const Real& one_plus_xi) {
    if (abs_of(xi) < Real("0.1")) {
        const Real eps = std::numeric_limits<Real>::epsilon();
        Real power = 1;
        Real sum = Real(1) / 2;
        for (int n = 3; n < 400; ++n) {
            power *= -xi;
            const Real term = power / n;
            sum += term;
            if (abs_of(term) <= eps * sum / 16) break;
        }
        return sum;
    }
    const Real ln = xi < Real("-0.5") ? log_pos(one_plus_xi) : log1p_real(xi);
    return (xi - ln) / (xi * xi);
}

struct SignedArea {
    Real value;
    Real abs_err;
};

inline SignedArea signed_area(const CurveReal& c, const Real& s, const Real& x) {
    if (x == 0) {
        return {Real(0), Real(0)};
    }
    const Real D = 1 + c.tk * s;
    const Real xi = c.tk * x / D;
    const Real one_plus_xi = (1 + c.tk * (s + x)) / D;
    if (!(one_plus_xi > 0)) {
        throw Error(Errc::BurnExceedsSupply, "burn reaches the end of the curve domain");
    }
    const Real ratio = x / D;
    const Real linear = c.theta * s * ratio;
    const Real quadratic = c.theta * ratio * ratio * log_gap_ratio(xi, one_plus_xi);
    const Real value = linear + quadratic;
    return {value, (abs_of(linear) + abs_of(quadratic)) * kernel_rel_err()};
}

inline void check_supply(const Dec& s) {
    if (s.is_negative()) {
        throw Error(Errc::NegativeSupply, "supply " + s.str());
    }
}

// Signed area rounded toward +inf: overcharges payments, underpays rewards.
inline Dec area_up(const CurveReal& c, const Dec& s, const Dec& x) {
    if (x.is_zero()) return Dec{};
    const SignedArea area = signed_area(c, s.to_real(), x.to_real());
    const Real rel = area.value == 0 ? Real(0) : area.abs_err / abs_of(area.value);
    return Dec::from_real(area.value, RoundDir::Up, rel);
}

} // namespace detail

// Payment for minting x > 0 tokens at supply s, rounded up.
inline Dec mint_cost_exact(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                           const Dec& x) {
    detail::check_supply(s);
    if (x.is_negative()) {
        throw Error(Errc::Domain, "mint size must be positive, got " + x.str());
    }
    return detail::area_up(detail::CurveReal(curve, params), s, x);
}

// Signed (negative) money for burning -x tokens, |m| rounded down.
inline Dec burn_reward_exact(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                             const Dec& x) {
    detail::check_supply(s);
    if (x.is_positive()) {
        throw Error(Errc::Domain, "burn size must be negative, got " + x.str());
    }
    if (x < -s) {
        throw Error(Errc::BurnExceedsSupply, "burn " + x.str() + " exceeds supply " + s.str());
    }
    return detail::area_up(detail::CurveReal(curve, params), s, x);
}

// Chord lower bound on the burn reward |m| for x in [-s, 0):
//
//     |m| >= theta/(1 + tau k s) * (s|x| - x^2/2),
//
// from q(z) >= theta z/(1 + tau k s) on [s + x, s]. Nondecreasing as x -> -s.
// Computed as (s^2 - (s - |x|)^2)/2 so the rounded value is monotone too.
inline Dec burn_reward_lower(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                             const Dec& x) {
    detail::check_supply(s);
    if (x.is_positive()) {
        throw Error(Errc::Domain, "burn size must be negative, got " + x.str());
    }
    if (x < -s) {
        throw Error(Errc::BurnExceedsSupply, "burn " + x.str() + " exceeds supply " + s.str());
    }
    if (x.is_zero()) return Dec{};
    const Dec remaining = s + x;
    const Dec s_sq = mul(s, s, RoundDir::Down);
    const Dec rem_sq = mul(remaining, remaining, RoundDir::Up);
    const Dec area = max(Dec{}, div_int(s_sq - rem_sq, 2, RoundDir::Down));
    // theta/(1 + tau k s) rounded down as one fraction
    const Dec tk = mul(params.tau, curve.k, RoundDir::Up);
    const Dec D = Dec(1) + mul(tk, s, RoundDir::Up);
    const Dec coef = Dec(1) - params.tau + mul(params.tau, params.a, RoundDir::Down);
    const Dec theta = mul(max(coef, Dec{}), curve.k, RoundDir::Down);
    return mul(div(theta, D, RoundDir::Down), area, RoundDir::Down);
}

// The bound exactly as published, theta/D * max(0, s|x| - x^2/max(2, D)).
// Not a valid lower bound once D > 2; kept for comparison only.
inline Dec burn_reward_lower_published(const LinearBondingCurve& curve, const AllocativeParams& params,
                                       const Dec& s, const Dec& x) {
    detail::check_supply(s);
    if (x.is_positive()) {
        throw Error(Errc::Domain, "burn size must be negative, got " + x.str());
    }
    if (x < -s) {
        throw Error(Errc::BurnExceedsSupply, "burn " + x.str() + " exceeds supply " + s.str());
    }
    const Dec ax = abs(x);
    const Dec D = Dec(1) + mul(mul(params.tau, curve.k, RoundDir::Nearest), s, RoundDir::Nearest);
    const Dec theta = ThetaEff(curve, params).value();
    const Dec inner = mul(s, ax, RoundDir::Nearest) - div(mul(ax, ax, RoundDir::Nearest), max(Dec(2), D), RoundDir::Nearest);
    return mul(div(theta, D, RoundDir::Nearest), max(Dec{}, inner), RoundDir::Nearest);
}

// Square-root lower bound on tokens minted for payment m > 0:
//
//     x >= (1 + tau k s)/2 * (sqrt(s^2 + 4m/theta) - s).
inline Dec mint_tokens_lower(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                             const Dec& m) {
    detail::check_supply(s);
    if (!m.is_positive()) {
        if (m.is_zero()) return Dec{};
        throw Error(Errc::Domain, "payment must be positive, got " + m.str());
    }
    const Dec tk = mul(params.tau, curve.k, RoundDir::Down);
    const Dec D = Dec(1) + mul(tk, s, RoundDir::Down);
    const Dec coef = Dec(1) - params.tau + mul(params.tau, params.a, RoundDir::Up);
    const Dec theta = mul(coef, curve.k, RoundDir::Up);
    const Dec radicand = mul(s, s, RoundDir::Down) + div(mul_int(m, 4), theta, RoundDir::Down);
    const Dec root = sqrt(radicand, RoundDir::Down) - s;
    return mul(div_int(D, 2, RoundDir::Down), max(root, Dec{}), RoundDir::Down);
}

// Result of inverting the payment for tokens. `remainder` = m - cost stays in
// the reserve; when no whole ulp of tokens is affordable, x = 0 and the full
// payment is refundable.
struct MintSolution {
    Dec x;
    Dec cost;
    Dec remainder;

    bool dust() const { return x.is_zero(); }
};

namespace detail {

// Newton from the square-root lower bound; f is convex and increasing.
inline Real mint_tokens_estimate(const CurveReal& c, const Real& s, const Real& m, const Real& start) {
    Real x = start;
    for (int i = 0; i < 200; ++i) {
        const Real f = signed_area(c, s, x).value - m;
        const Real slope = allocative_price(c.k, c.tau, c.a, s + x);
        if (!(slope > 0)) break;
        Real next = x - f / slope;
        if (next < 0) next = x / 2;
        if (abs_of(next - x) <= abs_of(x) * Real("1e-40")) {
            return next;
        }
        x = next;
    }
    return x;
}

} // namespace detail

// Largest x on the fixed-point grid whose rounded-up cost does not exceed m.
inline MintSolution solve_mint(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                               const Dec& m, const Dec& tol = Dec::ulp()) {
    detail::check_supply(s);
    if (!m.is_positive()) {
        throw Error(Errc::ZeroPayment, "payment must be positive, got " + m.str());
    }
    if (!tol.is_positive()) {
        throw Error(Errc::InvalidParams, "tolerance must be positive");
    }
    const detail::CurveReal c(curve, params);
    auto cost = [&](const Dec& x) { return detail::area_up(c, s, x); };

    if (cost(Dec::ulp()) > m) {
        return MintSolution{Dec{}, Dec{}, m};
    }

    const Dec lower = mint_tokens_lower(curve, params, s, m);
    const detail::Real guess =
        detail::mint_tokens_estimate(c, s.to_real(), m.to_real(), detail::Real(max(lower, Dec::ulp()).to_real()));
    Dec x = max(Dec::from_real(guess, RoundDir::Down), Dec::ulp());

    // Bracket [lo, hi) with cost(lo) <= m < cost(hi), then bisect on raw units.
    Dec lo;
    Dec hi;
    Dec step = Dec::ulp();
    int iterations = 0;
    constexpr int kMaxIterations = 600;
    if (cost(x) <= m) {
        lo = x;
        hi = x + step;
        while (cost(hi) <= m) {
            lo = hi;
            step = mul_int(step, 2);
            hi = hi + step;
            if (++iterations > kMaxIterations) {
                throw Error(Errc::ToleranceNotMet, "could not bracket mint size");
            }
        }
    } else {
        hi = x;
        lo = x - step;
        while (lo.is_positive() && cost(lo) > m) {
            hi = lo;
            step = mul_int(step, 2);
            lo = max(lo - step, Dec{});
            if (++iterations > kMaxIterations) {
                throw Error(Errc::ToleranceNotMet, "could not bracket mint size");
            }
        }
    }
    while (hi - lo > Dec::ulp()) {
        const Dec mid = lo + div_int(hi - lo, 2, RoundDir::Down);
        if (cost(mid) <= m) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (++iterations > kMaxIterations) {
            throw Error(Errc::ToleranceNotMet, "mint inversion did not converge");
        }
    }

    const Dec spent = cost(lo);
    // Slack must be explained by the one-ulp token grid, within `tol` of price.
    const Dec edge_price = price_allocative(curve, params, s + hi, RoundDir::Up);
    const Dec allowed = mul(max(edge_price, Dec(1)), max(tol, Dec::ulp()), RoundDir::Up) + mul_int(Dec::ulp(), 2) +
                        mul(edge_price, Dec::ulp(), RoundDir::Up);
    if (m - spent > allowed && lo.is_positive()) {
        throw Error(Errc::ToleranceNotMet, "residual " + (m - spent).str() + " exceeds tolerance");
    }
    return MintSolution{lo, spent, m - spent};
}

inline Dec mint_tokens_exact(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                             const Dec& m, const Dec& tol = Dec::ulp()) {
    return solve_mint(curve, params, s, m, tol).x;
}

inline Quote quote_mint(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                        const Dec& m) {
    const MintSolution sol = solve_mint(curve, params, s, m);
    return Quote{sol.x, m, Exactness::Exact};
}

inline Quote quote_mint_lower(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                              const Dec& m) {
    return Quote{mint_tokens_lower(curve, params, s, m), m, Exactness::GuaranteedLowerBound};
}

inline Quote quote_burn(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                        const Dec& x) {
    return Quote{x, burn_reward_exact(curve, params, s, x), Exactness::Exact};
}

inline Quote quote_burn_lower(const LinearBondingCurve& curve, const AllocativeParams& params, const Dec& s,
                              const Dec& x) {
    return Quote{x, -burn_reward_lower(curve, params, s, x), Exactness::GuaranteedLowerBound};
}

// Signed area under an arbitrary price function by adaptive Simpson. Test
// oracle only; production quoting never integrates numerically.
template <class F>
Dec quote_by_quadrature(F&& price, const Dec& s, const Dec& x, const Dec& tol) {
    if (x.is_zero()) return Dec{};
    const detail::Real lo = x.is_negative() ? (s + x).to_real() : s.to_real();
    const detail::Real hi = x.is_negative() ? s.to_real() : (s + x).to_real();
    const detail::Real area = integrate<detail::Real>(price, lo, hi, tol.to_real());
    return Dec::from_real(x.is_negative() ? detail::Real(-area) : area, RoundDir::Nearest);
}

} // namespace eco
