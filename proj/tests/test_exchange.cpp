#include <gtest/gtest.h>

#include "eco/exchange.hpp"
#include "support.hpp"

using namespace eco;
using eco::test::Draw;
using eco::test::Real;

namespace {

Dec D(const char* s) { return Dec::parse(s); }

const LinearBondingCurve k1{Dec(1)};
const AllocativeParams a2_half{Dec(2), D("0.5")};

// Independent oracles: adaptive Simpson over q, and the textbook closed form
// evaluated with Boost's 50-digit log.
Real simpson_area(const LinearBondingCurve& c, const AllocativeParams& p, const Dec& s, const Dec& x,
                  const Real& tol) {
    const Real k = c.k.to_real(), tau = p.tau.to_real(), a = p.a.to_real();
    auto q = [&](const Real& z) { return allocative_price<Real>(k, tau, a, z); };
    const Real lo = x.is_negative() ? (s + x).to_real() : s.to_real();
    const Real hi = x.is_negative() ? s.to_real() : (s + x).to_real();
    const Real area = integrate<Real>(q, lo, hi, tol);
    return x.is_negative() ? Real(-area) : area;
}

Real textbook_area(const LinearBondingCurve& c, const AllocativeParams& p, const Dec& s, const Dec& x) {
    const Real k = c.k.to_real(), tau = p.tau.to_real(), a = p.a.to_real();
    const Real theta = (1 - tau + tau * a) * k;
    const Real tk = tau * k;
    const Real xr = x.to_real();
    return theta / tk * (xr - boost::multiprecision::log(1 + tk * xr / (1 + tk * s.to_real())) / tk);
}

} // namespace

TEST(Exchange, MintCostExamples) {
    EXPECT_EQ(mint_cost_exact(k1, a2_half, Dec{}, Dec(1)).str(), "0.567209351351013709");
    EXPECT_EQ(mint_cost_exact(k1, a2_half, Dec{}, Dec(2)).str(), "1.841116916640328144");
    EXPECT_EQ(mint_cost_exact(k1, a2_half, Dec{}, Dec{}), Dec{});
    EXPECT_LE(mint_cost_exact(k1, a2_half, D("3"), Dec::ulp()), mul_int(Dec::ulp(), 2));
    EXPECT_THROW(mint_cost_exact(k1, a2_half, D("-1"), Dec(1)), Error);
    EXPECT_THROW(mint_cost_exact(k1, a2_half, Dec(1), D("-1")), Error);
}

TEST(Exchange, BurnRewardExamples) {
    EXPECT_EQ(burn_reward_exact(k1, a2_half, Dec(1), D("-1")).str(), "-0.567209351351013708");
    EXPECT_EQ(burn_reward_exact(k1, a2_half, Dec(2), D("-2")).str(), "-1.841116916640328143");
    EXPECT_EQ(burn_reward_exact(k1, a2_half, Dec(2), Dec{}), Dec{});
    EXPECT_GE(burn_reward_exact(k1, a2_half, Dec(2), -Dec::ulp()), -mul_int(Dec::ulp(), 2));
    try {
        (void)burn_reward_exact(k1, a2_half, Dec(1), D("-1.000000000000000001"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::BurnExceedsSupply);
    }
}

TEST(Exchange, ThetaEff) {
    EXPECT_EQ(ThetaEff(k1, a2_half).value(), D("1.5"));
    EXPECT_EQ(ThetaEff(LinearBondingCurve{D("0.4")}, AllocativeParams{Dec{}, D("0.7")}).value(), D("0.12"));
}

TEST(Exchange, ClosedFormWithinTwoUlp) {
    Draw draw(31);
    const Real two_ulp = mul_int(Dec::ulp(), 2).to_real();
    for (int i = 0; i < 1000; ++i) {
        const LinearBondingCurve c{draw.log_uniform(0.01, 10)};
        const AllocativeParams p{draw.uniform(0, 10), draw.uniform(0.01, 0.99)};
        const Dec s = draw.uniform(0, 100);
        const Dec x = draw.log_uniform(1e-6, 100);
        const Real want = textbook_area(c, p, s, x);
        const Dec m = mint_cost_exact(c, p, s, x);
        // never undercharged
        ASSERT_GE(m.to_real(), want - Real("1e-30"));
        ASSERT_LE(m.to_real() - want, two_ulp);
        if (x <= s) {
            const Dec r = burn_reward_exact(c, p, s, -x);
            const Real rw = textbook_area(c, p, s, -x);
            // reward magnitude never overpaid
            ASSERT_GE(r.to_real(), rw - Real("1e-30"));
            ASSERT_LE(r.to_real() - rw, two_ulp);
        }
    }
}

TEST(Exchange, ClosedFormMatchesQuadrature) {
    Draw draw(35);
    for (int i = 0; i < 100; ++i) {
        const LinearBondingCurve c{draw.log_uniform(0.01, 10)};
        const AllocativeParams p{draw.uniform(0, 10), draw.uniform(0.01, 0.99)};
        const Dec s = draw.uniform(0, 100);
        const Dec x = draw.log_uniform(1e-3, 100);
        const Dec m = mint_cost_exact(c, p, s, x);
        const Real want = simpson_area(c, p, s, x, m.to_real() * Real("1e-13"));
        ASSERT_LT(eco::test::rel_err(m.to_real(), want), Real("1e-11"));
    }
}

TEST(Exchange, QuadratureQuote) {
    auto p = [](const Real& z) { return z; };
    EXPECT_EQ(quote_by_quadrature(p, Dec{}, Dec(2), D("0.000000000001")), Dec(2));
    EXPECT_EQ(quote_by_quadrature(p, Dec(2), D("-2"), D("0.000000000001")), D("-2"));
    EXPECT_EQ(quote_by_quadrature(p, Dec(3), Dec{}, D("0.000000000001")), Dec{});
}

TEST(Exchange, BurnLowerExamples) {
    EXPECT_EQ(burn_reward_lower(k1, a2_half, Dec(1), D("-1")), D("0.5"));
    EXPECT_EQ(burn_reward_lower(k1, a2_half, Dec(1), Dec{}), Dec{});
    EXPECT_LE(burn_reward_lower(k1, a2_half, Dec(1), -Dec::ulp()), Dec::ulp());
    // Published form: 1.5/3 (4 - 1/3)
    EXPECT_EQ(burn_reward_lower_published(k1, a2_half, Dec(4), D("-1")).str(), "1.833333333333333334");
    // Chord form: 1.5/3 (4 - 1/2)
    EXPECT_EQ(burn_reward_lower(k1, a2_half, Dec(4), D("-1")), D("1.75"));
    const Dec exact = -burn_reward_exact(k1, a2_half, Dec(4), D("-1"));
    EXPECT_LE(burn_reward_lower(k1, a2_half, Dec(4), D("-1")), exact);
    EXPECT_THROW(burn_reward_lower(k1, a2_half, Dec(1), D("-2")), Error);
}

// When 1 + tau k s > 2 the published bound can exceed the true reward.
TEST(Exchange, PublishedBurnBoundFailsForLargeSupply) {
    const AllocativeParams p{Dec(1), D("0.9")};
    const Dec s = Dec(10), x = D("-10");
    const Dec exact = -burn_reward_exact(k1, p, s, x);
    EXPECT_GT(burn_reward_lower_published(k1, p, s, x), exact);
    EXPECT_LE(burn_reward_lower(k1, p, s, x), exact);
}

TEST(Exchange, MintLowerExamples) {
    const Dec m = D("0.567209351351013709");
    EXPECT_EQ(mint_tokens_lower(k1, a2_half, Dec{}, m).str(), "0.614930538815029475");
    EXPECT_EQ(mint_tokens_lower(k1, a2_half, Dec{}, Dec{}), Dec{});
    EXPECT_LE(mint_tokens_lower(k1, a2_half, Dec(1), m), mint_tokens_exact(k1, a2_half, Dec(1), m));
    EXPECT_LE(mint_tokens_lower(k1, a2_half, Dec(1), m), Dec(1));
}

TEST(Exchange, BoundsHoldOnRandomDraws) {
    Draw draw(32);
    for (int i = 0; i < 2000; ++i) {
        const LinearBondingCurve c{draw.uniform(0.001, 10)};
        const AllocativeParams p{draw.uniform(0, 10), draw.uniform(0.01, 0.99)};
        const Dec s = draw.log_uniform(1e-3, 1e4);
        const Dec x = -mul(s, draw.uniform(1e-9, 1, 15), RoundDir::Down);
        if (!x.is_zero()) {
            ASSERT_LE(burn_reward_lower(c, p, s, x), -burn_reward_exact(c, p, s, x));
        }
        const Dec m = draw.log_uniform(1e-6, 1e4);
        ASSERT_LE(mint_tokens_lower(c, p, s, m), mint_tokens_exact(c, p, s, m));
    }
}

TEST(Exchange, MintInversionExamples) {
    EXPECT_EQ(mint_tokens_exact(k1, a2_half, Dec{}, D("0.567209351351013709")), Dec(1));
    EXPECT_EQ(mint_tokens_exact(k1, a2_half, Dec{}, D("0.567209557828")).str(), "1.000000206476972080");
    const Quote q = quote_mint(k1, a2_half, Dec{}, D("0.567209351351013709"));
    EXPECT_EQ(q.x, Dec(1));
    EXPECT_EQ(q.exactness, Exactness::Exact);
    EXPECT_EQ(quote_mint_lower(k1, a2_half, Dec{}, Dec(1)).exactness, Exactness::GuaranteedLowerBound);
}

TEST(Exchange, MintInversionRoundTrip) {
    Draw draw(33);
    for (int i = 0; i < 300; ++i) {
        const LinearBondingCurve c{draw.log_uniform(0.01, 10)};
        const AllocativeParams p{draw.uniform(0, 10), draw.uniform(0.01, 0.99)};
        const Dec s = draw.uniform(0, 1000);
        const Dec x0 = draw.log_uniform(1e-4, 100, 18);
        const Dec m = mint_cost_exact(c, p, s, x0);
        const MintSolution sol = solve_mint(c, p, s, m);
        // x0 is affordable, one more ulp is not unless the cost grid is flat there.
        ASSERT_GE(sol.x, x0);
        ASSERT_LE(sol.cost, m);
        ASSERT_GT(mint_cost_exact(c, p, s, sol.x + Dec::ulp()), m);
        ASSERT_EQ(sol.remainder, m - sol.cost);
    }
}

TEST(Exchange, DustPaymentIsRefundable) {
    const MintSolution sol = solve_mint(k1, a2_half, Dec(1000), Dec::ulp());
    EXPECT_TRUE(sol.dust());
    EXPECT_EQ(sol.remainder, Dec::ulp());
    try {
        (void)solve_mint(k1, a2_half, Dec(1), Dec{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ZeroPayment);
    }
}

TEST(Exchange, QuoteSigns) {
    const Quote b = quote_burn(k1, a2_half, Dec(1), D("-0.5"));
    EXPECT_TRUE(b.x.is_negative());
    EXPECT_TRUE(b.m.is_negative());
    const Quote bl = quote_burn_lower(k1, a2_half, Dec(1), D("-0.5"));
    EXPECT_EQ(bl.exactness, Exactness::GuaranteedLowerBound);
    // A lower bound on the reward never favours the trader.
    EXPECT_GE(bl.m, b.m);
}

TEST(Exchange, PositiveFriction) {
    Draw draw(34);
    for (int i = 0; i < 1000; ++i) {
        const LinearBondingCurve c{draw.log_uniform(0.01, 10)};
        const AllocativeParams p{draw.uniform(0, 10), draw.uniform(0.01, 0.99)};
        const Dec s = draw.uniform(0, 1000);
        const Dec m = draw.log_uniform(1e-6, 1e4);
        const MintSolution sol = solve_mint(c, p, s, m);
        if (sol.dust()) continue;
        ASSERT_LE(-burn_reward_exact(c, p, s + sol.x, -sol.x), m);
    }
}

TEST(Exchange, TinyTaxStillQuotes) {
    const AllocativeParams p{Dec(1), D("0.000000000001")};
    const Dec m = mint_cost_exact(k1, p, Dec{}, Dec(2));
    EXPECT_LT(abs(m - Dec(2)), D("0.000000001"));
    EXPECT_EQ(mint_tokens_exact(k1, p, Dec{}, m), Dec(2));
}
