#pragma once

// Organization state machine: mint with an assessment vote, burn, reserve
// accounting and solvency reporting.
//
// Mint order: average the vote into the aggregate assessment, clamp the
// relative change, then price the purchase on the updated curve and add the
// whole payment to the reserve. Burn pays the area under the current curve.
//
// EcoState is single-writer. Organization serializes mutations and keeps the
// receipt journal; readers may copy the state freely.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eco/curves.hpp"
#include "eco/dec.hpp"
#include "eco/error.hpp"
#include "eco/exchange.hpp"

namespace eco {

enum class Weighting { EqualPerTransaction, VolumeProportional };

inline std::string weighting_name(Weighting w) {
    return w == Weighting::EqualPerTransaction ? "equal" : "volume";
}

inline Weighting parse_weighting(const std::string& text) {
    if (text == "equal") return Weighting::EqualPerTransaction;
    if (text == "volume") return Weighting::VolumeProportional;
    throw Error(Errc::Parse, "unknown weighting '" + text + "' (expected equal|volume)");
}

struct VotingConfig {
    Dec theta_avg;
    Dec c;
    Weighting weighting{Weighting::EqualPerTransaction};
    // When false the aggregate assessment never moves (plain curve mode).
    bool enabled{true};

    void validate() const {
        if (!theta_avg.is_positive() || theta_avg >= Dec(1)) {
            throw Error(Errc::InvalidParams, "averaging weight must lie in (0,1), got " + theta_avg.str());
        }
        if (!c.is_positive() || c >= Dec(1)) {
            throw Error(Errc::InvalidParams, "clamp c must lie in (0,1), got " + c.str());
        }
    }

    friend bool operator==(const VotingConfig&, const VotingConfig&) = default;
};

struct EcoState {
    Dec s;     // supply
    Dec r;     // reserve
    Dec a_bar; // aggregate assessment
    Dec k;
    Dec tau;
    VotingConfig voting;
    // Cap burns pro-rata at the reserve instead of refusing them.
    bool solvency_guard{false};
    std::uint64_t seq{0};

    LinearBondingCurve curve() const { return LinearBondingCurve{k}; }
    AllocativeParams params() const { return AllocativeParams{a_bar, tau}; }

    friend bool operator==(const EcoState&, const EcoState&) = default;
};

enum class ReceiptKind { Mint, Burn, BurnCapped };

inline std::string receipt_kind_name(ReceiptKind kind) {
    switch (kind) {
    case ReceiptKind::Mint: return "mint";
    case ReceiptKind::Burn: return "burn";
    case ReceiptKind::BurnCapped: return "burn-capped";
    }
    return "?";
}

struct Receipt {
    std::uint64_t seq{0};
    ReceiptKind kind{ReceiptKind::Mint};
    Dec m;                   // payment (> 0) or reward (< 0)
    Dec x;                   // tokens minted (> 0) or burned (< 0)
    std::optional<Dec> a;    // submitted assessment; burns carry none
    Dec a_bar_before;
    Dec a_bar_after;
    Dec spot_before;
    Dec spot_after;
    Dec s_after;
    Dec r_after;

    bool insolvency_breach() const { return kind == ReceiptKind::BurnCapped; }

    friend bool operator==(const Receipt&, const Receipt&) = default;
};

using MintReceipt = Receipt;
using BurnReceipt = Receipt;

struct Transition {
    Receipt receipt;
    EcoState state;
};

inline EcoState genesis(const Dec& k, const Dec& tau, const VotingConfig& voting, const Dec& a_bar0,
                        bool solvency_guard = false) {
    LinearBondingCurve::make(k);
    AllocativeParams::make(a_bar0, tau);
    voting.validate();
    if (!a_bar0.is_positive()) {
        throw Error(Errc::InvalidParams, "initial aggregate assessment must be positive");
    }
    EcoState st;
    st.k = k;
    st.tau = tau;
    st.a_bar = a_bar0;
    st.voting = voting;
    st.solvency_guard = solvency_guard;
    return st;
}

inline Dec spot_price(const EcoState& st) { return price_allocative(st.curve(), st.params(), st.s); }

// Averaging step followed by the relative clamp. The averaging weight is
// theta for equal weighting, or x_est/(s + x_est) for volume weighting with
// x_est quoted on the pre-vote curve.
inline Dec next_assessment(const EcoState& st, const Dec& m, const Dec& a) {
    if (!st.voting.enabled) {
        return st.a_bar;
    }
    Dec weight = st.voting.theta_avg;
    if (st.voting.weighting == Weighting::VolumeProportional) {
        const Dec x_est = solve_mint(st.curve(), st.params(), st.s, m).x;
        const Dec total = st.s + x_est;
        weight = total.is_zero() ? Dec(1) : div(x_est, total, RoundDir::Nearest);
    }
    const Dec alpha = st.a_bar + mul(weight, a - st.a_bar, RoundDir::Nearest);
    const Dec ceiling = mul(st.a_bar, Dec(1) + st.voting.c, RoundDir::Down);
    const Dec floor = mul(st.a_bar, Dec(1) - st.voting.c, RoundDir::Up);
    return max(min(alpha, ceiling), floor);
}

inline Transition mint(const EcoState& st, const Dec& m, const Dec& a) {
    if (!m.is_positive()) {
        throw Error(Errc::ZeroPayment, "mint payment must be positive, got " + m.str());
    }
    if (a.is_negative()) {
        throw Error(Errc::InvalidParams, "assessment must be nonnegative, got " + a.str());
    }
    Receipt rc;
    rc.kind = ReceiptKind::Mint;
    rc.m = m;
    rc.a = a;
    rc.a_bar_before = st.a_bar;
    rc.spot_before = spot_price(st);

    EcoState next = st;
    next.a_bar = next_assessment(st, m, a);
    const MintSolution sol = solve_mint(next.curve(), next.params(), next.s, m);
    if (sol.dust()) {
        throw Error(Errc::ZeroPayment, "payment " + m.str() + " buys less than one token unit; refundable");
    }
    next.s = next.s + sol.x;
    next.r = next.r + m;
    next.seq = st.seq + 1;

    rc.seq = next.seq;
    rc.x = sol.x;
    rc.a_bar_after = next.a_bar;
    rc.spot_after = spot_price(next);
    rc.s_after = next.s;
    rc.r_after = next.r;
    return Transition{rc, next};
}

inline Transition burn(const EcoState& st, const Dec& x) {
    if (!x.is_negative()) {
        throw Error(Errc::Domain, "burn size must be negative, got " + x.str());
    }
    if (x < -st.s) {
        throw Error(Errc::BurnExceedsSupply, "burn " + x.str() + " exceeds supply " + st.s.str());
    }
    Receipt rc;
    rc.kind = ReceiptKind::Burn;
    rc.x = x;
    rc.a_bar_before = st.a_bar;
    rc.a_bar_after = st.a_bar;
    rc.spot_before = spot_price(st);

    Dec reward = -burn_reward_exact(st.curve(), st.params(), st.s, x);
    if (reward > st.r) {
        if (!st.solvency_guard) {
            throw Error(Errc::InsolvencyBreach,
                        "reward " + reward.str() + " exceeds reserve " + st.r.str());
        }
        // pro-rata share; the last holder takes whatever remains
        reward = -x == st.s ? st.r : min(reward, div(mul(st.r, -x, RoundDir::Down), st.s, RoundDir::Down));
        rc.kind = ReceiptKind::BurnCapped;
    }
    EcoState next = st;
    next.s = st.s + x;
    next.r = st.r - reward;
    next.seq = st.seq + 1;

    rc.seq = next.seq;
    rc.m = -reward;
    rc.spot_after = spot_price(next);
    rc.s_after = next.s;
    rc.r_after = next.r;
    return Transition{rc, next};
}

// Reserve over the reward for burning the whole supply on the current curve.
// 1 when nothing is owed.
inline Dec solvency_ratio(const EcoState& st) {
    if (st.s.is_zero()) {
        return Dec(1);
    }
    const Dec owed = -burn_reward_exact(st.curve(), st.params(), st.s, -st.s);
    if (owed.is_zero()) {
        return Dec(1);
    }
    return div(st.r, owed, RoundDir::Down);
}

// Reserve surplus a static-assessment history may accumulate: each
// transaction leaves at most one token-ulp of price plus rounding.
inline Dec friction_bound(std::size_t n_tx, const Dec& price_ceiling) {
    return mul(mul_int(Dec::ulp(), 4 * static_cast<std::int64_t>(n_tx)), max(Dec(1), price_ceiling), RoundDir::Up);
}

// Owns an EcoState and its receipt journal. One mutator at a time.
class Organization {
public:
    explicit Organization(EcoState genesis_state) : genesis_(genesis_state), state_(std::move(genesis_state)) {}

    const Receipt& mint(const Dec& m, const Dec& a) { return apply(eco::mint(state_, m, a)); }
    const Receipt& burn(const Dec& x) { return apply(eco::burn(state_, x)); }

    const EcoState& state() const { return state_; }
    const EcoState& genesis_state() const { return genesis_; }
    const std::vector<Receipt>& receipts() const { return receipts_; }

private:
    const Receipt& apply(Transition t) {
        state_ = std::move(t.state);
        receipts_.push_back(std::move(t.receipt));
        return receipts_.back();
    }

    EcoState genesis_;
    EcoState state_;
    std::vector<Receipt> receipts_;
};

} // namespace eco
