#pragma once

// Deterministic agent scenarios on a single organization.
//
// Steps execute in order. Within a step: scalper entries and sandwich
// front-runs, then the scheduled action, then sandwich back-runs and scalper
// exits. Actions an agent cannot afford (or the organization rejects) are
// skipped and logged; they never abort the run.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "eco/dec.hpp"
#include "eco/error.hpp"
#include "eco/exchange.hpp"
#include "eco/journal.hpp"
#include "eco/organization.hpp"

namespace eco {

// How an agent picks the assessment it submits with a mint.
struct AssessmentPolicy {
    enum class Kind { Fixed, Ratio, Valuation, Random };
    Kind kind{Kind::Ratio};
    Dec value{1}; // Fixed: the assessment; Ratio: multiple of the current a_bar; Random: lower end
    Dec upper;    // Random: upper end

    static AssessmentPolicy fixed(const Dec& v) { return {Kind::Fixed, v, {}}; }
    static AssessmentPolicy ratio(const Dec& r) { return {Kind::Ratio, r, {}}; }
    static AssessmentPolicy valuation() { return {Kind::Valuation, {}, {}}; }
    static AssessmentPolicy random(const Dec& lo, const Dec& hi) { return {Kind::Random, lo, hi}; }

    friend bool operator==(const AssessmentPolicy&, const AssessmentPolicy&) = default;
};

inline std::string format_policy(const AssessmentPolicy& p) {
    switch (p.kind) {
    case AssessmentPolicy::Kind::Fixed: return "fixed:" + p.value.str_short();
    case AssessmentPolicy::Kind::Ratio: return p.value == Dec(1) ? "abar" : "ratio:" + p.value.str_short();
    case AssessmentPolicy::Kind::Valuation: return "valuation";
    case AssessmentPolicy::Kind::Random: return "random:" + p.value.str_short() + ":" + p.upper.str_short();
    }
    return "?";
}

inline AssessmentPolicy parse_policy(const std::string& text) {
    if (text == "abar") return AssessmentPolicy::ratio(Dec(1));
    if (text == "valuation") return AssessmentPolicy::valuation();
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "fixed") return AssessmentPolicy::fixed(Dec::parse(rest));
    if (head == "ratio") return AssessmentPolicy::ratio(Dec::parse(rest));
    if (head == "random") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw Error(Errc::Parse, "random policy needs random:<lo>:<hi>");
        return AssessmentPolicy::random(Dec::parse(rest.substr(0, c2)), Dec::parse(rest.substr(c2 + 1)));
    }
    throw Error(Errc::Parse, "unknown assessment policy '" + text + "'");
}

struct Investor {
    Dec valuation; // v, per-token
    friend bool operator==(const Investor&, const Investor&) = default;
};

struct Scalper {
    std::uint64_t entry_step{0};
    // Exit after the next successful mint by another agent, or at a fixed step.
    std::optional<std::uint64_t> exit_step;
    friend bool operator==(const Scalper&, const Scalper&) = default;
};

struct Sandwicher {
    std::uint64_t victim_step{0};
    Dec front_amount;
    friend bool operator==(const Sandwicher&, const Sandwicher&) = default;
};

struct AgentSpec {
    std::string id;
    std::variant<Investor, Scalper, Sandwicher> kind;
    Dec budget;
    AssessmentPolicy assessment{AssessmentPolicy::ratio(Dec(1))};

    friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct Action {
    enum class Kind { Mint, Burn, BurnAll };
    std::uint64_t step{0};
    std::string agent;
    Kind kind{Kind::Mint};
    Dec amount; // payment for Mint, tokens (positive) for Burn
    AssessmentPolicy assessment{AssessmentPolicy::ratio(Dec(1))};

    friend bool operator==(const Action&, const Action&) = default;
};

struct EcoSetup {
    Dec k{1};
    Dec tau = Dec::parse("0.5");
    VotingConfig voting{Dec::parse("0.5"), Dec::parse("0.4"), Weighting::EqualPerTransaction, true};
    Dec a_bar0{2};
    bool solvency_guard{false};

    EcoState genesis_state() const { return genesis(k, tau, voting, a_bar0, solvency_guard); }
    friend bool operator==(const EcoSetup&, const EcoSetup&) = default;
};

struct Scenario {
    std::string name;
    EcoSetup eco;
    std::vector<AgentSpec> agents;
    std::vector<Action> schedule;
    std::uint64_t rng_seed{0};

    const AgentSpec* find_agent(const std::string& id) const {
        for (const auto& a : agents)
            if (a.id == id) return &a;
        return nullptr;
    }

    void validate() const {
        eco.genesis_state();
        std::set<std::string> ids;
        for (const auto& a : agents) {
            if (a.id.empty() || a.id.find(',') != std::string::npos) {
                throw Error(Errc::InvalidParams, "agent ids must be non-empty and comma-free");
            }
            if (!ids.insert(a.id).second) throw Error(Errc::InvalidParams, "duplicate agent '" + a.id + "'");
            if (a.budget.is_negative()) throw Error(Errc::InvalidParams, "agent '" + a.id + "' has negative budget");
            if (const auto* inv = std::get_if<Investor>(&a.kind); inv && !inv->valuation.is_positive()) {
                throw Error(Errc::InvalidParams, "investor '" + a.id + "' needs valuation > 0");
            }
        }
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            if (i > 0 && schedule[i].step <= schedule[i - 1].step) {
                throw Error(Errc::InvalidParams, "schedule must be strictly ordered by step");
            }
            if (!ids.count(schedule[i].agent)) {
                throw Error(Errc::InvalidParams, "schedule names unknown agent '" + schedule[i].agent + "'");
            }
        }
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct AgentBook {
    std::string id;
    Dec cash;       // budget - payments + rewards
    Dec holdings;   // tokens
    Dec paid;       // cumulative payments
    Dec received;   // cumulative rewards
    Dec cost_basis; // average-cost basis of current holdings
    Dec realized;   // rewards minus basis of tokens burned
    Dec unrealized; // exit value of holdings minus their basis

    Dec total_pnl() const { return realized + unrealized; }
};

struct TraceEntry {
    std::uint64_t step{0};
    std::string agent;
    std::optional<Receipt> receipt; // empty when the action was skipped
    std::string note;
    std::vector<AgentBook> books; // every agent, after this entry
};

struct TraceLog {
    std::string scenario;
    EcoState genesis_state;
    EcoState final_state;
    std::vector<TraceEntry> entries;
    std::vector<AgentBook> final_books;

    const AgentBook& book(const std::string& id) const {
        for (const auto& b : final_books)
            if (b.id == id) return b;
        throw Error(Errc::InvalidParams, "no agent '" + id + "' in trace");
    }

    std::vector<Receipt> receipts() const {
        std::vector<Receipt> out;
        for (const auto& e : entries)
            if (e.receipt) out.push_back(*e.receipt);
        return out;
    }
};

// v * tokens - paid
inline Dec investor_utility(const Dec& v, const Dec& tokens, const Dec& paid) {
    if (tokens.is_negative()) {
        throw Error(Errc::Domain, "tokens must be nonnegative");
    }
    return mul(v, tokens, RoundDir::Nearest) - paid;
}

namespace detail {

class ScenarioEngine {
public:
    explicit ScenarioEngine(const Scenario& sc)
        : sc_(sc), org_(sc.eco.genesis_state()), rng_(sc.rng_seed) {
        for (const auto& a : sc.agents) {
            AgentBook b;
            b.id = a.id;
            b.cash = a.budget;
            books_.push_back(b);
        }
    }

    TraceLog run() {
        std::set<std::uint64_t> steps;
        for (const auto& act : sc_.schedule) steps.insert(act.step);
        for (const auto& a : sc_.agents) {
            if (const auto* sp = std::get_if<Scalper>(&a.kind)) {
                steps.insert(sp->entry_step);
                if (sp->exit_step) steps.insert(*sp->exit_step);
            }
            if (const auto* sw = std::get_if<Sandwicher>(&a.kind)) steps.insert(sw->victim_step);
        }
        auto next_action = sc_.schedule.begin();
        for (std::uint64_t step : steps) {
            for (const auto& a : sc_.agents) {
                if (const auto* sp = std::get_if<Scalper>(&a.kind); sp && sp->entry_step == step) {
                    do_mint(step, a, book(a.id).cash, a.assessment, "scalper entry");
                    scalper_open_[a.id] = true;
                }
                if (const auto* sw = std::get_if<Sandwicher>(&a.kind); sw && sw->victim_step == step) {
                    do_mint(step, a, sw->front_amount, a.assessment, "front-run");
                }
            }
            bool foreign_mint = false;
            std::string actor;
            if (next_action != sc_.schedule.end() && next_action->step == step) {
                const Action& act = *next_action++;
                const AgentSpec& who = *sc_.find_agent(act.agent);
                actor = who.id;
                if (act.kind == Action::Kind::Mint) {
                    foreign_mint = do_mint(step, who, act.amount, act.assessment, "");
                } else if (act.kind == Action::Kind::Burn) {
                    do_burn(step, who, act.amount, "");
                } else {
                    do_burn(step, who, book(who.id).holdings, "");
                }
            }
            for (const auto& a : sc_.agents) {
                if (const auto* sw = std::get_if<Sandwicher>(&a.kind); sw && sw->victim_step == step) {
                    do_burn(step, a, book(a.id).holdings, "back-run");
                }
                if (const auto* sp = std::get_if<Scalper>(&a.kind); sp && scalper_open_[a.id]) {
                    const bool trigger = sp->exit_step ? *sp->exit_step == step
                                                       : (foreign_mint && actor != a.id && step > sp->entry_step);
                    if (trigger) {
                        do_burn(step, a, book(a.id).holdings, "scalper exit");
                        scalper_open_[a.id] = false;
                    }
                }
            }
        }
        TraceLog log;
        log.scenario = sc_.name;
        log.genesis_state = org_.genesis_state();
        log.final_state = org_.state();
        log.entries = std::move(entries_);
        mark_to_market();
        log.final_books = books_;
        return log;
    }

private:
    AgentBook& book(const std::string& id) {
        for (auto& b : books_)
            if (b.id == id) return b;
        throw Error(Errc::InvalidParams, "unknown agent '" + id + "'");
    }

    Dec pick_assessment(const AgentSpec& who, const AssessmentPolicy& policy) {
        switch (policy.kind) {
        case AssessmentPolicy::Kind::Fixed: return policy.value;
        case AssessmentPolicy::Kind::Ratio: return mul(org_.state().a_bar, policy.value, RoundDir::Nearest);
        case AssessmentPolicy::Kind::Valuation:
            if (const auto* inv = std::get_if<Investor>(&who.kind)) return inv->valuation;
            return org_.state().a_bar;
        case AssessmentPolicy::Kind::Random: {
            const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
            return policy.value + mul(policy.upper - policy.value, Dec::from_double(u), RoundDir::Nearest);
        }
        }
        return org_.state().a_bar;
    }

    bool do_mint(std::uint64_t step, const AgentSpec& who, const Dec m, const AssessmentPolicy& policy,
                 const std::string& note) {
        AgentBook& b = book(who.id);
        if (m > b.cash) {
            skip(step, who.id, "skipped mint " + m.str() + ": budget exceeded");
            return false;
        }
        const Dec a = max(pick_assessment(who, policy), Dec{});
        try {
            const Receipt& rc = org_.mint(m, a);
            b.cash -= m;
            b.paid += m;
            b.holdings += rc.x;
            b.cost_basis += m;
            record(step, who.id, rc, note);
            return true;
        } catch (const Error& e) {
            skip(step, who.id, std::string("skipped mint: ") + e.what());
            return false;
        }
    }

    void do_burn(std::uint64_t step, const AgentSpec& who, const Dec tokens, const std::string& note) {
        AgentBook& b = book(who.id);
        if (!tokens.is_positive()) {
            if (!note.empty()) skip(step, who.id, "skipped " + note + ": no holdings");
            return;
        }
        if (tokens > b.holdings) {
            skip(step, who.id, "skipped burn " + tokens.str() + ": exceeds holdings");
            return;
        }
        try {
            const Receipt& rc = org_.burn(-tokens);
            const Dec reward = -rc.m;
            const Dec basis = tokens == b.holdings ? b.cost_basis
                                                   : div(mul(b.cost_basis, tokens, RoundDir::Nearest), b.holdings,
                                                         RoundDir::Nearest);
            b.cash += reward;
            b.received += reward;
            b.holdings -= tokens;
            b.cost_basis -= basis;
            b.realized += reward - basis;
            record(step, who.id, rc, note);
        } catch (const Error& e) {
            skip(step, who.id, std::string("skipped burn: ") + e.what());
        }
    }

    // Unrealized PnL at exit value: the reward for burning the whole position now.
    void mark_to_market() {
        const EcoState& st = org_.state();
        for (auto& b : books_) {
            Dec exit_value;
            if (b.holdings.is_positive()) {
                exit_value = -burn_reward_exact(st.curve(), st.params(), st.s, -b.holdings);
            }
            b.unrealized = exit_value - b.cost_basis;
        }
    }

    void record(std::uint64_t step, const std::string& id, const Receipt& rc, const std::string& note) {
        mark_to_market();
        entries_.push_back(TraceEntry{step, id, rc, note, books_});
    }

    void skip(std::uint64_t step, const std::string& id, const std::string& note) {
        mark_to_market();
        entries_.push_back(TraceEntry{step, id, std::nullopt, note, books_});
    }

    const Scenario& sc_;
    Organization org_;
    std::mt19937_64 rng_;
    std::vector<AgentBook> books_;
    std::vector<TraceEntry> entries_;
    std::map<std::string, bool> scalper_open_;
};

} // namespace detail

inline TraceLog run(const Scenario& scenario) {
    scenario.validate();
    return detail::ScenarioEngine(scenario).run();
}

// ---------------------------------------------------------------------------
// Packaged scenarios

// Plain linear curve: tau tiny and the assessment frozen, so q ~ p.
inline EcoSetup plain_curve_setup(const Dec& k) {
    EcoSetup eco;
    eco.k = k;
    eco.tau = Dec::parse("0.000000000001");
    eco.voting = VotingConfig{Dec::parse("0.5"), Dec::parse("0.4"), Weighting::EqualPerTransaction, false};
    eco.a_bar0 = Dec(1);
    return eco;
}

// A bot enters at zero supply, one investor follows, the bot sells right after.
inline Scenario scenario_scalper_plain_curve() {
    Scenario sc;
    sc.name = "fig5_scalper";
    sc.eco = plain_curve_setup(Dec(1));
    sc.agents.push_back(AgentSpec{"scalper", Scalper{1, std::nullopt}, Dec(1), AssessmentPolicy::ratio(Dec(1))});
    sc.agents.push_back(
        AgentSpec{"investor", Investor{Dec(3)}, Dec(10), AssessmentPolicy::ratio(Dec(1))});
    sc.schedule.push_back(Action{2, "investor", Action::Kind::Mint, Dec(10), AssessmentPolicy::ratio(Dec(1))});
    return sc;
}

// Setup used by the packaged sandwich: tau = 0.7, theta = 0.5, c = 0.4.
inline EcoSetup sandwich_setup() {
    EcoSetup eco;
    eco.k = Dec::parse("0.4");
    eco.tau = Dec::parse("0.7");
    eco.voting = VotingConfig{Dec::parse("0.5"), Dec::parse("0.4"), Weighting::EqualPerTransaction, true};
    eco.a_bar0 = Dec::parse("2.5");
    return eco;
}

// Sandwich around a victim whose vote moves a_bar to `ratio` * a_bar. With
// equal weighting the victim submits a = a_bar * (ratio - 1 + theta)/theta.
inline Scenario scenario_sandwich(const EcoSetup& eco, const Dec& victim_assessment_ratio) {
    Scenario sc;
    sc.name = "sandwich";
    sc.eco = eco;
    const Dec& theta = eco.voting.theta_avg;
    const Dec factor =
        max(Dec{}, div(victim_assessment_ratio - Dec(1) + theta, theta, RoundDir::Nearest));
    sc.agents.push_back(AgentSpec{"holder", Investor{Dec(3)}, Dec(20), AssessmentPolicy::ratio(Dec(1))});
    sc.agents.push_back(
        AgentSpec{"sandwicher", Sandwicher{2, Dec(2)}, Dec(2), AssessmentPolicy::ratio(Dec(1))});
    sc.agents.push_back(AgentSpec{"victim", Investor{Dec(3)}, Dec(5), AssessmentPolicy::ratio(factor)});
    sc.schedule.push_back(Action{1, "holder", Action::Kind::Mint, Dec(8), AssessmentPolicy::ratio(Dec(1))});
    sc.schedule.push_back(Action{2, "victim", Action::Kind::Mint, Dec(5), AssessmentPolicy::ratio(factor)});
    return sc;
}

inline Scenario scenario_fig4_sandwich() {
    Scenario sc = scenario_sandwich(sandwich_setup(), div(Dec(2), Dec(3), RoundDir::Nearest));
    sc.name = "fig4_sandwich";
    return sc;
}

// Same trades with the assessment frozen on a plain curve.
inline Scenario scenario_fig4_plain() {
    EcoSetup eco = plain_curve_setup(Dec::parse("0.4"));
    Scenario sc = scenario_sandwich(eco, Dec(1));
    sc.name = "fig4_plain";
    return sc;
}

// ---------------------------------------------------------------------------
// Scenario files
//
//   name = fig4_sandwich
//   k = 0.4
//   tau = 0.7
//   theta = 0.5
//   c = 0.4
//   weighting = equal
//   voting = on
//   guard = off
//   a_bar0 = 2.5
//   seed = 0
//   agent holder investor budget=20 valuation=3 assess=abar
//   agent bot scalper budget=1 entry=1 [exit=<step>] assess=abar
//   agent sw sandwicher budget=2 victim=2 front=2 assess=abar
//   at 1 holder mint 8 assess=abar
//   at 3 holder burn 1.5          (or: burn all)

inline std::string format_scenario(const Scenario& sc) {
    std::ostringstream os;
    os << "name = " << sc.name << '\n'
       << "k = " << sc.eco.k.str_short() << '\n'
       << "tau = " << sc.eco.tau.str_short() << '\n'
       << "theta = " << sc.eco.voting.theta_avg.str_short() << '\n'
       << "c = " << sc.eco.voting.c.str_short() << '\n'
       << "weighting = " << weighting_name(sc.eco.voting.weighting) << '\n'
       << "voting = " << (sc.eco.voting.enabled ? "on" : "off") << '\n'
       << "guard = " << (sc.eco.solvency_guard ? "on" : "off") << '\n'
       << "a_bar0 = " << sc.eco.a_bar0.str_short() << '\n'
       << "seed = " << sc.rng_seed << "\n\n";
    for (const auto& a : sc.agents) {
        os << "agent " << a.id << ' ';
        if (const auto* inv = std::get_if<Investor>(&a.kind)) {
            os << "investor budget=" << a.budget.str_short() << " valuation=" << inv->valuation.str_short();
        } else if (const auto* sp = std::get_if<Scalper>(&a.kind)) {
            os << "scalper budget=" << a.budget.str_short() << " entry=" << sp->entry_step;
            if (sp->exit_step) os << " exit=" << *sp->exit_step;
        } else {
            const auto& sw = std::get<Sandwicher>(a.kind);
            os << "sandwicher budget=" << a.budget.str_short() << " victim=" << sw.victim_step
               << " front=" << sw.front_amount.str_short();
        }
        os << " assess=" << format_policy(a.assessment) << '\n';
    }
    os << '\n';
    for (const auto& act : sc.schedule) {
        os << "at " << act.step << ' ' << act.agent << ' ';
        switch (act.kind) {
        case Action::Kind::Mint:
            os << "mint " << act.amount.str_short() << " assess=" << format_policy(act.assessment);
            break;
        case Action::Kind::Burn: os << "burn " << act.amount.str_short(); break;
        case Action::Kind::BurnAll: os << "burn all"; break;
        }
        os << '\n';
    }
    return os.str();
}

inline Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        return Error(Errc::Parse, "scenario line " + std::to_string(line_no) + ": " + why);
    };
    auto to_step = [&](const std::string& t) -> std::uint64_t {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(t, &used);
            if (used != t.size()) throw fail("bad step '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            throw fail("bad step '" + t + "'");
        }
    };
    auto on_off = [&](const std::string& v) {
        if (v == "on") return true;
        if (v == "off") return false;
        throw fail("expected on|off, got '" + v + "'");
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string t; words >> t;) w.push_back(t);
        if (w.empty()) continue;
        try {
            if (w.size() == 3 && w[1] == "=") {
                const std::string& key = w[0];
                const std::string& v = w[2];
                if (key == "name") sc.name = v;
                else if (key == "k") sc.eco.k = Dec::parse(v);
                else if (key == "tau") sc.eco.tau = Dec::parse(v);
                else if (key == "theta") sc.eco.voting.theta_avg = Dec::parse(v);
                else if (key == "c") sc.eco.voting.c = Dec::parse(v);
                else if (key == "weighting") sc.eco.voting.weighting = parse_weighting(v);
                else if (key == "voting") sc.eco.voting.enabled = on_off(v);
                else if (key == "guard") sc.eco.solvency_guard = on_off(v);
                else if (key == "a_bar0") sc.eco.a_bar0 = Dec::parse(v);
                else if (key == "seed") sc.rng_seed = to_step(v);
                else throw fail("unknown key '" + key + "'");
                continue;
            }
            if (w[0] == "agent" && w.size() >= 3) {
                AgentSpec a;
                a.id = w[1];
                std::map<std::string, std::string> kv;
                for (std::size_t i = 3; i < w.size(); ++i) {
                    const auto eq = w[i].find('=');
                    if (eq == std::string::npos) throw fail("expected key=value, got '" + w[i] + "'");
                    kv[w[i].substr(0, eq)] = w[i].substr(eq + 1);
                }
                auto take = [&](const char* key) {
                    auto it = kv.find(key);
                    if (it == kv.end()) throw fail(std::string("agent needs ") + key);
                    std::string v = it->second;
                    kv.erase(it);
                    return v;
                };
                a.budget = Dec::parse(take("budget"));
                if (kv.count("assess")) a.assessment = parse_policy(take("assess"));
                if (w[2] == "investor") {
                    a.kind = Investor{Dec::parse(take("valuation"))};
                } else if (w[2] == "scalper") {
                    Scalper sp{to_step(take("entry")), std::nullopt};
                    if (kv.count("exit")) sp.exit_step = to_step(take("exit"));
                    a.kind = sp;
                } else if (w[2] == "sandwicher") {
                    a.kind = Sandwicher{to_step(take("victim")), Dec::parse(take("front"))};
                } else {
                    throw fail("unknown agent kind '" + w[2] + "'");
                }
                if (!kv.empty()) throw fail("unknown agent field '" + kv.begin()->first + "'");
                sc.agents.push_back(a);
                continue;
            }
            if (w[0] == "at" && w.size() >= 5) {
                Action act;
                act.step = to_step(w[1]);
                act.agent = w[2];
                if (w[3] == "mint") {
                    act.kind = Action::Kind::Mint;
                    act.amount = Dec::parse(w[4]);
                    for (std::size_t i = 5; i < w.size(); ++i) {
                        if (w[i].rfind("assess=", 0) == 0) act.assessment = parse_policy(w[i].substr(7));
                        else throw fail("unexpected '" + w[i] + "'");
                    }
                } else if (w[3] == "burn" && w.size() == 5) {
                    if (w[4] == "all") {
                        act.kind = Action::Kind::BurnAll;
                    } else {
                        act.kind = Action::Kind::Burn;
                        act.amount = Dec::parse(w[4]);
                    }
                } else {
                    throw fail("unknown action '" + w[3] + "'");
                }
                sc.schedule.push_back(act);
                continue;
            }
            throw fail("unrecognized line");
        } catch (const Error& e) {
            if (e.code() == Errc::Parse && e.message().rfind("scenario line", 0) == 0) throw;
            throw fail(e.context());
        }
    }
    try {
        sc.validate();
    } catch (const Error& e) {
        throw Error(Errc::Parse, std::string("invalid scenario: ") + e.what());
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open scenario '" + path + "'");
    }
    return parse_scenario(in);
}

// ---------------------------------------------------------------------------
// Exports

inline constexpr const char* kTraceHeader =
    "step,agent,note,seq,kind,m,x,a,a_bar_before,a_bar_after,s_after,r_after,realized_pnl,unrealized_pnl";

inline void write_trace_csv(std::ostream& os, const TraceLog& log) {
    os << kTraceHeader << '\n';
    for (const auto& e : log.entries) {
        const AgentBook* b = nullptr;
        for (const auto& bk : e.books)
            if (bk.id == e.agent) b = &bk;
        std::string note = e.note;
        std::replace(note.begin(), note.end(), ',', ';');
        os << e.step << ',' << e.agent << ',' << note << ',';
        if (e.receipt) {
            os << receipt_line(*e.receipt);
        } else {
            os << ",skipped,,,,,,,";
        }
        os << ',' << (b ? b->realized.str() : "") << ',' << (b ? b->unrealized.str() : "") << '\n';
    }
}

// Receipt journal for the organization the scenario drove.
inline void write_trace_journal(std::ostream& os, const TraceLog& log) {
    write_journal(os, log.genesis_state, log.receipts());
}

} // namespace eco
