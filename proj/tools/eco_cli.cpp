// eco: quote trades, plot curves, run scenarios, replay journals, analyze logs.
//
// Exit codes: 0 success, 1 domain or data error, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eco/agents.hpp"
#include "eco/analytics.hpp"
#include "eco/curves.hpp"
#include "eco/exchange.hpp"
#include "eco/journal.hpp"
#include "eco/organization.hpp"

namespace {

using eco::Dec;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

Dec flag_dec(const std::string& name, const std::string& text) {
    try {
        return Dec::parse(text);
    } catch (const eco::Error&) {
        throw CLI::ValidationError(name, "not a decimal: '" + text + "'");
    }
}

std::vector<Dec> flag_dec_list(const std::string& name, const std::string& text) {
    std::vector<Dec> out;
    for (const auto& item : eco::detail::split(text, ',')) out.push_back(flag_dec(name, item));
    if (out.empty()) throw CLI::ValidationError(name, "empty list");
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw eco::Error(eco::Errc::Io, "cannot write '" + path + "'");
    return os;
}

void print_state(std::ostream& os, const eco::EcoState& st) {
    os << "s = " << st.s << '\n'
       << "r = " << st.r << '\n'
       << "a_bar = " << st.a_bar << '\n'
       << "seq = " << st.seq << '\n'
       << "spot = " << eco::spot_price(st) << '\n'
       << "solvency_ratio = " << eco::solvency_ratio(st) << '\n';
}

// ---------------------------------------------------------------------------

struct QuoteArgs {
    std::string k = "1", tau, a, s, m, x;
};

void cmd_quote(const std::string& side, const QuoteArgs& q) {
    const auto curve = eco::LinearBondingCurve::make(flag_dec("--k", q.k));
    const auto params = eco::AllocativeParams::make(flag_dec("--a", q.a), flag_dec("--tau", q.tau));
    const Dec s = flag_dec("--s", q.s);
    if (side == "mint") {
        const Dec m = flag_dec("--m", q.m);
        const eco::Quote exact = eco::quote_mint(curve, params, s, m);
        const eco::Quote lower = eco::quote_mint_lower(curve, params, s, m);
        std::cout << "kind = mint\n"
                  << "m = " << m << '\n'
                  << "x = " << exact.x << '\n'
                  << "x_lower_bound = " << lower.x << '\n';
    } else {
        const Dec x = flag_dec("--x", q.x);
        const eco::Quote exact = eco::quote_burn(curve, params, s, x);
        const eco::Quote lower = eco::quote_burn_lower(curve, params, s, x);
        std::cout << "kind = burn\n"
                  << "x = " << x << '\n'
                  << "reward = " << -exact.m << '\n'
                  << "reward_lower_bound = " << -lower.m << '\n';
    }
}

// ---------------------------------------------------------------------------

struct PlotSpec {
    Dec k{1};
    std::vector<Dec> a;
    std::vector<Dec> tau;
    Dec S{10};
    std::size_t samples{201};
    std::string out = "curves";

    void validate() const {
        if (!S.is_positive()) throw eco::Error(eco::Errc::InvalidParams, "S must be positive");
        if (samples < 2) throw eco::Error(eco::Errc::InvalidParams, "samples must be at least 2");
        if (a.size() != tau.size() && a.size() != 1 && tau.size() != 1) {
            throw eco::Error(eco::Errc::InvalidParams, "--a and --tau lists must match or one must be a single value");
        }
    }

    std::size_t curves() const { return std::max(a.size(), tau.size()); }
    eco::AllocativeParams params(std::size_t i) const {
        return eco::AllocativeParams::make(a[a.size() == 1 ? 0 : i], tau[tau.size() == 1 ? 0 : i]);
    }
};

void cmd_plot(const PlotSpec& spec) {
    spec.validate();
    const auto curve = eco::LinearBondingCurve::make(spec.k);
    const std::size_t n = spec.curves();
    std::vector<eco::AllocativeParams> params;
    std::vector<Dec> sups;
    for (std::size_t i = 0; i < n; ++i) {
        params.push_back(spec.params(i));
        sups.push_back(eco::allocative_sup(params.back()));
    }

    std::vector<Dec> xs, ps;
    std::vector<std::vector<Dec>> qs(n);
    for (std::size_t j = 0; j < spec.samples; ++j) {
        const Dec s = eco::detail::grid_point(spec.S, j, spec.samples);
        xs.push_back(s);
        ps.push_back(eco::price_bonding(curve, s));
        for (std::size_t i = 0; i < n; ++i) qs[i].push_back(eco::price_allocative(curve, params[i], s));
    }

    auto csv = open_out(spec.out + ".csv");
    csv << "s,p";
    for (std::size_t i = 0; i < n; ++i) csv << ",q" << i + 1;
    for (std::size_t i = 0; i < n; ++i) csv << ",sup" << i + 1;
    csv << '\n';
    for (std::size_t j = 0; j < xs.size(); ++j) {
        csv << xs[j] << ',' << ps[j];
        for (std::size_t i = 0; i < n; ++i) csv << ',' << qs[i][j];
        for (std::size_t i = 0; i < n; ++i) csv << ',' << sups[i];
        csv << '\n';
    }

    // Rendering only; the CSV carries the exact values.
    constexpr double W = 640, H = 400, pad = 40;
    double ymax = 0;
    for (const auto& v : sups) ymax = std::max(ymax, v.to_double());
    ymax *= 1.25;
    const double xmax = spec.S.to_double();
    auto px = [&](const Dec& s) { return pad + (W - 2 * pad) * s.to_double() / xmax; };
    auto py = [&](const Dec& v) { return H - pad - (H - 2 * pad) * std::min(v.to_double(), ymax) / ymax; };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    auto svg = open_out(spec.out + ".svg");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
        << W << ' ' << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
        << "\" stroke=\"black\"/>\n";
    auto polyline = [&](const std::vector<Dec>& ys, const char* color, const char* dash) {
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
        svg << " points=\"";
        for (std::size_t j = 0; j < xs.size(); ++j) svg << (j ? " " : "") << px(xs[j]) << ',' << py(ys[j]);
        svg << "\"/>\n";
    };
    polyline(ps, "black", "");
    for (std::size_t i = 0; i < n; ++i) {
        const char* color = colors[i % 6];
        polyline(qs[i], color, "");
        svg << "<line x1=\"" << pad << "\" y1=\"" << py(sups[i]) << "\" x2=\"" << W - pad << "\" y2=\""
            << py(sups[i]) << "\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\"/>\n"
            << "<text x=\"" << W - pad + 2 << "\" y=\"" << py(sups[i]) << "\" font-size=\"10\" fill=\"" << color
            << "\">a=" << params[i].a.str_short() << " tau=" << params[i].tau.str_short() << "</text>\n";
    }
    svg << "<text x=\"" << pad << "\" y=\"" << pad - 8 << "\" font-size=\"11\">p(s) = "
        << spec.k.str_short() << " s (black), q(s) per (a, tau), dashed: a + (1-tau)/tau</text>\n"
        << "</svg>\n";

    std::cout << "wrote " << spec.out << ".csv and " << spec.out << ".svg\n";
    for (std::size_t i = 0; i < n; ++i) {
        std::cout << "q" << i + 1 << ": a = " << params[i].a << ", tau = " << params[i].tau << ", sup = " << sups[i]
                  << '\n';
    }
}

// ---------------------------------------------------------------------------

struct SimArgs {
    std::string scenario, trace, journal, tx, org_id = "org";
    std::int64_t publication_time = 0;
    std::int64_t step_seconds = 60;
};

void cmd_sim(const SimArgs& args) {
    const eco::Scenario sc = eco::load_scenario(args.scenario);
    const eco::TraceLog log = eco::run(sc);
    if (!args.trace.empty()) {
        auto os = open_out(args.trace);
        eco::write_trace_csv(os, log);
    }
    if (!args.journal.empty()) {
        auto os = open_out(args.journal);
        eco::write_trace_journal(os, log);
    }
    if (!args.tx.empty()) {
        auto os = open_out(args.tx);
        eco::write_tx_csv(os, eco::trace_to_tx(log, eco::OrgMeta{args.org_id, args.publication_time},
                                               args.step_seconds));
    }
    std::cout << "scenario = " << sc.name << '\n';
    for (const auto& e : log.entries) {
        if (!e.receipt) std::cout << "step " << e.step << ' ' << e.agent << ": " << e.note << '\n';
    }
    std::cout << "agent,cash,holdings,paid,received,realized_pnl,unrealized_pnl\n";
    for (const auto& b : log.final_books) {
        std::cout << b.id << ',' << b.cash << ',' << b.holdings << ',' << b.paid << ',' << b.received << ','
                  << b.realized << ',' << b.unrealized << '\n';
    }
    print_state(std::cout, log.final_state);
}

void cmd_replay(const std::string& path) {
    const eco::ReplayResult res = eco::replay_journal_file(path);
    std::cout << "records = " << res.receipts.size() << '\n';
    print_state(std::cout, res.final_state);
}

void cmd_analyze(const std::string& tx_path, const std::string& org_path, std::int64_t window) {
    const auto txs = eco::load_csv(tx_path);
    const auto orgs = eco::load_org_csv(org_path);
    for (const auto& r : txs.rejects) std::cerr << tx_path << ":" << r.line << ": rejected: " << r.reason << '\n';
    for (const auto& r : orgs.rejects) std::cerr << org_path << ":" << r.line << ": rejected: " << r.reason << '\n';
    const eco::FlowSummary summary = eco::summarize(txs.records, orgs.records, window);
    for (const auto& r : summary.rejects) std::cerr << "record " << r.line << ": rejected: " << r.reason << '\n';
    for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
    eco::write_summary(std::cout, summary);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equitable continuous organization toolkit"};
    app.require_subcommand(1);

    QuoteArgs qa;
    std::string side;
    auto* quote = app.add_subcommand("quote", "Quote a mint or burn on the allocative curve");
    quote->add_option("side", side, "mint or burn")->required()->check(CLI::IsMember({"mint", "burn"}));
    quote->add_option("--k", qa.k, "bonding slope")->capture_default_str();
    quote->add_option("--tau", qa.tau, "tax rate in (0,1)")->required();
    quote->add_option("--a", qa.a, "aggregate assessment")->required();
    quote->add_option("--s", qa.s, "current supply")->required();
    quote->add_option("--m", qa.m, "payment (mint)");
    quote->add_option("--x", qa.x, "tokens, negative (burn)");

    PlotSpec ps;
    std::string plot_k = "1", plot_a = "2", plot_tau = "0.5", plot_S = "10";
    auto* plot = app.add_subcommand("plot", "Write CSV and SVG of p and q curves");
    plot->add_option("--k", plot_k, "bonding slope")->capture_default_str();
    plot->add_option("--a", plot_a, "assessment or comma list")->capture_default_str();
    plot->add_option("--tau", plot_tau, "tax rate or comma list")->capture_default_str();
    plot->add_option("--S", plot_S, "supply range upper end")->capture_default_str();
    plot->add_option("--samples", ps.samples, "sample count")->capture_default_str();
    plot->add_option("--out", ps.out, "output stem (writes <out>.csv and <out>.svg)")->capture_default_str();

    SimArgs sa;
    auto* sim = app.add_subcommand("sim", "Run a scenario file");
    sim->add_option("scenario", sa.scenario, "scenario file")->required();
    sim->add_option("--trace", sa.trace, "write trace CSV");
    sim->add_option("--journal", sa.journal, "write receipt journal");
    sim->add_option("--tx", sa.tx, "write transaction-log CSV");
    sim->add_option("--org-id", sa.org_id, "org id for --tx")->capture_default_str();
    sim->add_option("--publication-time", sa.publication_time, "publication time for --tx")->capture_default_str();
    sim->add_option("--step-seconds", sa.step_seconds, "seconds per step for --tx")->capture_default_str();

    std::string journal_path;
    auto* replay = app.add_subcommand("replay", "Re-execute a receipt journal");
    replay->add_option("journal", journal_path, "journal file")->required();

    std::string tx_path, org_path;
    std::int64_t window = eco::kDefaultWindowSeconds;
    auto* analyze = app.add_subcommand("analyze", "Classify and total a transaction log");
    analyze->add_option("tx_csv", tx_path, "transactions CSV")->required();
    analyze->add_option("org_csv", org_path, "org metadata CSV")->required();
    analyze->add_option("--window", window, "speculator window in seconds")->capture_default_str()->check(
        CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
        if (*quote) {
            if (side == "mint" && qa.m.empty()) throw CLI::RequiredError("--m");
            if (side == "burn" && qa.x.empty()) throw CLI::RequiredError("--x");
        }
        if (*plot) {
            ps.k = flag_dec("--k", plot_k);
            ps.a = flag_dec_list("--a", plot_a);
            ps.tau = flag_dec_list("--tau", plot_tau);
            ps.S = flag_dec("--S", plot_S);
        }
        if (*quote) cmd_quote(side, qa);
        if (*plot) cmd_plot(ps);
        if (*sim) cmd_sim(sa);
        if (*replay) cmd_replay(journal_path);
        if (*analyze) cmd_analyze(tx_path, org_path, window);
    } catch (const CLI::ParseError& e) {
        // Malformed flag values surface here as well as from parse().
        return app.exit(e) == 0 ? 0 : kExitUsage;
    } catch (const eco::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
