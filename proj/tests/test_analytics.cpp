#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "eco/analytics.hpp"
#include "support.hpp"

using namespace eco;
using eco::test::data_path;

namespace {

Dec D(const char* s) { return Dec::parse(s); }

TxRecord tx(std::int64_t t, const std::string& account, TxKind kind = TxKind::Mint, const char* money = "1") {
    return TxRecord{t, "org", account, kind, D(money), Dec(1)};
}

Loaded<TxRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_tx_csv(in);
}

} // namespace

TEST(Analytics, ClassifyBoundaries) {
    const OrgMeta meta{"org", 1000};
    for (const auto& [dt, want] : std::vector<std::pair<std::int64_t, TraderClass>>{
             {0, TraderClass::Speculator},
             {90, TraderClass::Speculator},
             {120, TraderClass::Speculator},
             {121, TraderClass::Investor},
             {100000, TraderClass::Investor}}) {
        const TxRecord t = tx(1000 + dt, "acct");
        EXPECT_EQ(classify(t, {t}, meta), want) << dt;
    }
    const TxRecord t = tx(1090, "acct");
    EXPECT_EQ(classify(t, {t}, meta, 89), TraderClass::Investor);
    EXPECT_EQ(classify(t, {t}, meta, 90), TraderClass::Speculator);
}

TEST(Analytics, LabelFollowsFirstMint) {
    const OrgMeta meta{"org", 0};
    const std::vector<TxRecord> history{tx(10, "a"), tx(500, "a"), tx(600, "a", TxKind::Burn)};
    for (const auto& r : history) EXPECT_EQ(classify(r, history, meta), TraderClass::Speculator);
    // burn-only accounts never entered early
    const TxRecord burn_only = tx(5, "b", TxKind::Burn);
    EXPECT_EQ(classify(burn_only, {burn_only}, meta), TraderClass::Investor);
}

TEST(Analytics, UnknownOrg) {
    const TxRecord t = tx(1, "a");
    try {
        (void)classify(t, {t}, OrgMeta{"other", 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownOrg);
    }
    const Classifier c({t}, {});
    EXPECT_THROW(c.classify(t), Error);
    EXPECT_THROW(Classifier({t}, {OrgMeta{"org", 0}}, -1), Error);

    const FlowSummary s = summarize({t, tx(2, "b")}, {OrgMeta{"nope", 0}});
    EXPECT_EQ(s.rejects.size(), 2u);
    EXPECT_EQ(s.rejects[1].line, 2u);
    EXPECT_EQ(s.total_payments(), Dec{});
}

TEST(Analytics, PrePublicationTradesWarn) {
    const FlowSummary s = summarize({tx(5, "a")}, {OrgMeta{"org", 100}});
    ASSERT_EQ(s.warnings.size(), 1u);
    EXPECT_EQ(s.accounts_of(TraderClass::Speculator), 1u);
}

TEST(Analytics, SpeculatorLabelsShrinkWithWindow) {
    const auto records = load_csv(data_path("data/window_tx.csv")).records;
    const auto metas = load_org_csv(data_path("data/window_orgs.csv")).records;
    std::set<std::string> prev;
    for (std::int64_t w : {600, 120, 90, 60, 30, 0}) {
        const Classifier c(records, metas, w);
        std::set<std::string> now;
        for (const auto& r : records)
            if (c.classify(r) == TraderClass::Speculator) now.insert(r.account);
        if (w != 600) {
            for (const auto& a : now) EXPECT_TRUE(prev.count(a)) << a << " became speculator at " << w;
        }
        prev = now;
    }
    EXPECT_TRUE(prev.empty());
    EXPECT_EQ(summarize(records, metas, 60).accounts_of(TraderClass::Speculator), 2u);
    EXPECT_EQ(summarize(records, metas, 120).accounts_of(TraderClass::Speculator), 4u);
}

TEST(Analytics, Table1Fixture) {
    const auto tx_file = load_csv(data_path("data/table1_tx.csv"));
    const auto org_file = load_org_csv(data_path("data/table1_orgs.csv"));
    EXPECT_TRUE(tx_file.rejects.empty());
    EXPECT_TRUE(org_file.rejects.empty());
    const FlowSummary s = summarize(tx_file.records, org_file.records);
    EXPECT_EQ(s.payments_of(TraderClass::Investor), D("10.7"));
    EXPECT_EQ(s.payments_of(TraderClass::Speculator), D("4.2"));
    EXPECT_EQ(s.rewards_of(TraderClass::Investor), D("6"));
    EXPECT_EQ(s.rewards_of(TraderClass::Speculator), D("4.8"));
    EXPECT_EQ(s.accounts_of(TraderClass::Investor), 3u);
    EXPECT_EQ(s.accounts_of(TraderClass::Speculator), 3u);
    EXPECT_TRUE(s.warnings.empty());

    std::ostringstream os;
    write_summary(os, s);
    EXPECT_EQ(os.str(), ",Investor,Speculator,Total\n"
                        "Payments,10.700000000000000000,4.200000000000000000,14.900000000000000000\n"
                        "Rewards,6.000000000000000000,4.800000000000000000,10.800000000000000000\n"
                        "Accounts,3,3,6\n");
}

TEST(Analytics, EmptyInputs) {
    EXPECT_TRUE(parse("").records.empty());
    EXPECT_TRUE(parse(std::string(kTxHeader) + "\n").records.empty());
    EXPECT_TRUE(load_csv(data_path("tests/fixtures/empty.csv")).records.empty());
    const FlowSummary s = summarize({}, {});
    EXPECT_EQ(s.total_payments(), Dec{});
    EXPECT_EQ(s.accounts_of(TraderClass::Investor) + s.accounts_of(TraderClass::Speculator), 0u);
}

TEST(Analytics, CsvRowsAndRejects) {
    const auto good = parse(std::string(kTxHeader) +
                            "\n1,o,a,mint,1.5,2\r\n2,o,b,burn,0.5,1\n\n3,o,a,mint,0,0.25\n");
    ASSERT_EQ(good.records.size(), 3u);
    EXPECT_TRUE(good.rejects.empty());
    EXPECT_EQ(good.records[0], (TxRecord{1, "o", "a", TxKind::Mint, D("1.5"), Dec(2)}));
    EXPECT_EQ(good.records[1].kind, TxKind::Burn);

    const auto bad = parse(std::string(kTxHeader) +
                           "\n1,o,a,mint,1,-2\n"
                           "x,o,a,mint,1,1\n"
                           "1,o,a,swap,1,1\n"
                           "1,o,a,mint,-1,1\n"
                           "1,o,a,mint,1\n"
                           "1,,a,mint,1,1\n"
                           "1,o,a,mint,abc,1\n"
                           "1,o,a,mint,1,1\n");
    EXPECT_EQ(bad.records.size(), 1u);
    ASSERT_EQ(bad.rejects.size(), 7u);
    EXPECT_EQ(bad.rejects[0].line, 2u);
    EXPECT_NE(bad.rejects[0].reason.find("tokens"), std::string::npos);
    EXPECT_NE(bad.rejects[3].reason.find("negative money"), std::string::npos);

    try {
        parse("time,org,account,kind,money,tokens\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Parse);
    }
    EXPECT_THROW(load_csv(data_path("data/missing.csv")), Error);
    EXPECT_THROW(load_org_csv(data_path("data/missing.csv")), Error);
}

TEST(Analytics, OrgCsv) {
    std::istringstream in(std::string(kOrgHeader) + "\na,10\nb\nc,-1\n,5\nd,20\n");
    const auto orgs = parse_org_csv(in);
    ASSERT_EQ(orgs.records.size(), 2u);
    EXPECT_EQ(orgs.records[1], (OrgMeta{"d", 20}));
    EXPECT_EQ(orgs.rejects.size(), 3u);
}

TEST(Analytics, WriteThenParse) {
    const std::vector<TxRecord> records{tx(1, "a"), tx(7, "b", TxKind::Burn, "0.000000000000000001")};
    std::stringstream io;
    write_tx_csv(io, records);
    EXPECT_EQ(parse_tx_csv(io).records, records);
    std::stringstream orgs;
    write_org_csv(orgs, {OrgMeta{"org", 3}});
    EXPECT_EQ(parse_org_csv(orgs).records, (std::vector<OrgMeta>{{"org", 3}}));
}

TEST(Analytics, TraceExportRoundTrip) {
    const TraceLog log = run(scenario_scalper_plain_curve());
    const OrgMeta meta{"sim", 5000};
    const auto records = trace_to_tx(log, meta, 30);
    ASSERT_EQ(records.size(), log.receipts().size());
    EXPECT_EQ(records.front().timestamp, 5030);
    const FlowSummary s = summarize(records, {meta}, 60);
    // scalper enters at step 1, investor at step 2
    EXPECT_EQ(s.accounts_of(TraderClass::Speculator), 2u);
    EXPECT_EQ(summarize(records, {meta}, 30).accounts_of(TraderClass::Speculator), 1u);
    Dec paid, received;
    for (const auto& b : log.final_books) {
        paid += b.paid;
        received += b.received;
    }
    EXPECT_EQ(s.total_payments(), paid);
    EXPECT_EQ(s.total_rewards(), received);
}
