#pragma once

// Transaction-log analytics: label each (org, account) pair as investor or
// speculator by how soon after publication its first mint landed, then total
// payments and rewards per label.
//
//   tx CSV:      timestamp,org_id,account,kind,money,tokens
//   org CSV:     org_id,publication_time
//
// Timestamps are integer seconds. money and tokens are positive decimals
// with at most 18 fractional digits (money may be 0).

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eco/agents.hpp"
#include "eco/dec.hpp"
#include "eco/error.hpp"
#include "eco/journal.hpp"

namespace eco {

inline constexpr const char* kTxHeader = "timestamp,org_id,account,kind,money,tokens";
inline constexpr const char* kOrgHeader = "org_id,publication_time";
inline constexpr std::int64_t kDefaultWindowSeconds = 120;

enum class TxKind { Mint, Burn };
enum class TraderClass { Investor, Speculator };

inline std::string trader_class_name(TraderClass c) {
    return c == TraderClass::Investor ? "Investor" : "Speculator";
}

struct TxRecord {
    std::int64_t timestamp{0};
    std::string org_id;
    std::string account;
    TxKind kind{TxKind::Mint};
    Dec money;  // payment for a mint, reward for a burn
    Dec tokens;

    friend bool operator==(const TxRecord&, const TxRecord&) = default;
};

struct OrgMeta {
    std::string org_id;
    std::int64_t publication_time{0};

    friend bool operator==(const OrgMeta&, const OrgMeta&) = default;
};

struct Reject {
    std::size_t line{0}; // 1-based, header is line 1
    std::string reason;
};

template <class T>
struct Loaded {
    std::vector<T> records;
    std::vector<Reject> rejects;
};

namespace detail {

inline std::optional<std::int64_t> parse_seconds(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t used = 0;
    try {
        const long long v = std::stoll(text, &used);
        if (used != text.size()) return std::nullopt;
        return v;
    } catch (const std::logic_error&) {
        return std::nullopt;
    }
}

// Zero-byte input is an empty table; anything else must start with `header`.
inline bool read_header(std::istream& in, const char* header, std::size_t& line_no) {
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (rstrip_cr(line) != header) {
        throw Error(Errc::Parse, std::string("expected header '") + header + "'");
    }
    return true;
}

} // namespace detail

inline Loaded<TxRecord> parse_tx_csv(std::istream& in) {
    Loaded<TxRecord> out;
    std::size_t line_no = 0;
    if (!detail::read_header(in, kTxHeader, line_no)) return out;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::rstrip_cr(line);
        if (line.empty()) continue;
        auto reject = [&](const std::string& why) { out.rejects.push_back(Reject{line_no, why}); };
        const auto f = detail::split(line, ',');
        if (f.size() != 6) {
            reject("expected 6 fields, got " + std::to_string(f.size()));
            continue;
        }
        TxRecord tx;
        const auto ts = detail::parse_seconds(f[0]);
        if (!ts || *ts < 0) {
            reject("bad timestamp '" + f[0] + "'");
            continue;
        }
        tx.timestamp = *ts;
        tx.org_id = f[1];
        tx.account = f[2];
        if (tx.org_id.empty() || tx.account.empty()) {
            reject("empty org_id or account");
            continue;
        }
        if (f[3] == "mint") {
            tx.kind = TxKind::Mint;
        } else if (f[3] == "burn") {
            tx.kind = TxKind::Burn;
        } else {
            reject("unknown kind '" + f[3] + "'");
            continue;
        }
        try {
            tx.money = Dec::parse(f[4]);
            tx.tokens = Dec::parse(f[5]);
        } catch (const Error& e) {
            reject(e.message());
            continue;
        }
        if (tx.money.is_negative()) {
            reject("negative money " + f[4]);
            continue;
        }
        if (!tx.tokens.is_positive()) {
            reject("tokens must be positive, got " + f[5]);
            continue;
        }
        out.records.push_back(std::move(tx));
    }
    return out;
}

inline Loaded<OrgMeta> parse_org_csv(std::istream& in) {
    Loaded<OrgMeta> out;
    std::size_t line_no = 0;
    if (!detail::read_header(in, kOrgHeader, line_no)) return out;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::rstrip_cr(line);
        if (line.empty()) continue;
        const auto f = detail::split(line, ',');
        const auto ts = f.size() == 2 ? detail::parse_seconds(f[1]) : std::nullopt;
        if (f.size() != 2 || f[0].empty() || !ts || *ts < 0) {
            out.rejects.push_back(Reject{line_no, "expected org_id,publication_time"});
            continue;
        }
        out.records.push_back(OrgMeta{f[0], *ts});
    }
    return out;
}

inline Loaded<TxRecord> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open '" + path + "'");
    }
    return parse_tx_csv(in);
}

inline Loaded<OrgMeta> load_org_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open '" + path + "'");
    }
    return parse_org_csv(in);
}

inline std::string tx_line(const TxRecord& tx) {
    return std::to_string(tx.timestamp) + ',' + tx.org_id + ',' + tx.account + ',' +
           (tx.kind == TxKind::Mint ? "mint" : "burn") + ',' + tx.money.str() + ',' + tx.tokens.str();
}

inline void write_tx_csv(std::ostream& os, const std::vector<TxRecord>& records) {
    os << kTxHeader << '\n';
    for (const auto& tx : records) os << tx_line(tx) << '\n';
}

inline void write_org_csv(std::ostream& os, const std::vector<OrgMeta>& metas) {
    os << kOrgHeader << '\n';
    for (const auto& m : metas) os << m.org_id << ',' << m.publication_time << '\n';
}

// One record per executed trade; step i lands at publication_time + i * seconds_per_step.
inline std::vector<TxRecord> trace_to_tx(const TraceLog& log, const OrgMeta& org, std::int64_t seconds_per_step) {
    std::vector<TxRecord> out;
    for (const auto& e : log.entries) {
        if (!e.receipt) continue;
        const Receipt& rc = *e.receipt;
        TxRecord tx;
        tx.timestamp = org.publication_time + static_cast<std::int64_t>(e.step) * seconds_per_step;
        tx.org_id = org.org_id;
        tx.account = e.agent;
        tx.kind = rc.kind == ReceiptKind::Mint ? TxKind::Mint : TxKind::Burn;
        tx.money = abs(rc.m);
        tx.tokens = abs(rc.x);
        out.push_back(std::move(tx));
    }
    return out;
}

// Labels keyed by (org_id, account). Accounts with no mint are investors.
class Classifier {
public:
    Classifier(const std::vector<TxRecord>& records, const std::vector<OrgMeta>& metas,
               std::int64_t window_seconds = kDefaultWindowSeconds)
        : window_(window_seconds) {
        if (window_seconds < 0) {
            throw Error(Errc::InvalidParams, "window must be nonnegative");
        }
        for (const auto& m : metas) orgs_[m.org_id] = m.publication_time;
        for (const auto& tx : records) {
            if (tx.kind != TxKind::Mint) continue;
            auto key = std::make_pair(tx.org_id, tx.account);
            auto it = first_mint_.find(key);
            if (it == first_mint_.end() || tx.timestamp < it->second) first_mint_[key] = tx.timestamp;
        }
    }

    bool knows(const std::string& org_id) const { return orgs_.count(org_id) != 0; }

    TraderClass classify(const std::string& org_id, const std::string& account) const {
        const auto org = orgs_.find(org_id);
        if (org == orgs_.end()) {
            throw Error(Errc::UnknownOrg, "no publication time for org '" + org_id + "'");
        }
        const auto it = first_mint_.find(std::make_pair(org_id, account));
        if (it == first_mint_.end()) return TraderClass::Investor;
        return it->second - org->second <= window_ ? TraderClass::Speculator : TraderClass::Investor;
    }

    TraderClass classify(const TxRecord& tx) const { return classify(tx.org_id, tx.account); }

    std::int64_t window() const { return window_; }

private:
    std::int64_t window_;
    std::map<std::string, std::int64_t> orgs_;
    std::map<std::pair<std::string, std::string>, std::int64_t> first_mint_;
};

// Label of `tx` given the full history it belongs to.
inline TraderClass classify(const TxRecord& tx, const std::vector<TxRecord>& history, const OrgMeta& meta,
                            std::int64_t window_seconds = kDefaultWindowSeconds) {
    if (tx.org_id != meta.org_id) {
        throw Error(Errc::UnknownOrg, "record org '" + tx.org_id + "' does not match '" + meta.org_id + "'");
    }
    return Classifier(history, {meta}, window_seconds).classify(tx);
}

struct FlowSummary {
    Dec payments[2]; // indexed by TraderClass
    Dec rewards[2];
    std::size_t accounts[2]{0, 0};
    std::vector<Reject> rejects;  // records naming an org with no metadata
    std::vector<std::string> warnings; // trades stamped before publication

    const Dec& payments_of(TraderClass c) const { return payments[static_cast<int>(c)]; }
    const Dec& rewards_of(TraderClass c) const { return rewards[static_cast<int>(c)]; }
    std::size_t accounts_of(TraderClass c) const { return accounts[static_cast<int>(c)]; }
    Dec total_payments() const { return payments[0] + payments[1]; }
    Dec total_rewards() const { return rewards[0] + rewards[1]; }
};

// Rejects refer to positions in `records` (1-based).
inline FlowSummary summarize(const std::vector<TxRecord>& records, const std::vector<OrgMeta>& metas,
                             std::int64_t window_seconds = kDefaultWindowSeconds) {
    FlowSummary out;
    const Classifier labels(records, metas, window_seconds);
    std::map<std::string, std::int64_t> published;
    for (const auto& m : metas) published[m.org_id] = m.publication_time;
    std::map<std::pair<std::string, std::string>, TraderClass> seen;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TxRecord& tx = records[i];
        if (!labels.knows(tx.org_id)) {
            out.rejects.push_back(Reject{i + 1, "unknown org '" + tx.org_id + "'"});
            continue;
        }
        if (tx.timestamp < published[tx.org_id]) {
            out.warnings.push_back("record " + std::to_string(i + 1) + " precedes publication of '" + tx.org_id + "'");
        }
        const TraderClass c = labels.classify(tx);
        const int idx = static_cast<int>(c);
        if (seen.emplace(std::make_pair(tx.org_id, tx.account), c).second) ++out.accounts[idx];
        (tx.kind == TxKind::Mint ? out.payments : out.rewards)[idx] += tx.money;
    }
    return out;
}

// Rows Payments and Rewards; columns Investor, Speculator, Total.
inline void write_summary(std::ostream& os, const FlowSummary& s) {
    os << ",Investor,Speculator,Total\n"
       << "Payments," << s.payments[0].str() << ',' << s.payments[1].str() << ',' << s.total_payments().str() << '\n'
       << "Rewards," << s.rewards[0].str() << ',' << s.rewards[1].str() << ',' << s.total_rewards().str() << '\n'
       << "Accounts," << s.accounts[0] << ',' << s.accounts[1] << ',' << (s.accounts[0] + s.accounts[1]) << '\n';
}

} // namespace eco
