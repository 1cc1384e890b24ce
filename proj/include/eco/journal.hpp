#pragma once

// Append-only receipt journal. Plain text, one record per line:
//
//   # eco-journal v1
//   genesis k=<dec> tau=<dec> theta=<dec> c=<dec> weighting=equal|volume voting=on|off guard=on|off a_bar0=<dec>
//   seq,kind,m,x,a,a_bar_before,a_bar_after,s_after,r_after
//   1,mint,<m>,<x>,<a>,<a_bar_before>,<a_bar_after>,<s_after>,<r_after>
//   2,burn,<m>,<x>,,...
//
// Decimals carry 18 fractional digits. Replay re-executes each record from
// genesis and requires every field to match bit for bit.

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "eco/dec.hpp"
#include "eco/error.hpp"
#include "eco/organization.hpp"

namespace eco {

inline constexpr const char* kJournalMagic = "# eco-journal v1";
inline constexpr const char* kJournalHeader = "seq,kind,m,x,a,a_bar_before,a_bar_after,s_after,r_after";

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline std::string rstrip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace detail

inline std::string genesis_line(const EcoState& g) {
    std::ostringstream os;
    os << "genesis k=" << g.k.str() << " tau=" << g.tau.str() << " theta=" << g.voting.theta_avg.str()
       << " c=" << g.voting.c.str() << " weighting=" << weighting_name(g.voting.weighting)
       << " voting=" << (g.voting.enabled ? "on" : "off") << " guard=" << (g.solvency_guard ? "on" : "off")
       << " a_bar0=" << g.a_bar.str();
    return os.str();
}

inline EcoState parse_genesis_line(const std::string& line) {
    std::istringstream in(line);
    std::string word;
    in >> word;
    if (word != "genesis") {
        throw Error(Errc::Parse, "expected genesis record");
    }
    std::map<std::string, std::string> kv;
    while (in >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::Parse, "bad genesis field '" + word + "'");
        }
        kv[word.substr(0, eq)] = word.substr(eq + 1);
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error(Errc::Parse, std::string("genesis missing ") + key);
        return it->second;
    };
    auto flag = [&](const char* key) {
        const std::string& v = need(key);
        if (v == "on") return true;
        if (v == "off") return false;
        throw Error(Errc::Parse, std::string("genesis ") + key + " must be on|off");
    };
    VotingConfig voting;
    voting.theta_avg = Dec::parse(need("theta"));
    voting.c = Dec::parse(need("c"));
    voting.weighting = parse_weighting(need("weighting"));
    voting.enabled = flag("voting");
    return genesis(Dec::parse(need("k")), Dec::parse(need("tau")), voting, Dec::parse(need("a_bar0")), flag("guard"));
}

inline std::string receipt_line(const Receipt& rc) {
    std::ostringstream os;
    os << rc.seq << ',' << receipt_kind_name(rc.kind) << ',' << rc.m.str() << ',' << rc.x.str() << ','
       << (rc.a ? rc.a->str() : std::string()) << ',' << rc.a_bar_before.str() << ',' << rc.a_bar_after.str() << ','
       << rc.s_after.str() << ',' << rc.r_after.str();
    return os.str();
}

inline void write_journal(std::ostream& os, const EcoState& genesis_state, const std::vector<Receipt>& receipts) {
    os << kJournalMagic << '\n' << genesis_line(genesis_state) << '\n' << kJournalHeader << '\n';
    for (const Receipt& rc : receipts) {
        os << receipt_line(rc) << '\n';
    }
}

struct ReplayResult {
    EcoState genesis_state;
    EcoState final_state;
    std::vector<Receipt> receipts;
};

// Errors carry the 1-based line number of the offending record.
inline ReplayResult replay_journal(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) -> Error {
        return Error(Errc::Parse, "line " + std::to_string(line_no) + ": " + why);
    };
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        line = detail::rstrip_cr(line);
        return true;
    };

    if (!next_line() || line != kJournalMagic) {
        throw fail("missing journal magic '" + std::string(kJournalMagic) + "'");
    }
    if (!next_line()) {
        throw fail("missing genesis record");
    }
    ReplayResult out;
    try {
        out.genesis_state = parse_genesis_line(line);
    } catch (const Error& e) {
        throw fail(e.context());
    }
    if (!next_line() || line != kJournalHeader) {
        throw fail("missing column header");
    }

    EcoState st = out.genesis_state;
    while (next_line()) {
        if (line.empty()) continue;
        const auto f = detail::split(line, ',');
        if (f.size() != 9) {
            throw fail("expected 9 fields, got " + std::to_string(f.size()));
        }
        try {
            Transition t;
            if (f[1] == "mint") {
                t = mint(st, Dec::parse(f[2]), Dec::parse(f[4]));
            } else if (f[1] == "burn" || f[1] == "burn-capped") {
                if (!f[4].empty()) throw Error(Errc::Parse, "burn records carry no assessment");
                t = burn(st, Dec::parse(f[3]));
            } else {
                throw Error(Errc::Parse, "unknown record kind '" + f[1] + "'");
            }
            if (receipt_line(t.receipt) != line) {
                throw Error(Errc::Parse, "record does not match re-execution: expected '" + receipt_line(t.receipt) + "'");
            }
            st = t.state;
            out.receipts.push_back(t.receipt);
        } catch (const Error& e) {
            throw fail(e.context());
        }
    }
    out.final_state = st;
    return out;
}

inline ReplayResult replay_journal_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open journal '" + path + "'");
    }
    return replay_journal(in);
}

} // namespace eco
