#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eco {

enum class Errc {
    Domain,
    Overflow,
    ToleranceNotMet,
    NoBracket,
    NegativeSupply,
    BurnExceedsSupply,
    InvalidParams,
    ZeroPayment,
    InsolvencyBreach,
    UnknownOrg,
    Io,
    Parse,
};

inline std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::Domain: return "DomainError";
    case Errc::Overflow: return "Overflow";
    case Errc::ToleranceNotMet: return "ToleranceNotMet";
    case Errc::NoBracket: return "NoBracket";
    case Errc::NegativeSupply: return "NegativeSupply";
    case Errc::BurnExceedsSupply: return "BurnExceedsSupply";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::ZeroPayment: return "ZeroPayment";
    case Errc::InsolvencyBreach: return "InsolvencyBreach";
    case Errc::UnknownOrg: return "UnknownOrg";
    case Errc::Io: return "IoError";
    case Errc::Parse: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}

    Errc code() const noexcept { return code_; }
    // what() without the code prefix
    const std::string& message() const noexcept { return message_; }

    // Text for re-wrapping into a Parse error without repeating the prefix.
    std::string context() const { return code_ == Errc::Parse ? message_ : what(); }

private:
    Errc code_;
    std::string message_;
};

} // namespace eco
