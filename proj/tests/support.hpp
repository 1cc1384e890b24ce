#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "eco/dec.hpp"

namespace eco::test {

using detail::Real;

// Decimal uniform on [lo, hi], quantized to `digits` fractional digits.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    Dec uniform(double lo, double hi, int digits = 12) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        const double v = lo + (hi - lo) * u;
        const Dec d = Dec::from_double(v);
        const Dec q = Dec::from_raw(pow10(18 - digits));
        return mul(div(d, q, RoundDir::Down), q, RoundDir::Nearest);
    }

    // log-uniform on [lo, hi], lo > 0
    Dec log_uniform(double lo, double hi, int digits = 12) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        const double v = lo * std::pow(hi / lo, u);
        const Dec q = Dec::from_raw(pow10(18 - digits));
        return max(q, mul(div(Dec::from_double(v), q, RoundDir::Down), q, RoundDir::Nearest));
    }

    std::uint64_t next() { return rng_(); }

private:
    static Dec::Raw pow10(int n) {
        Dec::Raw r = 1;
        for (int i = 0; i < n; ++i) r *= 10;
        return r;
    }

    std::mt19937_64 rng_;
};

inline Real rel_err(const Real& got, const Real& want) {
    using boost::multiprecision::abs;
    if (want == 0) return abs(got);
    return abs(got - want) / abs(want);
}

inline std::string data_path(const std::string& rel) { return std::string(ECO_SOURCE_DIR) + "/" + rel; }

} // namespace eco::test
