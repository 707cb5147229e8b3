#pragma once

#include <cmath>
#include <limits>

namespace pwc {

// Signed quantity stored as sign * exp(log_abs); log_abs = -inf encodes zero.
struct LogValue {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static LogValue from_log(double log_abs, int sign = 1) {
        return {log_abs, sign};
    }
    static LogValue from_double(double v) {
        if (v == 0.0) return {};
        return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
    }

    // May overflow to +-inf or flush to zero; callers that care keep the pair.
    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_abs);
    }
    bool representable() const {
        return sign == 0 || (log_abs < 709.0 && log_abs > -745.0);
    }
};

inline LogValue operator*(LogValue a, LogValue b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.log_abs + b.log_abs, a.sign * b.sign};
}

// exp(p) - exp(q) without overflow in the intermediate exponentials.
inline LogValue exp_difference(double p, double q) {
    if (p == q) return {};
    if (p > q) return {p + std::log(-std::expm1(q - p)), 1};
    return {q + std::log(-std::expm1(p - q)), -1};
}

} // namespace pwc
