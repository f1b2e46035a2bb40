#pragma once

#include <cmath>
#include <cstdint>

#include <boost/math/special_functions/gamma.hpp>

namespace abd {

/// Log-gamma for positive arguments. Boost's version is reentrant, unlike
/// glibc's lgamma which writes the global signgam.
inline double log_gamma(double z) { return boost::math::lgamma(z); }

/// Extended-precision log-gamma, used where several large logarithms are
/// added before exponentiating.
inline long double log_gamma_ext(long double z) { return boost::math::lgamma(z); }

/// log B(a, b) for a, b > 0.
inline double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

/// log C(a, b) for 0 <= b <= a.
inline double log_binom(std::int64_t a, std::int64_t b) {
    return log_gamma(static_cast<double>(a) + 1.0) - log_gamma(static_cast<double>(b) + 1.0) -
           log_gamma(static_cast<double>(a - b) + 1.0);
}

/// log C(a, b) in extended precision.
inline long double log_binom_ext(std::int64_t a, std::int64_t b) {
    return log_gamma_ext(static_cast<long double>(a) + 1.0L) - log_gamma_ext(static_cast<long double>(b) + 1.0L) -
           log_gamma_ext(static_cast<long double>(a - b) + 1.0L);
}

/// Binomial coefficient with the extended convention C(a, b) = 0 whenever
/// b < 0 or b > a. Small arguments use the exact multiplicative formula;
/// larger ones go through log-gamma (the value is positive, so no sign is
/// lost).
inline double binom_ext(std::int64_t a, std::int64_t b) {
    if (b < 0 || b > a)
        return 0.0;
    if (b > a - b)
        b = a - b;
    if (a <= 60) {
        // c * (a - b + i) stays below 2^64 for a <= 60 and divides exactly.
        std::uint64_t c = 1;
        for (std::int64_t i = 1; i <= b; ++i)
            c = c * static_cast<std::uint64_t>(a - b + i) / static_cast<std::uint64_t>(i);
        return static_cast<double>(c);
    }
    return std::exp(log_binom(a, b));
}

/// Neumaier's variant of compensated summation.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(double v) noexcept {
        add(v);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace abd
