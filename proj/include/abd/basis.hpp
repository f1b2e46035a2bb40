#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "errors.hpp"
#include "params.hpp"
#include "special.hpp"

namespace abd {

/// Default hard cap on the number of series terms.
inline constexpr std::size_t default_k_max = 10000;

namespace detail {

inline void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw domain_error(std::string(what) + " must be a finite non-negative number, got " +
                           std::to_string(v));
}

// log of x^k C(n+k-1,k) / (1+x)^(n+k-shift), x > 0. Formed in long double:
// the summands reach several hundred in magnitude and their rounding would
// otherwise dominate the relative error of the weight.
inline long double log_weight_term(int n, std::int64_t k, double x, int shift) {
    const long double lx = x;
    return log_binom_ext(n + k - 1, k) + static_cast<long double>(k) * std::log(lx) -
           static_cast<long double>(n + k - shift) * std::log1p(lx);
}

} // namespace detail

/// Classical Baskakov weight l_{n,k}(x) = C(n+k-1,k) x^k / (1+x)^(n+k).
/// Zero for k < 0.
inline double baskakov_weight(int n, std::int64_t k, double x) {
    detail::require_nonnegative(x, "x");
    if (k < 0)
        return 0.0;
    if (x == 0.0)
        return k == 0 ? 1.0 : 0.0;
    return static_cast<double>(std::exp(detail::log_weight_term(n, k, x, 0)));
}

/// The alpha-Baskakov weight p_{n,k}^alpha(x).
///
/// The bracket of the defining formula is multiplied through by the
/// x^(k-1) / (1+x)^(n+k-1) prefactor term by term, which leaves
///
///   alpha * l_{n,k}  -  (1-alpha) x^(k-1) C(n+k-3,k-2) / (1+x)^(n+k-2)
///                    +  (1-alpha) x^k C(n+k-1,k) / (1+x)^(n+k-1)
///
/// with no negative power of x (the middle term vanishes for k < 2). Each
/// term is formed in extended-precision log space and the three are added
/// with their signs.
/// For alpha < 1 the weights are not all non-negative.
inline double alpha_weight(const OperatorParams& params, std::size_t k, double x) {
    detail::require_nonnegative(x, "x");
    const double alpha = params.alpha();
    const int n = params.n();
    const auto kk = static_cast<std::int64_t>(k);

    if (x == 0.0)
        return k == 0 ? 1.0 : 0.0;

    // alpha l_{n,k} + (1-alpha)(1+x) l_{n,k} - (1-alpha) x l_{n,k-2}
    long double value = 0.0L;
    if (alpha > 0.0)
        value += static_cast<long double>(alpha) * std::exp(detail::log_weight_term(n, kk, x, 0));
    if (alpha < 1.0) {
        const long double beta = 1.0L - static_cast<long double>(alpha);
        value += beta * std::exp(detail::log_weight_term(n, kk, x, 1));
        if (kk >= 2)
            value -= beta * static_cast<long double>(x) * std::exp(detail::log_weight_term(n, kk - 2, x, 0));
    }
    return static_cast<double>(value);
}

/// Beta-prime kernel density
///   mu_{n,k}^rho(t) = t^(k rho) / (B(k rho + 1, n rho) (1+t)^(n rho + k rho + 1)).
inline double kernel_density(const OperatorParams& params, std::size_t k, double t) {
    detail::require_nonnegative(t, "t");
    const double a = static_cast<double>(k) * params.rho();
    const double b = params.n_rho();
    if (t == 0.0)
        return k == 0 ? std::exp(-log_beta(1.0, b)) : 0.0;
    return std::exp(a * std::log(t) - log_beta(a + 1.0, b) - (a + b + 1.0) * std::log1p(t));
}

/// Exact m-th raw moment of the kernel:
///   int_0^inf t^m mu_{n,k}^rho(t) dt = prod_{j<m} (k rho + 1 + j) / (n rho - 1 - j).
inline double kernel_raw_moment(const OperatorParams& params, std::size_t k, int m) {
    if (m < 0)
        throw domain_error("moment order must be non-negative");
    params.require_moment(m);
    const double a = static_cast<double>(k) * params.rho() + 1.0;
    const double b = params.n_rho();
    double prod = 1.0;
    for (int j = 0; j < m; ++j)
        prod *= (a + j) / (b - 1.0 - j);
    return prod;
}

/// Upper bound on sum_{k > K} |p_{n,k}^alpha(x)|.
///
/// Since p_{n,k}^alpha = (1 + (1-alpha) x) l_{n,k} - (1-alpha) x l_{n,k-2}
/// and the classical weights are a negative binomial distribution, the
/// tail is bounded by (1 + (1-alpha) x) P(N > K) + (1-alpha) x P(N > K-2),
/// where P(N > j) = I_{x/(1+x)}(j+1, n). For alpha = 1 it is the exact tail.
inline double weight_tail_bound(const OperatorParams& params, double x, std::size_t K) {
    detail::require_nonnegative(x, "x");
    if (x == 0.0)
        return 0.0;
    const double q = x / (1.0 + x);
    const double n = static_cast<double>(params.n());
    auto survival = [&](std::int64_t j) {
        return j < 0 ? 1.0 : boost::math::ibeta(static_cast<double>(j) + 1.0, n, q);
    };
    const double beta = (1.0 - params.alpha()) * x;
    const auto kk = static_cast<std::int64_t>(K);
    double bound = (1.0 + beta) * survival(kk);
    if (beta > 0.0)
        bound += beta * survival(kk - 2);
    return bound;
}

/// Smallest K whose absolute weight tail is at most eps; this guarantees
/// |1 - sum_{k<=K} p_{n,k}^alpha(x)| <= eps even for alpha < 1, where the
/// partial sums overshoot 1 before settling.
///
/// Throws truncation_cap_error (carrying sum_{k<=k_max} p) if K would
/// exceed k_max.
inline std::size_t truncation_index(const OperatorParams& params, double x, double eps,
                                    std::size_t k_max = default_k_max) {
    detail::require_nonnegative(x, "x");
    if (!(eps > 0.0 && eps < 1.0))
        throw domain_error("truncation tolerance must lie in (0,1), got " + std::to_string(eps));

    auto ok = [&](std::size_t K) { return weight_tail_bound(params, x, K) <= eps; };

    if (!ok(k_max)) {
        CompensatedSum partial;
        for (std::size_t k = 0; k <= k_max; ++k)
            partial += alpha_weight(params, k, x);
        throw truncation_cap_error(k_max, partial.value());
    }
    if (ok(0))
        return 0;

    // The bound is non-increasing in K: bracket, then bisect.
    std::size_t lo = 0, hi = 1;
    while (hi < k_max && !ok(hi)) {
        lo = hi;
        hi = std::min(2 * hi, k_max);
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace abd
