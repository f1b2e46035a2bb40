#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "errors.hpp"
#include "function_spec.hpp"
#include "moments.hpp"
#include "operator.hpp"
#include "params.hpp"

namespace abd {

/// Closed interval [lo, hi] sampled at `resolution` equally spaced points
/// for sup estimates.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t resolution = 4001;

    void validate() const {
        if (!(lo >= 0.0 && lo < hi) || !std::isfinite(hi))
            throw domain_error("interval must satisfy 0 <= lo < hi");
        if (resolution < 2)
            throw domain_error("interval resolution must be >= 2");
    }

    double spacing() const { return (hi - lo) / static_cast<double>(resolution - 1); }

    std::vector<double> points() const { return linear_grid(lo, hi, resolution); }
};

/// Outcome of checking one error bound at one point.
struct BoundReport {
    double x = 0.0;
    double lhs = 0.0;  ///< |A(f;x) - f(x)|
    double rhs = 0.0;  ///< the bound
    bool satisfied = false;

    static BoundReport make(double x, double lhs, double rhs) { return {x, lhs, rhs, lhs <= rhs + 1e-12}; }
};

namespace detail {

inline void require_positive_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw domain_error("delta must be a positive finite number");
}

// Number of grid steps that fit in delta, guarding against 0.25/0.00025
// landing just below an integer.
inline std::size_t steps_within(double delta, double h) {
    return static_cast<std::size_t>(std::floor(delta / h * (1.0 + 1e-12)));
}

} // namespace detail

/// Grid estimate of the modulus of continuity
///   omega(f; delta) = sup { |f(s) - f(t)| : s, t in iv, |s - t| <= delta }.
///
/// Uses every grid pair at most delta apart plus the pairs (x_i, x_i +
/// delta). It is a lower bound of the true supremum.
inline double modulus(const FunctionSpec& f, const Interval& iv, double delta) {
    iv.validate();
    detail::require_positive_delta(delta);
    const auto xs = iv.points();
    const std::size_t n = xs.size();
    std::vector<double> fs(n);
    for (std::size_t i = 0; i < n; ++i)
        fs[i] = f(xs[i]);

    const std::size_t w = std::min(n - 1, detail::steps_within(delta, iv.spacing()));
    double best = 0.0;
    // Sliding max/min over the window [i, i + w], scanned right to left.
    std::deque<std::size_t> maxq, minq;
    for (std::size_t i = n; i-- > 0;) {
        while (!maxq.empty() && fs[maxq.back()] <= fs[i])
            maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && fs[minq.back()] >= fs[i])
            minq.pop_back();
        minq.push_back(i);
        while (maxq.front() > i + w)
            maxq.pop_front();
        while (minq.front() > i + w)
            minq.pop_front();
        best = std::max({best, fs[maxq.front()] - fs[i], fs[i] - fs[minq.front()]});

        const double y = xs[i] + delta;
        if (y <= iv.hi)
            best = std::max(best, std::fabs(f(y) - fs[i]));
    }
    return best;
}

/// Grid estimate of the second-order modulus
///   omega_2(f; delta) = sup { |f(x+h) - 2 f(x) + f(x-h)| : 0 < h <= delta, x +- h in iv }.
inline double second_modulus(const FunctionSpec& f, const Interval& iv, double delta) {
    iv.validate();
    detail::require_positive_delta(delta);
    const auto xs = iv.points();
    const std::size_t n = xs.size();
    std::vector<double> fs(n);
    for (std::size_t i = 0; i < n; ++i)
        fs[i] = f(xs[i]);

    const std::size_t w = detail::steps_within(delta, iv.spacing());
    double best = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t reach = std::min({w, i, n - 1 - i});
        for (std::size_t s = 1; s <= reach; ++s)
            best = std::max(best, std::fabs(fs[i + s] - 2.0 * fs[i] + fs[i - s]));
        if (xs[i] - delta >= iv.lo && xs[i] + delta <= iv.hi)
            best = std::max(best, std::fabs(f(xs[i] + delta) - 2.0 * fs[i] + f(xs[i] - delta)));
    }
    return best;
}

/// Interval used by the modulus bound check at x: [0, x + 3 sqrt(Delta_n(x)) + 1].
inline Interval default_bound_interval(const OperatorParams& params, double x, std::size_t resolution = 4001) {
    return {0.0, x + 3.0 * std::sqrt(delta_n(params, x)) + 1.0, resolution};
}

/// Checks |A(f;x) - f(x)| <= 2 omega(f; sqrt(Delta_n(x))) for bounded f.
inline BoundReport bound_modulus(const OperatorParams& params, const FunctionSpec& f, double x, const Interval& iv,
                                 const EvalOptions& opts = {}) {
    params.require_moment(2);
    const double lhs = std::fabs(apply_operator(params, f, x, opts) - f(x));
    const double rhs = 2.0 * modulus(f, iv, std::sqrt(delta_n(params, x)));
    return BoundReport::make(x, lhs, rhs);
}

inline BoundReport bound_modulus(const OperatorParams& params, const FunctionSpec& f, double x,
                                 const EvalOptions& opts = {}) {
    return bound_modulus(params, f, x, default_bound_interval(params, x), opts);
}

/// Checks |A(f;x) - f(x)| <= M Delta_n(x)^(gamma/2) for f in Lip_M^gamma.
inline BoundReport bound_lipschitz(const OperatorParams& params, double M, double gamma, const FunctionSpec& f,
                                   double x, const EvalOptions& opts = {}) {
    if (!(M > 0.0))
        throw domain_error("Lipschitz constant M must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw domain_error("Lipschitz order gamma must lie in (0,1]");
    params.require_moment(2);
    const double lhs = std::fabs(apply_operator(params, f, x, opts) - f(x));
    const double rhs = M * std::pow(delta_n(params, x), gamma / 2.0);
    return BoundReport::make(x, lhs, rhs);
}

/// (|Gamma_n(x)| + Delta_n(x) / 2) * ||f||_{C_B^2}.
inline double bound_c2(const OperatorParams& params, double f_c2_norm, double x) {
    if (!(f_c2_norm >= 0.0))
        throw domain_error("C_B^2 norm must be non-negative");
    params.require_moment(2);
    return (std::fabs(gamma_n(params, x)) + delta_n(params, x) / 2.0) * f_c2_norm;
}

/// Quantities entering the K-functional estimate at x. The multiplicative
/// constant of that estimate is unspecified, so nothing is checked here.
struct KFunctionalQuantities {
    double gamma_n = 0.0;
    double delta_n = 0.0;
    double argument = 0.0;  ///< |Gamma_n| / 2 + Delta_n / 4
    double omega2 = 0.0;  ///< omega_2(f; sqrt(argument))
};

inline KFunctionalQuantities k_functional_quantities(const OperatorParams& params, const FunctionSpec& f, double x,
                                                     const Interval& iv) {
    params.require_moment(2);
    KFunctionalQuantities q;
    q.gamma_n = gamma_n(params, x);
    q.delta_n = delta_n(params, x);
    q.argument = std::fabs(q.gamma_n) / 2.0 + q.delta_n / 4.0;
    q.omega2 = second_modulus(f, iv, std::sqrt(q.argument));
    return q;
}

/// lim (n rho - 1)(A(f;x) - f(x)) = [x(1 - 2 rho (1-alpha)) + 1] f'(x) + (rho + 1) x (x + 1) f''(x) / 2.
inline double voronovskaja_limit(double alpha, double rho, double x, double f1, double f2) {
    return (x * (1.0 - 2.0 * rho * (1.0 - alpha)) + 1.0) * f1 + (rho + 1.0) * x * (x + 1.0) * f2 / 2.0;
}

inline double voronovskaja_limit(double alpha, double rho, const FunctionSpec& f, double x) {
    return voronovskaja_limit(alpha, rho, x, f.derivative(1, x), f.derivative(2, x));
}

/// r_n = (n rho - 1)(A(f;x) - f(x)) for each n, in input order.
inline std::vector<double> voronovskaja_sequence(double alpha, double rho, const FunctionSpec& f, double x,
                                                 const std::vector<int>& n_list, const EvalOptions& opts = {}) {
    std::vector<double> r;
    r.reserve(n_list.size());
    const double fx = f(x);
    for (int n : n_list) {
        const OperatorParams p(n, alpha, rho);
        r.push_back((p.n_rho() - 1.0) * (apply_operator(p, f, x, opts) - fx));
    }
    return r;
}

/// max over the grid of |A(e_i;x) - x^i| / (1 + x^2), a finite-grid stand-in
/// for the weighted sup norm. Uses the closed-form moments.
inline double weighted_gap(const OperatorParams& params, int i, const std::vector<double>& grid) {
    if (i < 0 || i > 2)
        throw domain_error("weighted_gap is defined for i in {0,1,2}");
    params.require_moment(i);
    double gap = 0.0;
    for (double x : grid) {
        const double diff = raw_moment_closed(params, x, i) - std::pow(x, i);
        gap = std::max(gap, std::fabs(diff) / (1.0 + x * x));
    }
    return gap;
}

} // namespace abd
