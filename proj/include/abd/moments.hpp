#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "basis.hpp"
#include "errors.hpp"
#include "function_spec.hpp"
#include "operator.hpp"
#include "params.hpp"
#include "special.hpp"

namespace abd {

// Closed forms, checked against the series oracles below.

/// A(e_i;x) for i in {0,1,2}.
inline double raw_moment_closed(const OperatorParams& params, double x, int i) {
    detail::require_nonnegative(x, "x");
    if (i < 0 || i > 2)
        throw domain_error("closed-form raw moments exist for orders 0, 1, 2 only");
    params.require_moment(i);
    const double n = params.n();
    const double a = params.alpha();
    const double r = params.rho();
    const double nr = params.n_rho();
    switch (i) {
    case 0:
        return 1.0;
    case 1:
        return (r * n * x - 2.0 * r * (1.0 - a) * x + 1.0) / (nr - 1.0);
    default: {
        const double quad = r * r * n * n + (4.0 * a - 3.0) * r * r * n;
        const double lin = r * r * (n + 4.0 * a - 4.0) + 3.0 * r * n - 6.0 * r * (1.0 - a);
        return (x * x * quad + x * lin + 2.0) / ((nr - 1.0) * (nr - 2.0));
    }
    }
}

/// Central moments A((t-x)^m;x) for m in {1,2}: Gamma_n(x) and Delta_n(x).
inline double central_moment_closed(const OperatorParams& params, double x, int order) {
    detail::require_nonnegative(x, "x");
    if (order != 1 && order != 2)
        throw domain_error("closed-form central moments exist for orders 1, 2 only");
    params.require_moment(order);
    const double a = params.alpha();
    const double r = params.rho();
    const double nr = params.n_rho();
    if (order == 1)
        return (x * (1.0 - 2.0 * r * (1.0 - a)) + 1.0) / (nr - 1.0);
    const double quad = nr * (r + 1.0) - 8.0 * r * (1.0 - a) + 2.0;
    const double lin = nr * (r + 1.0) - 4.0 * r * r * (1.0 - a) - 6.0 * r * (1.0 - a) + 4.0;
    return (x * x * quad + x * lin + 2.0) / ((nr - 1.0) * (nr - 2.0));
}

inline double gamma_n(const OperatorParams& params, double x) { return central_moment_closed(params, x, 1); }
inline double delta_n(const OperatorParams& params, double x) { return central_moment_closed(params, x, 2); }

/// Numerator of the closed-form leading term of the fourth central moment,
///   rho^2 (1+rho)^2 x^2 (1+x)^2 - 96 (1-alpha) rho^3 x^3 + 24 rho^3 x^3.
inline double central_moment4_numerator(double alpha, double rho, double x) {
    const double r2 = rho * rho;
    const double r3 = r2 * rho;
    const double x2 = x * x;
    return r2 * (1.0 + rho) * (1.0 + rho) * x2 * (1.0 + x) * (1.0 + x) - 96.0 * (1.0 - alpha) * r3 * x2 * x +
           24.0 * r3 * x2 * x;
}

/// The leading term n^2 * numerator / prod_{j=1..4} (n rho - j);
/// the O(1/n^3) remainder is not included.
inline double central_moment4_leading(const OperatorParams& params, double x) {
    detail::require_nonnegative(x, "x");
    params.require_moment(4);
    const double nr = params.n_rho();
    const double n = params.n();
    return central_moment4_numerator(params.alpha(), params.rho(), x) * n * n /
           ((nr - 1.0) * (nr - 2.0) * (nr - 3.0) * (nr - 4.0));
}

// Series oracles: brute-force sum_k p_k(x) * (exact kernel moment), with no
// use of the closed forms above.

inline EvalResult raw_moment_oracle_detailed(const OperatorParams& params, double x, int m,
                                             const EvalOptions& opts = {}) {
    if (m < 0)
        throw domain_error("moment order must be non-negative");
    params.require_moment(m);
    return apply_operator_detailed(params, FunctionSpec::monomial(m), x, opts);
}

inline double raw_moment_oracle(const OperatorParams& params, double x, int m, const EvalOptions& opts = {}) {
    return raw_moment_oracle_detailed(params, x, m, opts).value;
}

/// A((t-x)^m;x) = sum_j C(m,j) (-x)^(m-j) A(e_j;x), from the oracle raw moments.
inline double central_moment_oracle(const OperatorParams& params, double x, int m, const EvalOptions& opts = {}) {
    if (m < 0)
        throw domain_error("moment order must be non-negative");
    params.require_moment(m);
    CompensatedSum sum;
    for (int j = 0; j <= m; ++j)
        sum += binom_ext(m, j) * std::pow(-x, m - j) * raw_moment_oracle(params, x, j, opts);
    return sum.value();
}

/// Closed form against oracle for one moment at one point.
struct MomentReport {
    enum class Kind { raw, central };

    OperatorParams params;
    double x = 0.0;
    Kind kind = Kind::raw;
    int order = 0;
    double closed_form = 0.0;
    double oracle = 0.0;
    double rel_gap = 0.0;  ///< |closed_form - oracle| / max(1, |oracle|)

    /// A closed form disagreeing with the oracle beyond `tol`.
    bool formula_mismatch(double tol = 1e-8) const { return !(rel_gap <= tol); }
};

inline double relative_gap(double closed_form, double oracle) {
    return std::fabs(closed_form - oracle) / std::max(1.0, std::fabs(oracle));
}

inline MomentReport raw_moment_report(const OperatorParams& params, double x, int i, const EvalOptions& opts = {}) {
    const double closed = raw_moment_closed(params, x, i);
    const double oracle = raw_moment_oracle(params, x, i, opts);
    return {params, x, MomentReport::Kind::raw, i, closed, oracle, relative_gap(closed, oracle)};
}

inline MomentReport central_moment_report(const OperatorParams& params, double x, int order,
                                          const EvalOptions& opts = {}) {
    const double closed = central_moment_closed(params, x, order);
    const double oracle = central_moment_oracle(params, x, order, opts);
    return {params, x, MomentReport::Kind::central, order, closed, oracle, relative_gap(closed, oracle)};
}

/// Large-n behaviour of the fourth central moment at fixed (alpha, rho, x):
/// the oracle sequence n^2 mu_4 against the limit n^2 * leading term, which
/// is numerator / rho^4.
struct FourthMomentStudy {
    std::vector<int> n_values;
    std::vector<double> scaled_oracle;  ///< n^2 * mu_4 from the oracle
    std::vector<double> scaled_leading;  ///< n^2 * leading term
    double leading_limit = 0.0;  ///< numerator / rho^4

    /// scaled_oracle[i+1] / scaled_oracle[i]
    std::vector<double> successive_ratios() const {
        std::vector<double> r;
        for (std::size_t i = 1; i < scaled_oracle.size(); ++i)
            r.push_back(scaled_oracle[i] / scaled_oracle[i - 1]);
        return r;
    }

    /// Last oracle value over the leading-term limit.
    double oracle_to_leading() const { return scaled_oracle.back() / leading_limit; }
};

inline FourthMomentStudy fourth_moment_study(double alpha, double rho, double x, const std::vector<int>& n_values,
                                             const EvalOptions& opts = {}) {
    if (n_values.empty())
        throw domain_error("fourth_moment_study needs at least one n");
    FourthMomentStudy s;
    s.leading_limit = central_moment4_numerator(alpha, rho, x) / (rho * rho * rho * rho);
    for (int n : n_values) {
        const OperatorParams p(n, alpha, rho);
        const double scale = static_cast<double>(n) * static_cast<double>(n);
        s.n_values.push_back(n);
        s.scaled_oracle.push_back(scale * central_moment_oracle(p, x, 4, opts));
        s.scaled_leading.push_back(scale * central_moment4_leading(p, x));
    }
    return s;
}

} // namespace abd
