#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "basis.hpp"
#include "errors.hpp"
#include "function_spec.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace abd {

/// Numerical knobs shared by every evaluation routine.
struct EvalOptions {
    double series_eps = 1e-10;  ///< series truncation tolerance
    double quad_rel_tol = 1e-10;  ///< relative tolerance of the inner quadrature
    std::size_t k_max = default_k_max;  ///< hard cap on series terms

    void validate() const {
        if (!(series_eps > 0.0 && series_eps < 1.0))
            throw domain_error("series_eps must lie in (0,1)");
        if (!(quad_rel_tol > 0.0 && quad_rel_tol < 1.0))
            throw domain_error("quad_rel_tol must lie in (0,1)");
        if (k_max == 0)
            throw domain_error("k_max must be positive");
    }
};

/// Inner integrals are pre-computed over this many extra indices past the
/// weight-based truncation point and used to estimate the tail of unbounded
/// targets.
inline constexpr std::size_t tail_window = 8;

/// int_0^inf mu_{n,k}^rho(t) f(t) dt.
///
/// Polynomials are integrated exactly from the kernel moments. Anything else
/// goes through t = u / (1 - u), which turns the kernel into the Beta(k rho +
/// 1, n rho) density on (0,1), followed by adaptive Gauss-Kronrod.
inline double inner_integral(const OperatorParams& params, std::size_t k, const FunctionSpec& f,
                             const EvalOptions& opts = {}) {
    if (const auto* poly = f.as_polynomial()) {
        const int degree = poly->degree();
        if (degree < 0)
            return 0.0;
        params.require_moment(degree);
        CompensatedSum sum;
        for (int m = 0; m <= degree; ++m)
            if (poly->coeffs[static_cast<std::size_t>(m)] != 0.0)
                sum += poly->coeffs[static_cast<std::size_t>(m)] * kernel_raw_moment(params, k, m);
        return sum.value();
    }
    const double a = static_cast<double>(k) * params.rho() + 1.0;
    const double b = params.n_rho();
    auto h = [&f](double u) { return f(u / (1.0 - u)); };
    return integrate_beta_weighted(h, a, b, opts.quad_rel_tol).value;
}

/// Lazily filled table of inner integrals for one (params, f) pair. They do
/// not depend on x, so a grid evaluation shares one table.
///
/// The constant term of a polynomial is split off as `offset()`: the weights
/// sum to one, so it passes through the operator unchanged.
class InnerIntegrals {
public:
    InnerIntegrals(OperatorParams params, FunctionSpec f, EvalOptions opts)
        : params_(params), f_(std::move(f)), opts_(opts) {
        if (const auto* poly = f_.as_polynomial(); poly && !poly->coeffs.empty() && poly->coeffs[0] != 0.0) {
            Polynomial rest = *poly;
            offset_ = rest.coeffs[0];
            rest.coeffs[0] = 0.0;
            f_ = FunctionSpec(std::move(rest));
        }
    }

    /// Fills indices [0, count) using parallel workers.
    void precompute(std::size_t count) {
        const std::size_t old = values_.size();
        if (count <= old)
            return;
        values_.resize(count);
        parallel_for(count - old, [&](std::size_t i) {
            values_[old + i] = inner_integral(params_, old + i, f_, opts_);
        });
    }

    std::size_t size() const noexcept { return values_.size(); }

    /// Cached value if present, otherwise computed on the fly (not stored,
    /// so concurrent readers are safe).
    double at(std::size_t k) const {
        return k < values_.size() ? values_[k] : inner_integral(params_, k, f_, opts_);
    }

    const OperatorParams& params() const noexcept { return params_; }
    /// The function actually integrated (f without its constant term).
    const FunctionSpec& integrand() const noexcept { return f_; }
    const EvalOptions& options() const noexcept { return opts_; }
    double offset() const noexcept { return offset_; }

private:
    OperatorParams params_;
    FunctionSpec f_;
    EvalOptions opts_;
    double offset_ = 0.0;
    std::vector<double> values_;
};

/// Value of A(f;x) together with truncation diagnostics.
struct EvalResult {
    double value = 0.0;
    std::size_t last_index = 0;  ///< K: terms k = 0..K were summed
    double weight_tail = 0.0;  ///< bound on sum_{k>K} |p_k(x)|
    double tail_estimate = 0.0;  ///< weight_tail times max |I_k| over the look-ahead window
};

namespace detail {

inline EvalResult apply_with(const InnerIntegrals& inner, double x) {
    const auto& params = inner.params();
    const auto& opts = inner.options();
    std::size_t K = truncation_index(params, x, opts.series_eps, opts.k_max);

    std::vector<double> weights;
    CompensatedSum sum;
    sum += inner.offset();
    std::size_t summed = 0;  // terms [0, summed) are in `sum`
    for (;;) {
        for (; summed <= K; ++summed) {
            const double w = alpha_weight(params, summed, x);
            weights.push_back(w);
            if (w != 0.0)
                sum += w * inner.at(summed);
        }
        double window_max = 0.0;
        for (std::size_t j = K + 1; j <= K + tail_window; ++j)
            window_max = std::max(window_max, std::fabs(inner.at(j)));
        const double weight_tail = weight_tail_bound(params, x, K);
        const double tail = weight_tail * window_max;
        if (tail <= opts.series_eps * std::max(1.0, std::fabs(sum.value())))
            return {sum.value(), K, weight_tail, tail};
        if (K >= opts.k_max) {
            CompensatedSum partial;
            for (double w : weights)
                partial += w;
            throw truncation_cap_error(opts.k_max, partial.value());
        }
        K = std::min(opts.k_max, K + std::max<std::size_t>(tail_window, K / 8));
    }
}

inline std::string x_tag(double x) {
    std::ostringstream out;
    out.precision(17);
    out << "x=" << x;
    return out.str();
}

} // namespace detail

/// A_n^{alpha,rho}(f;x) = sum_k p_{n,k}^alpha(x) int_0^inf mu_{n,k}^rho(t) f(t) dt,
/// with diagnostics about where the series was cut.
inline EvalResult apply_operator_detailed(const OperatorParams& params, const FunctionSpec& f, double x,
                                          const EvalOptions& opts = {}) {
    opts.validate();
    detail::require_nonnegative(x, "x");
    if (const auto d = f.degree(); d && *d >= 0)
        params.require_moment(*d);
    InnerIntegrals inner(params, f, opts);
    inner.precompute(truncation_index(params, x, opts.series_eps, opts.k_max) + tail_window + 1);
    return detail::apply_with(inner, x);
}

inline double apply_operator(const OperatorParams& params, const FunctionSpec& f, double x,
                             const EvalOptions& opts = {}) {
    return apply_operator_detailed(params, f, x, opts).value;
}

struct CurveRow {
    double x = 0.0;
    double f_val = 0.0;
    double approx = 0.0;
    double abs_err = 0.0;
};

/// f, A(f;.) and |f - A(f;.)| sampled on a grid for one parameter setting.
struct CurveTable {
    OperatorParams params;
    std::vector<CurveRow> rows;

    double max_abs_err() const {
        double m = 0.0;
        for (const auto& r : rows)
            m = std::max(m, r.abs_err);
        return m;
    }

    /// x of the first row attaining max_abs_err().
    double argmax_x() const {
        double m = -1.0, x = 0.0;
        for (const auto& r : rows)
            if (r.abs_err > m) {
                m = r.abs_err;
                x = r.x;
            }
        return x;
    }
};

/// `points` equally spaced values from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points < 2)
        throw domain_error("a grid needs at least 2 points");
    if (!(lo < hi))
        throw domain_error("grid requires lo < hi");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.back() = hi;
    return grid;
}

/// Evaluates the operator at every grid point. Points are independent and
/// run in parallel; rows come back in grid order.
inline CurveTable error_curve(const OperatorParams& params, const FunctionSpec& f,
                              const std::vector<double>& grid, const EvalOptions& opts = {}) {
    opts.validate();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        detail::require_nonnegative(grid[i], "grid point");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw domain_error("grid must be strictly increasing");
    }
    if (const auto d = f.degree(); d && *d >= 0)
        params.require_moment(*d);

    std::vector<std::size_t> first_k(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        try {
            first_k[i] = truncation_index(params, grid[i], opts.series_eps, opts.k_max);
        } catch (const error&) {
            rethrow_tagged(detail::x_tag(grid[i]));
        }
    });

    InnerIntegrals inner(params, f, opts);
    std::size_t needed = 0;
    for (std::size_t k : first_k)
        needed = std::max(needed, k);
    inner.precompute(needed + tail_window + 1);

    CurveTable table{params, std::vector<CurveRow>(grid.size())};
    parallel_for(grid.size(), [&](std::size_t i) {
        const double x = grid[i];
        try {
            const double approx = detail::apply_with(inner, x).value;
            const double fx = f(x);
            table.rows[i] = {x, fx, approx, std::fabs(fx - approx)};
        } catch (const error&) {
            rethrow_tagged(detail::x_tag(x));
        }
    });
    return table;
}

} // namespace abd
