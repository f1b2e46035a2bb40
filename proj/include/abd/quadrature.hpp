#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <new>
#include <type_traits>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "errors.hpp"
#include "special.hpp"

namespace abd {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

namespace detail {

inline void silence_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct GslWorkspace {
    explicit GslWorkspace(std::size_t n) : ptr(gsl_integration_workspace_alloc(n)) {
        if (!ptr)
            throw std::bad_alloc();
    }
    ~GslWorkspace() { gsl_integration_workspace_free(ptr); }
    GslWorkspace(const GslWorkspace&) = delete;
    GslWorkspace& operator=(const GslWorkspace&) = delete;
    gsl_integration_workspace* ptr;
};

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi] with
/// known difficult points `breaks` (GSL QAGP: 21-point panels, bisection of
/// the worst panel, extrapolation for endpoint singularities). Throws
/// quadrature_error if the error estimate stays above rel_tol * |integral|.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi, std::vector<double> breaks, double rel_tol,
                                    std::size_t max_panels = 4000) {
    detail::silence_gsl();
    std::erase_if(breaks, [&](double b) { return !(b > lo && b < hi); });
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    using Fn = std::remove_reference_t<F>;
    gsl_function g;
    g.function = [](double x, void* self) { return (*static_cast<Fn*>(self))(x); };
    g.params = const_cast<void*>(static_cast<const void*>(std::addressof(f)));

    detail::GslWorkspace ws(max_panels);
    double value = 0.0, error = 0.0;
    const int status = gsl_integration_qagp(&g, breaks.data(), breaks.size(), 0.0, rel_tol, max_panels, ws.ptr,
                                            &value, &error);
    const double tol = rel_tol * std::fabs(value);
    // GSL also reports round-off trouble when the estimate is already fine.
    if (!std::isfinite(value) || (status != GSL_SUCCESS && !(error <= tol)))
        throw quadrature_error(value, error, tol);
    return {value, error, ws.ptr->size};
}

/// int_0^1 Beta(u; a, b) h(u) du where Beta(.; a, b) is the Beta(a, b)
/// probability density. Breakpoints are placed around the bulk of the
/// density so narrow peaks (large a + b) are not missed.
template <class H>
QuadratureResult integrate_beta_weighted(H&& h, double a, double b, double rel_tol) {
    const double log_norm = log_beta(a, b);
    auto g = [&](double u) {
        const double log_w = (a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u) - log_norm;
        const double w = std::exp(log_w);
        return w == 0.0 ? 0.0 : w * h(u);
    };
    const double mean = a / (a + b);
    const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    std::vector<double> breaks;
    for (double s : {-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) {
        const double u = mean + s * sd;
        if (u > 0.0 && u < 1.0)
            breaks.push_back(u);
    }
    return integrate_adaptive(g, 0.0, 1.0, std::move(breaks), rel_tol);
}

} // namespace abd
