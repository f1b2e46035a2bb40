#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"

namespace abd {

/// The triple (n, alpha, rho) that selects one operator of the family.
///
/// n >= 1 is the operator index, alpha in [0,1] shapes the discrete weights
/// and rho > 0 controls the width of the Beta-type kernel. The product n*rho
/// is cached because it decides which moments exist.
class OperatorParams {
public:
    OperatorParams(int n, double alpha, double rho) : n_(n), alpha_(alpha), rho_(rho) {
        if (n < 1)
            throw domain_error("operator index n must be >= 1, got " + std::to_string(n));
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw domain_error("alpha must lie in [0,1], got " + std::to_string(alpha));
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw domain_error("rho must be a positive finite number, got " + std::to_string(rho));
        n_rho_ = static_cast<double>(n) * rho;
    }

    int n() const noexcept { return n_; }
    double alpha() const noexcept { return alpha_; }
    double rho() const noexcept { return rho_; }
    double n_rho() const noexcept { return n_rho_; }

    /// True when every moment up to `order` is finite.
    bool has_moment(int order) const noexcept { return n_rho_ > order; }

    void require_moment(int order) const {
        if (!has_moment(order))
            throw moment_existence_error(n_rho_, order);
    }

    friend bool operator==(const OperatorParams&, const OperatorParams&) = default;

private:
    int n_;
    double alpha_;
    double rho_;
    double n_rho_;
};

} // namespace abd
