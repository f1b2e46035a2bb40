#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abd {

/// Base of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative x, alpha
/// outside [0,1], ...).
class domain_error : public error {
public:
    using error::error;
};

/// The Beta integral behind a moment of order m diverges because n*rho <= m.
class moment_existence_error : public domain_error {
public:
    moment_existence_error(double n_rho, int order)
        : domain_error("moment of order " + std::to_string(order) +
                       " requires n*rho > " + std::to_string(order) +
                       " (n*rho = " + std::to_string(n_rho) + ")"),
          n_rho_(n_rho), order_(order) {}

    double n_rho() const noexcept { return n_rho_; }
    int order() const noexcept { return order_; }

private:
    double n_rho_;
    int order_;
};

/// Base for failures of the numerical machinery itself.
class numerical_error : public error {
public:
    using error::error;
};

/// The series needed more than k_max terms to reach the requested tolerance.
class truncation_cap_error : public numerical_error {
public:
    truncation_cap_error(std::size_t k_max, double partial_sum)
        : numerical_error("series did not converge within k_max = " + std::to_string(k_max) +
                          " terms (partial weight sum " + std::to_string(partial_sum) + ")"),
          k_max_(k_max), partial_sum_(partial_sum) {}

    std::size_t k_max() const noexcept { return k_max_; }
    double partial_sum() const noexcept { return partial_sum_; }

private:
    std::size_t k_max_;
    double partial_sum_;
};

/// Adaptive quadrature stopped above its tolerance.
class quadrature_error : public numerical_error {
public:
    quadrature_error(double estimate, double error_estimate, double tolerance)
        : numerical_error("quadrature did not converge: estimate " + std::to_string(estimate) +
                          ", error estimate " + std::to_string(error_estimate) +
                          " > tolerance " + std::to_string(tolerance)),
          estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// Wraps an evaluation failure with the grid point (and, for experiments,
/// the rho value) at which it happened. The original message is kept.
template <class Base>
class tagged_error : public Base {
public:
    tagged_error(const Base& cause, std::string tag)
        : Base(cause), what_(tag + ": " + cause.what()) {}

    const char* what() const noexcept override { return what_.c_str(); }

private:
    std::string what_;
};

/// Call from inside a catch block: rethrows the active exception with `tag`
/// prefixed to its message, keeping its dynamic type catchable.
[[noreturn]] inline void rethrow_tagged(const std::string& tag) {
    try {
        throw;
    } catch (const truncation_cap_error& e) {
        throw tagged_error<truncation_cap_error>(e, tag);
    } catch (const quadrature_error& e) {
        throw tagged_error<quadrature_error>(e, tag);
    } catch (const numerical_error& e) {
        throw tagged_error<numerical_error>(e, tag);
    } catch (const moment_existence_error& e) {
        throw tagged_error<moment_existence_error>(e, tag);
    } catch (const domain_error& e) {
        throw tagged_error<domain_error>(e, tag);
    } catch (const error& e) {
        throw tagged_error<error>(e, tag);
    }
}

} // namespace abd
