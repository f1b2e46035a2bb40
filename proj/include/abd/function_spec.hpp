#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace abd {

/// Built-in targets, all continuous on [0, inf).
enum class NamedFunction { sqrt, expneg, ratio };

inline std::string_view to_string(NamedFunction id) {
    switch (id) {
    case NamedFunction::sqrt: return "sqrt";
    case NamedFunction::expneg: return "expneg";
    case NamedFunction::ratio: return "ratio";
    }
    return "?";
}

/// Polynomial with coefficients in ascending powers.
struct Polynomial {
    std::vector<double> coeffs;

    /// Degree after dropping trailing zero coefficients; -1 for the zero polynomial.
    int degree() const {
        for (std::size_t i = coeffs.size(); i > 0; --i)
            if (coeffs[i - 1] != 0.0)
                return static_cast<int>(i) - 1;
        return -1;
    }

    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t i = coeffs.size(); i > 0; --i)
            v = v * x + coeffs[i - 1];
        return v;
    }

    Polynomial derivative() const {
        Polynomial d;
        for (std::size_t i = 1; i < coeffs.size(); ++i)
            d.coeffs.push_back(static_cast<double>(i) * coeffs[i]);
        return d;
    }

    static Polynomial monomial(int power) {
        Polynomial p;
        p.coeffs.assign(static_cast<std::size_t>(power) + 1, 0.0);
        p.coeffs.back() = 1.0;
        return p;
    }
};

/// An arbitrary evaluator. Derivatives are optional and only needed by the
/// asymptotic (Voronovskaja-type) routines.
struct CustomFunction {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> first_derivative;
    std::function<double(double)> second_derivative;
};

/// Target function of the operator.
class FunctionSpec {
public:
    using Kind = std::variant<Polynomial, NamedFunction, CustomFunction>;

    FunctionSpec(Polynomial p) : kind_(std::move(p)) {}
    FunctionSpec(NamedFunction id) : kind_(id) {}
    FunctionSpec(CustomFunction c) : kind_(std::move(c)) {}

    static FunctionSpec polynomial(std::vector<double> ascending) {
        return FunctionSpec(Polynomial{std::move(ascending)});
    }
    static FunctionSpec monomial(int power) { return FunctionSpec(Polynomial::monomial(power)); }
    static FunctionSpec constant(double c) { return polynomial({c}); }

    /// Accepts "sqrt", "expneg", "ratio", "e<i>" (monomial x^i) and
    /// "poly:c0,c1,..." (ascending coefficients).
    static FunctionSpec parse(std::string_view text) {
        if (text == "sqrt")
            return NamedFunction::sqrt;
        if (text == "expneg")
            return NamedFunction::expneg;
        if (text == "ratio")
            return NamedFunction::ratio;
        if (text.size() >= 2 && text[0] == 'e') {
            int power = 0;
            std::istringstream in{std::string(text.substr(1))};
            if (in >> power && in.eof() && power >= 0 && power <= 32)
                return monomial(power);
        }
        if (text.starts_with("poly:")) {
            std::vector<double> coeffs;
            std::istringstream in{std::string(text.substr(5))};
            std::string item;
            while (std::getline(in, item, ',')) {
                std::size_t used = 0;
                double c = 0.0;
                try {
                    c = std::stod(item, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != item.size())
                    throw domain_error("bad polynomial coefficient '" + item + "'");
                coeffs.push_back(c);
            }
            if (coeffs.empty())
                throw domain_error("polynomial needs at least one coefficient");
            return polynomial(std::move(coeffs));
        }
        throw domain_error("unknown function '" + std::string(text) +
                           "' (expected sqrt, expneg, ratio, e<i> or poly:c0,c1,...)");
    }

    const Kind& kind() const noexcept { return kind_; }

    const Polynomial* as_polynomial() const noexcept { return std::get_if<Polynomial>(&kind_); }

    /// Polynomial degree, or nullopt for non-polynomial targets.
    std::optional<int> degree() const {
        if (const auto* p = as_polynomial())
            return p->degree();
        return std::nullopt;
    }

    std::string name() const {
        return std::visit(
            [](const auto& k) -> std::string {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, Polynomial>) {
                    std::ostringstream out;
                    out.precision(17);
                    out << "poly:";
                    for (std::size_t i = 0; i < k.coeffs.size(); ++i)
                        out << (i ? "," : "") << k.coeffs[i];
                    return out.str();
                } else if constexpr (std::is_same_v<T, NamedFunction>) {
                    return std::string(to_string(k));
                } else {
                    return k.name;
                }
            },
            kind_);
    }

    double operator()(double x) const {
        return std::visit(
            [x](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, Polynomial>) {
                    return k(x);
                } else if constexpr (std::is_same_v<T, NamedFunction>) {
                    switch (k) {
                    case NamedFunction::sqrt: return std::sqrt(x);
                    case NamedFunction::expneg: return std::exp(-x);
                    case NamedFunction::ratio: return x / (1.0 + x);
                    }
                    return std::numeric_limits<double>::quiet_NaN();
                } else {
                    return k.eval(x);
                }
            },
            kind_);
    }

    /// Analytic derivative of order 1 or 2.
    double derivative(int order, double x) const {
        if (order != 1 && order != 2)
            throw domain_error("only first and second derivatives are available");
        return std::visit(
            [order, x, this](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, Polynomial>) {
                    Polynomial d = k.derivative();
                    if (order == 2)
                        d = d.derivative();
                    return d(x);
                } else if constexpr (std::is_same_v<T, NamedFunction>) {
                    switch (k) {
                    case NamedFunction::sqrt:
                        return order == 1 ? 0.5 / std::sqrt(x) : -0.25 / (x * std::sqrt(x));
                    case NamedFunction::expneg:
                        return order == 1 ? -std::exp(-x) : std::exp(-x);
                    case NamedFunction::ratio: {
                        const double u = 1.0 + x;
                        return order == 1 ? 1.0 / (u * u) : -2.0 / (u * u * u);
                    }
                    }
                    return std::numeric_limits<double>::quiet_NaN();
                } else {
                    const auto& fn = order == 1 ? k.first_derivative : k.second_derivative;
                    if (!fn)
                        throw domain_error("function '" + name() + "' has no analytic derivative of order " +
                                           std::to_string(order));
                    return fn(x);
                }
            },
            kind_);
    }

private:
    Kind kind_;
};

} // namespace abd
