#pragma once

// Keister test integrand and reference integrands with known integrals.
//
// The Keister integral  I_d = \int_{R^d} cos(|x|) exp(-|x|^2) dx  becomes a
// unit-cube integral under x_j = Phi^{-1}(u_j)/sqrt(2):
//
//   f(u) = pi^{d/2} cos( sqrt( sum_j (Phi^{-1}(u_j)/sqrt(2))^2 ) ).
//
// In polar form I_d = (2 pi^{d/2} / Gamma(d/2)) \int_0^inf cos(r) e^{-r^2} r^{d-1} dr,
// which gives the exact values by one-dimensional quadrature.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "rqmc/numerics.hpp"

namespace rqmc {

inline constexpr std::size_t keister_max_exact_dim = 16;

class KeisterIntegrand {
public:
    explicit KeisterIntegrand(std::size_t d) : d_(d), scale_(std::pow(std::numbers::pi, 0.5 * static_cast<double>(d))) {
        if (d < 1) {
            throw std::invalid_argument("KeisterIntegrand: dimension must be >= 1");
        }
    }

    std::size_t dim() const noexcept { return d_; }

    double operator()(std::span<const double> u) const {
        double norm2 = 0.0;
        for (double uj : u) {
            const double t = inv_norm_cdf(uj) * inv_sqrt2;
            norm2 += t * t;
        }
        return scale_ * std::cos(std::sqrt(norm2));
    }

private:
    std::size_t d_;
    double scale_;
};

/// Unit-cube form of the Keister integrand. Throws std::domain_error if any
/// coordinate is outside (0,1).
inline double keister_eval(std::span<const double> u, std::size_t d) {
    if (u.size() != d || d == 0) {
        throw std::invalid_argument("keister_eval: point has " + std::to_string(u.size()) +
                                    " coordinates, expected " + std::to_string(d));
    }
    return KeisterIntegrand(d)(u);
}

enum class ExactMethod { closed_form, radial_quadrature };

struct ExactValue {
    std::size_t d = 0;
    double value = 0.0;
    ExactMethod method = ExactMethod::radial_quadrature;
};

/// Exact Keister value for 1 <= d <= 16 by radial quadrature. For d = 1 the
/// quadrature is checked against sqrt(pi) e^{-1/4} and the closed form is returned.
inline ExactValue keister_exact(std::size_t d, double tol = 1e-12) {
    if (d < 1 || d > keister_max_exact_dim) {
        throw std::invalid_argument("keister_exact: dimension must lie in [1, 16], got " + std::to_string(d));
    }
    const double dd = static_cast<double>(d);
    const auto radial = quad_semi_infinite(
        [d](double r) {
            double w = std::cos(r) * std::exp(-r * r);
            for (std::size_t k = 1; k < d; ++k) {
                w *= r;
            }
            return w;
        },
        tol);
    const double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * dd) / gamma_fn(0.5 * dd);
    const double value = surface * radial.value;
    if (d == 1) {
        const double closed = std::sqrt(std::numbers::pi) * std::exp(-0.25);
        if (std::abs(closed - value) > 1e-10) {
            throw std::runtime_error("keister_exact: radial quadrature disagrees with closed form for d=1");
        }
        return {d, closed, ExactMethod::closed_form};
    }
    return {d, value, ExactMethod::radial_quadrature};
}

enum class ReferenceKind { constant, sum_of_coordinates, product_of_coordinates };

/// Simple integrand with a known unit-cube integral.
class ReferenceIntegrand {
public:
    ReferenceIntegrand(ReferenceKind kind, std::size_t d, double c = 1.0) : kind_(kind), d_(d), c_(c) {
        if (d < 1) {
            throw std::invalid_argument("ReferenceIntegrand: dimension must be >= 1");
        }
    }

    double operator()(std::span<const double> u) const {
        switch (kind_) {
            case ReferenceKind::constant:
                return c_;
            case ReferenceKind::sum_of_coordinates: {
                double s = 0.0;
                for (double x : u) s += x;
                return s;
            }
            case ReferenceKind::product_of_coordinates: {
                double p = 1.0;
                for (double x : u) p *= x;
                return p;
            }
        }
        return 0.0;
    }

    double exact() const {
        switch (kind_) {
            case ReferenceKind::constant:
                return c_;
            case ReferenceKind::sum_of_coordinates:
                return 0.5 * static_cast<double>(d_);
            case ReferenceKind::product_of_coordinates:
                return std::ldexp(1.0, -static_cast<int>(d_));
        }
        return 0.0;
    }

    std::size_t dim() const noexcept { return d_; }

private:
    ReferenceKind kind_;
    std::size_t d_;
    double c_;
};

inline ReferenceIntegrand reference_integrand(ReferenceKind kind, std::size_t d, double c = 1.0) {
    return ReferenceIntegrand(kind, d, c);
}

}  // namespace rqmc
