#pragma once

// Special functions and a semi-infinite quadrature routine used by the
// Gaussian change of variables and by the exact Keister values.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqmc {

inline constexpr double inv_sqrt2 = 0.5 * std::numbers::sqrt2;

/// Standard normal CDF computed from erfc (accurate in both tails).
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z * inv_sqrt2); }

namespace detail {

// Acklam's rational approximation for the lower half, p in (0, 0.5].
inline double acklam_lower(double p) {
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

/// Inverse of the standard normal CDF.
///
/// Rational approximation followed by one Halley step against norm_cdf. The
/// upper half is obtained by symmetry from 1 - p, which is exact in binary
/// floating point for p >= 0.5, so both tails keep full relative accuracy.
/// Throws std::domain_error unless 0 < p < 1.
inline double inv_norm_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("inv_norm_cdf: probability must lie in (0,1), got " +
                                std::to_string(p));
    }
    const bool upper = p > 0.5;
    const double q = upper ? 1.0 - p : p;

    double x = detail::acklam_lower(q);
    // exp(x^2/2) overflows below ~1e-300; the raw approximation is already
    // far outside any range the integrands can reach there.
    if (q > 1e-300) {
        const double e = norm_cdf(x) - q;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x = x - u / (1.0 + 0.5 * x * u);
    }
    return upper ? -x : x;
}

/// Gamma function at half-integer arguments x = k/2, k >= 1.
///
/// Built by the recursion Gamma(x+1) = x Gamma(x) from Gamma(1/2) = sqrt(pi)
/// or Gamma(1) = 1. Other arguments are rejected with std::invalid_argument.
inline double gamma_fn(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("gamma_fn: argument must be positive");
    }
    const double twice = 2.0 * x;
    if (twice != std::floor(twice) || twice > 340.0) {
        throw std::invalid_argument("gamma_fn: only half-integer arguments up to 170 are supported");
    }
    const auto k = static_cast<int>(twice);
    double value = (k % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    for (double t = (k % 2 == 0) ? 1.0 : 0.5; t < x; t += 1.0) {
        value *= t;
    }
    return value;
}

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Raised when the evaluation budget runs out before the tolerance is met.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best_estimate() const noexcept { return best_; }

private:
    QuadratureResult best_;
};

struct QuadratureOptions {
    double r_cut = 10.0;
    std::size_t max_evaluations = 2'000'000;
};

namespace detail {

struct Panel {
    double a, b;
    double value, error, roundoff_floor;
    bool operator<(const Panel& other) const { return error < other.error; }
};

// 15-point Gauss-Kronrod rule with the QUADPACK error heuristic.
template <class G>
Panel gauss_kronrod_15(const G& g, double a, double b) {
    static constexpr std::array<double, 8> xgk{
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wgk{
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg{
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    constexpr double eps = std::numeric_limits<double>::epsilon();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 7> f1{}, f2{};

    const double fc = g(center);
    double res_g = fc * wg[3];
    double res_k = fc * wgk[7];
    double res_abs = std::abs(res_k);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        f1[j] = g(center - dx);
        f2[j] = g(center + dx);
        const double sum = f1[j] + f2[j];
        res_k += wgk[j] * sum;
        res_abs += wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) {
            res_g += wg[j / 2] * sum;
        }
    }
    const double mean = 0.5 * res_k;
    double res_asc = wgk[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        res_asc += wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }

    const double scale = std::abs(half);
    res_asc *= scale;
    res_abs *= scale;
    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    const double floor = 50.0 * eps * res_abs;
    err = std::max(err, floor);
    return Panel{a, b, res_k * half, err, floor};
}

}  // namespace detail

/// Integrates f over [0, inf).
///
/// [0, r_cut] and the mapped tail r = r_cut + t/(1-t), t in [0,1), are
/// refined together by global adaptive Gauss-Kronrod subdivision until the
/// summed error estimate is below tol. If refinement stalls at the roundoff
/// floor, the result is returned with that (larger) error estimate.
template <class F>
QuadratureResult quad_semi_infinite(const F& f, double tol, const QuadratureOptions& opts = {}) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("quad_semi_infinite: tolerance must be positive");
    }
    const double r_cut = opts.r_cut;
    // Panels with a >= 1.0 + r_cut live in the mapped tail, shifted by r_cut + 1
    // so a single ordered coordinate identifies both regions.
    const double tail_origin = r_cut + 1.0;
    std::size_t evaluations = 0;
    auto g = [&](double s) {
        ++evaluations;
        if (s < tail_origin) {
            return f(s);
        }
        const double t = s - tail_origin;
        const double w = 1.0 - t;
        return f(r_cut + t / w) / (w * w);
    };

    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gauss_kronrod_15(g, 0.0, r_cut));
    panels.push(detail::gauss_kronrod_15(g, tail_origin, tail_origin + 1.0));

    auto totals = [&panels] {
        auto copy = panels;
        double value = 0.0, error = 0.0;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        return std::pair{value, error};
    };

    double value = 0.0, error = 0.0;
    {
        auto [v, e] = totals();
        value = v;
        error = e;
    }
    while (error > tol) {
        const detail::Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        const bool roundoff_limited = worst.error <= worst.roundoff_floor;
        const bool too_narrow = !(worst.a < mid && mid < worst.b);
        if (roundoff_limited || too_narrow) {
            break;
        }
        if (evaluations >= opts.max_evaluations) {
            throw convergence_error("quad_semi_infinite: evaluation budget exhausted",
                                    QuadratureResult{value, error, evaluations});
        }
        panels.pop();
        const auto left = detail::gauss_kronrod_15(g, worst.a, mid);
        const auto right = detail::gauss_kronrod_15(g, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        // Running sums drift after many updates; resynchronise occasionally.
        if (panels.size() % 64 == 0) {
            auto [v, e] = totals();
            value = v;
            error = e;
        }
    }
    auto [v, e] = totals();
    return QuadratureResult{v, e, evaluations};
}

}  // namespace rqmc
