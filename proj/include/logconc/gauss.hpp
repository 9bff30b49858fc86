#pragma once

#include <cmath>
#include <limits>

namespace logconc::gauss {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kInvSqrt2Pi = 0.3989422804014327;
inline constexpr double kLnSqrt2Pi = 0.9189385332046727;

inline double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

inline double cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Upper tail Q(x) = 1 - Phi(x), stable for large x.
inline double upper_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

// ln Q(x) for x >= 0, valid far beyond erfc underflow.
inline double log_upper_tail(double x) {
    if (x < 35.0) {
        double q = upper_tail(x);
        if (q > 0.0) return std::log(q);
    }
    // Asymptotic expansion Q(x) ~ phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6).
    double ix2 = 1.0 / (x * x);
    double series = 1.0 - ix2 * (1.0 - ix2 * (3.0 - 15.0 * ix2));
    return -0.5 * x * x - std::log(x) - kLnSqrt2Pi + std::log(series);
}

// ln of the standard gaussian mass on [a, b], robust in both tails.
inline double log_mass(double a, double b) {
    if (!(a < b)) return -std::numeric_limits<double>::infinity();
    if (a > 0.0) {
        // both in the right tail: Q(a) - Q(b)
        double la = log_upper_tail(a);
        double lb = (b == std::numeric_limits<double>::infinity())
                        ? -std::numeric_limits<double>::infinity()
                        : log_upper_tail(b);
        double d = lb - la;
        return la + std::log1p(-(d > -700.0 ? std::exp(d) : 0.0));
    }
    if (b < 0.0) return log_mass(-b, -a);
    double m = cdf(b) - cdf(a);
    return m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
}

inline double mass(double a, double b) {
    if (!(a < b)) return 0.0;
    if (a > 6.0 || b < -6.0) return std::exp(log_mass(a, b));
    return cdf(b) - cdf(a);
}

// Inverse standard normal CDF (Acklam's rational approximation polished by
// two Newton steps on erfc, good to full double precision on (0,1)).
inline double quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) return std::numeric_limits<double>::quiet_NaN();
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int it = 0; it < 2; ++it) {
        double err = cdf(x) - p;
        x -= err / pdf(x);
    }
    return x;
}

}  // namespace logconc::gauss
