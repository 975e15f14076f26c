#pragma once

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace snrlab {

// Generalized Gamma law with shape alpha, scale b and power parameter xi:
//   E X = alpha*b,  var X = alpha*b^2,  E (X - E X)^3 = (xi + 1)*alpha*b^3.
// xi = 1 recovers the ordinary Gamma distribution. The density has no closed
// form; the MGF and its cumulants below are the usable handles.
struct GenGammaParams {
    double alpha = 0.0;
    double b = 0.0;
    double xi = 0.0;
};

struct Cumulants {
    double k = 0.0;   // K(t) = log MGF(t)
    double k1 = 0.0;  // K'(t)
    double k2 = 0.0;  // K''(t)
};

namespace detail {

// Both MGF branches are 0/0 at xi = 1; inside this window the analytic Gamma
// limit is used instead.
inline constexpr double gamma_branch_window = 1e-9;

inline bool is_gamma_branch(double xi) { return std::abs(xi - 1.0) < gamma_branch_window; }

inline void check_gen_gamma(const GenGammaParams& p) {
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha) || !(p.b > 0.0) || !std::isfinite(p.b)) {
        std::ostringstream msg;
        msg << "generalized Gamma: alpha = " << p.alpha << ", b = " << p.b
            << " must be positive and finite";
        throw ValidationError(msg.str());
    }
    if (!(p.xi > -1.0)) {
        std::ostringstream msg;
        msg << "generalized Gamma: xi = " << p.xi
            << " <= -1 would make the third central moment non-positive";
        throw ValidationError(msg.str());
    }
    if (!is_gamma_branch(p.xi) && std::abs(p.xi) < 1e-9) {
        std::ostringstream msg;
        msg << "generalized Gamma: xi = " << p.xi << " too close to 0, MGF limit not defined";
        throw NumericError(msg.str());
    }
}

// 1 - b*xi*s, the argument of the fractional power; must stay positive.
inline double mgf_argument(const GenGammaParams& p, double s) {
    const double u = is_gamma_branch(p.xi) ? 1.0 - p.b * s : 1.0 - p.b * p.xi * s;
    if (!(u > 0.0)) {
        std::ostringstream msg;
        msg << "generalized Gamma: s = " << s << " outside the MGF domain (boundary s* = "
            << 1.0 / (p.b * (is_gamma_branch(p.xi) ? 1.0 : p.xi)) << ")";
        throw NumericError(msg.str());
    }
    return u;
}

inline double log_mgf(const GenGammaParams& p, double s) {
    const double u = mgf_argument(p, s);
    if (is_gamma_branch(p.xi)) {
        return -p.alpha * std::log(u);
    }
    const double e = (p.xi - 1.0) / p.xi;
    if (p.xi > 1.0) {
        return p.alpha / (p.xi - 1.0) * (1.0 - std::pow(u, e));
    }
    return p.alpha / (1.0 - p.xi) * (std::pow(u, e) - 1.0);
}

}  // namespace detail

// Moment matching: alpha = mean^2/var, b = var/mean,
// xi = third*mean/var^2 - 1.
inline GenGammaParams fit_from_moments(double mean, double variance, double third_central) {
    if (!(mean > 0.0) || !(variance > 0.0) || !(third_central > 0.0) ||
        !std::isfinite(mean) || !std::isfinite(variance) || !std::isfinite(third_central)) {
        std::ostringstream msg;
        msg << "fit_from_moments: moments (" << mean << ", " << variance << ", " << third_central
            << ") must all be positive and finite";
        throw ValidationError(msg.str());
    }
    GenGammaParams p;
    p.alpha = mean * mean / variance;
    p.b = variance / mean;
    p.xi = third_central * mean / (variance * variance) - 1.0;
    return p;
}

inline double mgf(const GenGammaParams& p, double s) {
    detail::check_gen_gamma(p);
    if (s == 0.0) {
        return 1.0;
    }
    if (detail::is_gamma_branch(p.xi)) {
        return std::pow(detail::mgf_argument(p, s), -p.alpha);
    }
    return std::exp(detail::log_mgf(p, s));
}

// K, K' and K'' of the cumulant generating function. The derivative formulas
//   K'(t) = alpha*b*(1 - b*xi*t)^(-1/xi)
//   K''(t) = alpha*b^2*(1 - b*xi*t)^(-1/xi - 1)
// hold for both MGF branches and are continuous through xi = 1.
inline Cumulants cumulants(const GenGammaParams& p, double t) {
    detail::check_gen_gamma(p);
    Cumulants c;
    if (detail::is_gamma_branch(p.xi)) {
        const double u = detail::mgf_argument(p, t);
        c.k = -p.alpha * std::log(u);
        c.k1 = p.alpha * p.b / u;
        c.k2 = p.alpha * p.b * p.b / (u * u);
        return c;
    }
    const double u = detail::mgf_argument(p, t);
    c.k = detail::log_mgf(p, t);
    c.k1 = p.alpha * p.b * std::pow(u, -1.0 / p.xi);
    c.k2 = p.alpha * p.b * p.b * std::pow(u, -1.0 / p.xi - 1.0);
    return c;
}

// Closed-form root of K'(t_y) = y. Always lies inside the MGF domain, and
// sign(t_y) = sign(y - alpha*b).
inline double saddle_root(const GenGammaParams& p, double y) {
    detail::check_gen_gamma(p);
    if (!(y > 0.0) || !std::isfinite(y)) {
        std::ostringstream msg;
        msg << "saddle_root: threshold y = " << y << " must be positive and finite";
        throw ValidationError(msg.str());
    }
    if (detail::is_gamma_branch(p.xi)) {
        return (1.0 - p.alpha * p.b / y) / p.b;
    }
    return (1.0 - std::pow(y / (p.alpha * p.b), -p.xi)) / (p.b * p.xi);
}

}  // namespace snrlab
