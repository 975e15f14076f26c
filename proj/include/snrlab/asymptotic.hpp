#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"

namespace snrlab {

// Unique positive solution of the coupled equations
//   delta       = (1/K) sum_i d_i / (1 + t * delta_tilde * d_i)
//   delta_tilde = (1/K) sum_j dt_j / (1 + t * delta * dt_j)
struct FixedPointSolution {
    double delta = 0.0;
    double delta_tilde = 0.0;
    double t = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    int iterations = 0;
};

// Diagonals of T = (I + t*delta_tilde*D)^-1 and T-tilde = (I + t*delta*Dt)^-1
// plus the trace functionals gamma = (1/K) Tr D^2 T^2 and
// gamma_tilde = (1/K) Tr Dt^2 Tt^2.
struct AuxiliaryQuantities {
    std::vector<double> t_diag;
    std::vector<double> t_tilde_diag;
    double gamma = 0.0;
    double gamma_tilde = 0.0;
};

// The three asymptotic central moments of the output SNR beta.
struct AsymptoticMoments {
    double mean_norm = 0.0;      // delta / rho, first moment of beta / p0
    double omega_sq = 0.0;       // Omega^2
    double nu = 0.0;             // nu
    double mean = 0.0;           // p0 * delta / rho
    double variance = 0.0;       // p0^2 * Omega^2 / K
    double third_central = 0.0;  // p0^3 * nu / K^2
};

namespace detail {

inline double map_delta(const std::vector<double>& d, double t, double delta_tilde, int k) {
    double s = 0.0;
    for (double di : d) {
        s += di / (1.0 + t * delta_tilde * di);
    }
    return s / k;
}

inline double map_delta_deriv(const std::vector<double>& d, double t, double delta_tilde, int k) {
    double s = 0.0;
    for (double di : d) {
        const double r = di / (1.0 + t * delta_tilde * di);
        s += r * r;
    }
    return -t * s / k;
}

}  // namespace detail

// Reduces the coupled system to the scalar root problem
//   H(dt) = g(f(dt)) - dt = 0,   f(dt) = (1/K) Tr D (I + t dt D)^-1,
//                                g(dd) = (1/K) Tr Dt (I + t dd Dt)^-1,
// solved by Newton steps safeguarded by a bracket. H(0) > 0 and
// H((1/K) Tr Dt + 1) < 0 always, so the bracket never fails; plain Picard
// iteration is not used because its asymptotic rate equals t^2*gamma*
// gamma_tilde, which approaches 1 at high SNR.
inline FixedPointSolution solve_fixed_point(const SpectrumPair& spec, double t, double tol,
                                            double delta0, double delta_tilde0) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw ValidationError("solve_fixed_point: t must be positive and finite");
    }
    if (!(tol > 0.0)) {
        throw ValidationError("solve_fixed_point: tol must be positive");
    }
    if (spec.d.empty() || spec.d_tilde.empty()) {
        throw ValidationError("solve_fixed_point: empty spectrum");
    }
    if (!(delta0 > 0.0) || !(delta_tilde0 > 0.0)) {
        throw ValidationError("solve_fixed_point: initialization must be positive");
    }
    const int k = static_cast<int>(spec.d_tilde.size());

    double trace_dt = 0.0;
    for (double v : spec.d_tilde) {
        trace_dt += v;
    }
    double lo = 0.0;
    double hi = trace_dt / k + 1.0;

    FixedPointSolution sol;
    sol.t = t;
    sol.tolerance = tol;
    double dt = std::clamp(delta_tilde0, lo + 1e-300, hi);

    constexpr int iteration_cap = 10000;
    for (int it = 1; it <= iteration_cap; ++it) {
        const double f = detail::map_delta(spec.d, t, dt, k);
        const double h = detail::map_delta(spec.d_tilde, t, f, k) - dt;
        sol.iterations = it;
        sol.residual = std::abs(h);
        if (sol.residual <= 0.5 * tol) {
            sol.delta_tilde = dt;
            sol.delta = f;
            return sol;
        }
        (h > 0.0 ? lo : hi) = dt;
        const double hprime = detail::map_delta_deriv(spec.d, t, dt, k) *
                                  detail::map_delta_deriv(spec.d_tilde, t, f, k) -
                              1.0;
        double next = dt - h / hprime;
        if (!(next > lo) || !(next < hi)) {
            next = 0.5 * (lo + hi);
        }
        dt = next;
    }
    std::ostringstream msg;
    msg << "solve_fixed_point: no convergence after " << iteration_cap
        << " iterations, last residual " << sol.residual;
    throw NumericError(msg.str());
}

inline FixedPointSolution solve_fixed_point(const SpectrumPair& spec, double t,
                                            double tol = 1e-12) {
    if (spec.d.empty() || spec.d_tilde.empty()) {
        throw ValidationError("solve_fixed_point: empty spectrum");
    }
    const int k = static_cast<int>(spec.d_tilde.size());
    double trace_d = 0.0;
    for (double v : spec.d) {
        trace_d += v;
    }
    double trace_dt = 0.0;
    for (double v : spec.d_tilde) {
        trace_dt += v;
    }
    return solve_fixed_point(spec, t, tol, trace_d / k, trace_dt / k);
}

inline AuxiliaryQuantities auxiliary_quantities(const SpectrumPair& spec,
                                                const FixedPointSolution& fp) {
    const int k = static_cast<int>(spec.d_tilde.size());
    AuxiliaryQuantities aux;
    aux.t_diag.reserve(spec.d.size());
    aux.t_tilde_diag.reserve(spec.d_tilde.size());

    double trace_dt_check = 0.0;
    for (double di : spec.d) {
        const double tii = 1.0 / (1.0 + fp.t * fp.delta_tilde * di);
        aux.t_diag.push_back(tii);
        aux.gamma += di * di * tii * tii;
        trace_dt_check += di * tii;
    }
    for (double dj : spec.d_tilde) {
        const double tjj = 1.0 / (1.0 + fp.t * fp.delta * dj);
        aux.t_tilde_diag.push_back(tjj);
        aux.gamma_tilde += dj * dj * tjj * tjj;
    }
    aux.gamma /= k;
    aux.gamma_tilde /= k;

    // Definitional consistency: (1/K) Tr(D T) must reproduce delta.
    if (std::abs(trace_dt_check / k - fp.delta) > 10.0 * fp.tolerance) {
        std::ostringstream msg;
        msg << "auxiliary_quantities: (1/K) Tr(DT) = " << trace_dt_check / k
            << " is inconsistent with delta = " << fp.delta;
        throw NumericError(msg.str());
    }
    const double stab = fp.t * fp.t * aux.gamma * aux.gamma_tilde;
    if (!(stab < 1.0)) {
        std::ostringstream msg;
        msg << "auxiliary_quantities: stability violated, t^2*gamma*gamma_tilde = " << stab
            << " >= 1";
        throw NumericError(msg.str());
    }
    return aux;
}

// Assembles the moment formulas from an already-solved fixed point. rho must
// equal 1/fp.t.
inline AsymptoticMoments asymptotic_moments(const SpectrumPair& spec, const FixedPointSolution& fp,
                                            const AuxiliaryQuantities& aux, double rho,
                                            double p0) {
    const int k = static_cast<int>(spec.d_tilde.size());
    const double rho2 = rho * rho;
    const double gg = aux.gamma * aux.gamma_tilde;
    const double stability_gap = rho2 - gg;  // positive by the aux guard

    double tr_d3t3 = 0.0;
    for (std::size_t i = 0; i < spec.d.size(); ++i) {
        const double x = spec.d[i] * aux.t_diag[i];
        tr_d3t3 += x * x * x;
    }
    double tr_dt3tt3 = 0.0;
    for (std::size_t j = 0; j < spec.d_tilde.size(); ++j) {
        const double x = spec.d_tilde[j] * aux.t_tilde_diag[j];
        tr_dt3tt3 += x * x * x;
    }

    AsymptoticMoments m;
    m.mean_norm = fp.delta / rho;
    m.omega_sq = aux.gamma / rho2 * (gg / stability_gap + 1.0);
    const double gap3 = stability_gap * stability_gap * stability_gap;
    m.nu = 2.0 * rho2 * rho / (k * gap3) *
           (tr_d3t3 - aux.gamma * aux.gamma * aux.gamma / (rho2 * rho) * tr_dt3tt3);
    if (!(m.nu > 0.0) || !std::isfinite(m.nu)) {
        std::ostringstream msg;
        msg << "asymptotic_moments: third asymptotic moment is not positive (nu = " << m.nu
            << "); the generalized Gamma fit is undefined here";
        throw NumericError(msg.str());
    }
    m.mean = p0 * m.mean_norm;
    m.variance = p0 * p0 * m.omega_sq / k;
    m.third_central = p0 * p0 * p0 * m.nu / (static_cast<double>(k) * k);
    return m;
}

inline AsymptoticMoments asymptotic_moments(const SpectrumPair& spec, double rho, double p0,
                                            double tol = 1e-12) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ValidationError("asymptotic_moments: rho must be positive and finite");
    }
    if (!(p0 > 0.0) || !std::isfinite(p0)) {
        throw ValidationError("asymptotic_moments: p0 must be positive and finite");
    }
    const FixedPointSolution fp = solve_fixed_point(spec, 1.0 / rho, tol);
    const AuxiliaryQuantities aux = auxiliary_quantities(spec, fp);
    return asymptotic_moments(spec, fp, aux, rho, p0);
}

inline AsymptoticMoments asymptotic_moments(const SystemConfig& config) {
    const SpectrumPair spec = validate_config(config);
    return asymptotic_moments(spec, config.rho, config.p0);
}

}  // namespace snrlab
