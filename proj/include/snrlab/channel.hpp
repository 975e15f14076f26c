#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace snrlab {

// Full description of one simulated uplink: N receive antennas, K interferers
// with powers d_tilde (absolute), noise level rho, user power p0, exponential
// receive correlation coefficient a.
struct SystemConfig {
    int n_rx = 0;
    int k_users = 0;
    double rho = 0.0;
    double p0 = 1.0;
    double corr_a = 0.0;
    std::vector<double> powers;
};

// The only channel statistics the analytics consume: the spectrum of the
// correlation matrix and the interferer power profile.
struct SpectrumPair {
    std::vector<double> d;        // eigenvalues of Psi, ascending
    std::vector<double> d_tilde;  // diagonal of the interferer power matrix
};

// Psi(i, j) = sqrt(K/N) * a^|i-j|, real symmetric Toeplitz, positive definite
// for 0 <= a < 1.
inline HermitianMatrix build_correlation_matrix(int n, int k, double a) {
    if (n < 1 || k < 1) {
        throw ValidationError("build_correlation_matrix: n and k must be >= 1");
    }
    if (!(a >= 0.0 && a < 1.0)) {
        std::ostringstream msg;
        msg << "build_correlation_matrix: corr_a = " << a << " outside [0, 1)";
        throw ValidationError(msg.str());
    }
    const double scale = std::sqrt(static_cast<double>(k) / n);
    HermitianMatrix psi(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            psi(i, j) = scale * std::pow(a, std::abs(i - j));
        }
    }
    return psi;
}

// Preset interferer power profiles keyed on K, in ascending class order.
// K=2 and K=4 are the literal lists; K in {8, 16, 32} spreads the five power
// classes {P, 2P, 4P, 8P, 16P} with relative frequencies 1/8, 1/4, 1/4, 1/8,
// 1/4.
inline std::vector<double> power_profile(int k, double base_power) {
    if (!(base_power > 0.0) || !std::isfinite(base_power)) {
        throw ValidationError("power_profile: base power must be positive and finite");
    }
    const double p = base_power;
    if (k == 2) {
        return {4 * p, 5 * p};
    }
    if (k == 4) {
        return {p, p, 2 * p, 4 * p};
    }
    if (k == 8 || k == 16 || k == 32) {
        const int unit = k / 8;
        const double values[] = {p, 2 * p, 4 * p, 8 * p, 16 * p};
        const int counts[] = {1 * unit, 2 * unit, 2 * unit, 1 * unit, 2 * unit};
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int c = 0; c < 5; ++c) {
            out.insert(out.end(), static_cast<std::size_t>(counts[c]), values[c]);
        }
        return out;
    }
    std::ostringstream msg;
    msg << "power_profile: no preset for K = " << k
        << " (presets exist for K in {2, 4, 8, 16, 32}); supply an explicit power file";
    throw ValidationError(msg.str());
}

// Reads one positive decimal per line. Entries are in units of P = 1, i.e.
// multiples of the power of the user of interest.
inline std::vector<double> read_power_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("read_power_file: cannot open '" + path + "'");
    }
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        double v;
        if (!(ss >> v)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;  // blank line
            }
            std::ostringstream msg;
            msg << "read_power_file: unparsable line " << lineno << " in '" << path << "'";
            throw ValidationError(msg.str());
        }
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << "read_power_file: power on line " << lineno << " must be positive and finite";
            throw ValidationError(msg.str());
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ValidationError("read_power_file: '" + path + "' contains no powers");
    }
    return out;
}

inline SpectrumPair correlation_spectrum(const SystemConfig& config) {
    if (static_cast<int>(config.powers.size()) != config.k_users) {
        std::ostringstream msg;
        msg << "correlation_spectrum: " << config.powers.size() << " powers given for K = "
            << config.k_users << " users";
        throw ValidationError(msg.str());
    }
    SpectrumPair spec;
    spec.d = hermitian_eigenvalues(
        build_correlation_matrix(config.n_rx, config.k_users, config.corr_a));
    spec.d_tilde = config.powers;
    return spec;
}

// Checks the config and the model assumptions behind the asymptotic results:
// bounded spectra (Assumption 1) and strictly positive normalized traces
// (Assumption 2). Returns the spectrum on success.
inline SpectrumPair validate_config(const SystemConfig& config) {
    if (config.n_rx < 1) {
        throw ValidationError("validate_config: n_rx must be >= 1");
    }
    if (config.k_users < 1) {
        throw ValidationError("validate_config: k_users must be >= 1");
    }
    if (!(config.corr_a >= 0.0 && config.corr_a < 1.0)) {
        std::ostringstream msg;
        msg << "validate_config: corr_a = " << config.corr_a << " outside [0, 1)";
        throw ValidationError(msg.str());
    }
    if (!(config.rho > 0.0) || !std::isfinite(config.rho)) {
        throw ValidationError("validate_config: rho must be positive and finite");
    }
    if (!(config.p0 > 0.0) || !std::isfinite(config.p0)) {
        throw ValidationError("validate_config: p0 must be positive and finite");
    }
    if (static_cast<int>(config.powers.size()) != config.k_users) {
        std::ostringstream msg;
        msg << "validate_config: " << config.powers.size() << " powers given for K = "
            << config.k_users << " users";
        throw ValidationError(msg.str());
    }
    for (double p : config.powers) {
        if (!std::isfinite(p)) {
            throw ValidationError("validate_config: Assumption 1 violated, non-finite power");
        }
        if (!(p > 0.0)) {
            std::ostringstream msg;
            msg << "validate_config: Assumption 2 violated, power " << p
                << " makes the normalized trace of D-tilde degenerate";
            throw ValidationError(msg.str());
        }
    }

    SpectrumPair spec = correlation_spectrum(config);
    double trace = 0.0;
    for (double v : spec.d) {
        if (!std::isfinite(v)) {
            throw ValidationError("validate_config: Assumption 1 violated, non-finite eigenvalue");
        }
        trace += v;
    }
    if (!(trace / config.k_users > 0.0)) {
        throw ValidationError(
            "validate_config: Assumption 2 violated, normalized trace of D is not positive");
    }
    return spec;
}

}  // namespace snrlab
