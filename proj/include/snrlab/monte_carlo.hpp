#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace snrlab {

struct SnrSampleSet {
    std::vector<double> samples;
    SystemConfig config;
    std::uint64_t seed = 0;
    int trials = 0;
};

struct EmpiricalMoments {
    double mean = 0.0;
    double variance = 0.0;
    double third_central = 0.0;
};

// One draw of the exact finite-dimensional output SNR
//   beta = (p0*t/K) z* D^(1/2) M^-1 D^(1/2) z,
//   M = (t/K) D^(1/2) Z Dt Z* D^(1/2) + I,  t = 1/rho,
// with Z an N x K and z an N-vector of standard complex Gaussians. One HPD
// solve per trial; M >= I so the factorization cannot fail. The spectrum is
// trusted as given, which lets tests drive degenerate profiles (e.g. all-zero
// interferer powers) directly.
inline double sample_snr(const SpectrumPair& spec, const SystemConfig& config, RngStream& rng) {
    const int n = static_cast<int>(spec.d.size());
    const int k = static_cast<int>(spec.d_tilde.size());
    if (n < 1 || k < 1) {
        throw ValidationError("sample_snr: empty spectrum");
    }
    const double t = 1.0 / config.rho;

    // Rows of A = D^(1/2) Z, drawn row-major.
    std::vector<cdouble> a(static_cast<std::size_t>(n) * k);
    for (int i = 0; i < n; ++i) {
        const double sd = std::sqrt(spec.d[static_cast<std::size_t>(i)]);
        for (int j = 0; j < k; ++j) {
            a[static_cast<std::size_t>(i) * k + j] = sd * rng.next_complex_gaussian();
        }
    }
    ComplexVector v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] =
            std::sqrt(spec.d[static_cast<std::size_t>(i)]) * rng.next_complex_gaussian();
    }

    const double scale = t / k;
    HermitianMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            cdouble sum = 0.0;
            const cdouble* ai = &a[static_cast<std::size_t>(i) * k];
            const cdouble* aj = &a[static_cast<std::size_t>(j) * k];
            for (int l = 0; l < k; ++l) {
                sum += ai[l] * spec.d_tilde[static_cast<std::size_t>(l)] * std::conj(aj[l]);
            }
            m(i, j) = scale * sum;
            m(j, i) = scale * std::conj(sum);
        }
        m(i, i) += 1.0;
    }

    const ComplexVector x = CholeskyFactor(m).solve(v);
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
        quad += (std::conj(v[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)]).real();
    }
    const double beta = config.p0 * t / k * quad;
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        std::ostringstream msg;
        msg << "sample_snr: produced a non-positive SNR draw " << beta;
        throw NumericError(msg.str());
    }
    return beta;
}

// Runs `trials` independent draws. Trial i always uses stream id i of `seed`,
// so the sample set is bit-identical for any thread count and any execution
// order.
inline SnrSampleSet run_trials(const SystemConfig& config, int trials, std::uint64_t seed,
                               int threads = 0) {
    if (trials < 1) {
        throw ValidationError("run_trials: trials must be >= 1");
    }
    const SpectrumPair spec = validate_config(config);

    SnrSampleSet set;
    set.samples.resize(static_cast<std::size_t>(trials));
    set.config = config;
    set.seed = seed;
    set.trials = trials;

    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) {
        n_threads = 1;
    }
    if (n_threads > trials) {
        n_threads = trials;
    }

    if (n_threads == 1) {
        for (int i = 0; i < trials; ++i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            set.samples[static_cast<std::size_t>(i)] = sample_snr(spec, config, rng);
        }
        return set;
    }

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    constexpr int chunk = 64;
    auto worker = [&]() {
        try {
            for (;;) {
                const int begin = next.fetch_add(chunk);
                if (begin >= trials) {
                    return;
                }
                const int end = std::min(begin + chunk, trials);
                for (int i = begin; i < end; ++i) {
                    RngStream rng(seed, static_cast<std::uint64_t>(i));
                    set.samples[static_cast<std::size_t>(i)] = sample_snr(spec, config, rng);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return set;
}

// Plain 1/n sample central moments, matching the empirical-moment convention
// of the validation figures.
inline EmpiricalMoments empirical_moments(const SnrSampleSet& s) {
    const std::size_t n = s.samples.size();
    if (n < 2) {
        throw ValidationError("empirical_moments: need at least 2 samples");
    }
    EmpiricalMoments m;
    for (double v : s.samples) {
        m.mean += v;
    }
    m.mean /= static_cast<double>(n);
    for (double v : s.samples) {
        const double c = v - m.mean;
        m.variance += c * c;
        m.third_central += c * c * c;
    }
    m.variance /= static_cast<double>(n);
    m.third_central /= static_cast<double>(n);
    return m;
}

inline double empirical_ber(const SnrSampleSet& s) {
    if (s.samples.empty()) {
        throw ValidationError("empirical_ber: empty sample set");
    }
    double acc = 0.0;
    for (double beta : s.samples) {
        acc += q_function(std::sqrt(beta));
    }
    return acc / static_cast<double>(s.samples.size());
}

inline double empirical_outage(const SnrSampleSet& s, double y) {
    if (s.samples.empty()) {
        throw ValidationError("empirical_outage: empty sample set");
    }
    std::size_t count = 0;
    for (double beta : s.samples) {
        if (beta < y) {
            ++count;
        }
    }
    return static_cast<double>(count) / static_cast<double>(s.samples.size());
}

}  // namespace snrlab
