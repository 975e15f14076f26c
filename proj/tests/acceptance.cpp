// Acceptance suite: one line per criterion, nonzero exit code when any
// criterion fails. Monte Carlo criteria run at the canonical seed 42.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "snrlab/snrlab.hpp"
#include "support/cli_runner.hpp"
#include "support/oracles.hpp"

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
    bool pass = true;
    std::string detail;
    double seconds = 0.0;
};

std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

snrlab::SystemConfig preset_config(int n, int k, double a, double snr_db, double p0 = 1.0) {
    snrlab::SystemConfig c;
    c.n_rx = n;
    c.k_users = k;
    c.corr_a = a;
    c.p0 = p0;
    c.rho = p0 * std::pow(10.0, -snr_db / 10.0);
    c.powers = snrlab::power_profile(k, p0);
    return c;
}

snrlab::GenGammaParams fitted(const snrlab::SystemConfig& c) {
    const auto m = snrlab::asymptotic_moments(c);
    return snrlab::fit_from_moments(m.mean, m.variance, m.third_central);
}

// criterion 1: equal-power uncorrelated fixed point against the closed form
// delta = (-1 + sqrt(1 + 4t)) / (2t).
Outcome criterion1() {
    Outcome o;
    double worst = 0.0;
    for (double t : {0.1, 1.0, 10.0}) {
        snrlab::SystemConfig c = preset_config(8, 8, 0.0, 0.0);
        c.powers.assign(8, 1.0);
        c.rho = 1.0 / t;
        const auto spec = snrlab::validate_config(c);
        const auto fp = snrlab::solve_fixed_point(spec, t, 1e-14);
        const double closed = (-1.0 + std::sqrt(1.0 + 4.0 * t)) / (2.0 * t);
        worst = std::max(worst, std::abs(fp.delta - closed));
    }
    o.pass = worst <= 1e-10;
    o.detail = fmt("max |delta - closed form| = %.2e (tol 1e-10)", worst);
    return o;
}

// criterion 2: for xi = 1 the saddle-point outage must track the exact
// regularized incomplete-gamma CDF within 2% over CDF in [0.05, 0.95] for
// alpha in {1, 2, 4, 8}, and the BER quadrature must hit the closed-form
// exponential-SNR BER to 1e-6.
Outcome criterion2() {
    Outcome o;
    double worst_rel = 0.0;
    double worst_alpha = 0.0;
    for (double alpha : {1.0, 2.0, 4.0, 8.0}) {
        const snrlab::GenGammaParams p{alpha, 1.0, 1.0};
        for (double q = 0.05; q <= 0.9501; q += 0.005) {
            const double y = oracles::gammp_inv(alpha, q);
            const double exact = oracles::gammp(alpha, y);
            const double rel = std::abs(snrlab::outage_probability(p, y) - exact) / exact;
            if (rel > worst_rel) {
                worst_rel = rel;
                worst_alpha = alpha;
            }
        }
    }
    double worst_ber = 0.0;
    for (double b : {0.5, 2.0, 8.0, 31.6227766}) {
        const double closed = 0.5 * (1.0 - std::sqrt((b / 2.0) / (1.0 + b / 2.0)));
        worst_ber = std::max(worst_ber,
                             std::abs(snrlab::ber_qpsk({1.0, b, 1.0}) - closed));
    }
    o.pass = worst_rel <= 0.02 && worst_ber <= 1e-6;
    o.detail = fmt("saddle worst rel err %.4f at alpha=%g (tol 0.02); BER worst abs err %.1e "
                   "(tol 1e-6)",
                   worst_rel, worst_alpha, worst_ber);
    return o;
}

// criterion 3: K' and K'' against central differences of K over a 100-point
// grid including the near-Gamma window.
Outcome criterion3() {
    Outcome o;
    double worst = 0.0;
    int points = 0;
    for (double alpha : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        for (double b : {0.2, 1.0, 2.0, 5.0, 10.0}) {
            for (double xi : {0.5, 0.999, 1.001, 2.0}) {
                const snrlab::GenGammaParams p{alpha, b, xi};
                const double t = -0.3 / b;
                const double h = 1e-5 / b;
                const auto c = snrlab::cumulants(p, t);
                const double k1_fd =
                    (snrlab::cumulants(p, t + h).k - snrlab::cumulants(p, t - h).k) / (2.0 * h);
                const double k2_fd =
                    (snrlab::cumulants(p, t + h).k1 - snrlab::cumulants(p, t - h).k1) / (2.0 * h);
                worst = std::max(worst, std::abs(c.k1 - k1_fd) / std::abs(k1_fd));
                worst = std::max(worst, std::abs(c.k2 - k2_fd) / std::abs(k2_fd));
                ++points;
            }
        }
    }
    o.pass = worst <= 1e-6 && points == 100;
    o.detail = fmt("worst relative error %.2e over %d grid points (tol 1e-6)", worst, points);
    return o;
}

// criterion 4: asymptotic vs empirical moments at the figure configurations.
Outcome criterion4() {
    Outcome o;
    const auto square = preset_config(8, 8, 0.3, 15.0);
    const auto m8 = snrlab::asymptotic_moments(square);
    const auto e8 = snrlab::empirical_moments(snrlab::run_trials(square, 20000, kSeed));
    const double r1 = std::abs(m8.mean - e8.mean) / e8.mean;
    const double r2 = std::abs(m8.variance - e8.variance) / e8.variance;
    const double r3 = std::abs(m8.third_central - e8.third_central) / std::abs(e8.third_central);

    const auto tall = preset_config(16, 8, 0.3, 15.0);
    const auto m16 = snrlab::asymptotic_moments(tall);
    const auto e16 = snrlab::empirical_moments(snrlab::run_trials(tall, 20000, kSeed));
    const double t1 = std::abs(m16.mean - e16.mean) / e16.mean;
    const double t2 = std::abs(m16.variance - e16.variance) / e16.variance;

    o.pass = r1 < 0.02 && r2 < 0.10 && r3 < 0.30 && t1 < 0.02 && t2 < 0.10;
    o.detail = fmt("N=K=8 rel err (%.4f, %.4f, %.4f) vs (<0.02, <0.10, <0.30); "
                   "N=2K=16 (%.4f, %.4f) vs (<0.02, <0.10)",
                   r1, r2, r3, t1, t2);
    return o;
}

// criterion 5: K^2-scaling of the empirical third central moment of beta/p0.
Outcome criterion5() {
    Outcome o;
    double scaled[2];
    int idx = 0;
    for (int k : {8, 16}) {
        const auto c = preset_config(k, k, 0.3, 15.0);
        const auto e = snrlab::empirical_moments(snrlab::run_trials(c, 50000, kSeed));
        scaled[idx++] = static_cast<double>(k) * k * e.third_central / std::pow(c.p0, 3.0);
    }
    const double ratio = scaled[0] / scaled[1];
    o.pass = ratio >= 0.7 && ratio <= 1.4;
    o.detail = fmt("K^2 * third-moment ratio K=8 vs K=16: %.3f (must lie in [0.7, 1.4])", ratio);
    return o;
}

// criterion 6: theoretical BER within 3 binomial standard errors of the
// 2000-trial empirical BER at every grid point, both curves strictly
// decreasing; N=K=4, a in {0, 0.9}, 0..20 dB.
Outcome criterion6() {
    Outcome o;
    double worst_pull = 0.0;
    std::string worst_at = "-";
    bool decreasing = true;
    for (double a : {0.0, 0.9}) {
        double prev_theory = 1.0;
        double prev_emp = 1.0;
        for (double snr_db = 0.0; snr_db <= 20.0; snr_db += 5.0) {
            const auto c = preset_config(4, 4, a, snr_db);
            const double theory = snrlab::ber_qpsk(fitted(c));
            const double emp = snrlab::empirical_ber(snrlab::run_trials(c, 2000, kSeed));
            const double se = std::sqrt(std::max(emp * (1.0 - emp), 1e-300) / 2000.0);
            const double pull = std::abs(theory - emp) / (3.0 * se);
            if (pull > worst_pull) {
                worst_pull = pull;
                worst_at = fmt("a=%g, %g dB", a, snr_db);
            }
            decreasing = decreasing && theory < prev_theory && emp < prev_emp;
            prev_theory = theory;
            prev_emp = emp;
        }
    }
    o.pass = worst_pull <= 1.0 && decreasing;
    o.detail = fmt("worst |theory-empirical| = %.2fx the 3-SE allowance at %s%s", worst_pull,
                   worst_at.c_str(), decreasing ? "" : "; monotonicity violated");
    return o;
}

// criterion 7: |saddle - empirical| <= max(0.03, 3 SE) wherever the empirical
// outage lies in [0.1, 0.9]; N=K=4 and N=2K=4, a in {0, 0.9}, 15 dB.
Outcome criterion7() {
    Outcome o;
    double worst_excess = -1.0;
    std::string worst_at = "-";
    for (int k : {4, 2}) {
        for (double a : {0.0, 0.9}) {
            const auto c = preset_config(4, k, a, 15.0);
            const auto fit = fitted(c);
            auto samples = snrlab::run_trials(c, 2000, kSeed);
            std::vector<double> sorted = samples.samples;
            std::sort(sorted.begin(), sorted.end());
            for (int i = 0; i <= 16; ++i) {
                const double level = 0.1 + 0.05 * i;
                const double y =
                    sorted[static_cast<std::size_t>(level * (sorted.size() - 1))];
                const double emp = snrlab::empirical_outage(samples, y);
                if (emp < 0.1 || emp > 0.9) {
                    continue;
                }
                const double saddle = snrlab::outage_probability(fit, y);
                const double se = std::sqrt(emp * (1.0 - emp) / 2000.0);
                const double allowance = std::max(0.03, 3.0 * se);
                const double excess = std::abs(saddle - emp) - allowance;
                if (excess > worst_excess) {
                    worst_excess = excess;
                    worst_at = fmt("N=4 K=%d a=%g", k, a);
                }
            }
        }
    }
    o.pass = worst_excess <= 0.0;
    o.detail = fmt("worst |saddle-empirical| excess over max(0.03, 3 SE): %+.4f at %s",
                   worst_excess, worst_at.c_str());
    return o;
}

// criterion 8: byte-identical numeric output when a CLI command is rerun with
// an identical manifest.
Outcome criterion8() {
    Outcome o;
    cli_runner::Scratch scratch;
    const std::string cli = SNRLAB_CLI_PATH;
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"moments", "moments --n 4 --k 4 --a 0.5 --snr-db 10"},
        {"moments_json", "moments --n 4 --k 4 --a 0.5 --snr-db 10 --json"},
        {"ber", "ber --n 4 --k 4 --a 0.9 --snr-min 0 --snr-max 10 --snr-step 5 --trials 500 "
                "--seed 7"},
        {"outage", "outage --n 4 --k 2 --a 0.9 --snr-db 15 --threshold-min 0.5 "
                   "--threshold-max 30 --points 10 --trials 500 --seed 7"},
        {"validate", "validate --n 4 --k 4 --a 0.3 --snr-db 15 --trials 500 --seed 7"},
        {"validate_json",
         "validate --n 4 --k 4 --a 0.3 --snr-db 15 --trials 500 --seed 7 --json"},
    };
    int mismatches = 0;
    for (const auto& [name, flags] : cases) {
        const auto out1 = scratch.path(name + "_1").string();
        const auto out2 = scratch.path(name + "_2").string();
        const auto r1 = cli_runner::run(cli, flags + " --out " + out1, scratch);
        const auto r2 = cli_runner::run(cli, flags + " --out " + out2, scratch);
        if (r1.exit_code != 0 || r2.exit_code != 0 ||
            cli_runner::read_file(out1) != cli_runner::read_file(out2) ||
            cli_runner::read_file(out1).empty()) {
            ++mismatches;
            o.detail += (o.detail.empty() ? "" : ", ") + name;
        }
    }
    o.pass = mismatches == 0;
    o.detail = o.pass ? fmt("%zu command pairs byte-identical", cases.size())
                      : ("mismatching commands: " + o.detail);
    return o;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        double budget_s;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "fixed-point closed form", 1.0, criterion1},
        {2, "Gamma consistency chain (saddle CDF + exponential BER)", 5.0, criterion2},
        {3, "cumulant derivatives vs finite differences", 0.0, criterion3},
        {4, "moment validation vs Monte Carlo (N=K=8, N=2K=16)", 60.0, criterion4},
        {5, "third-moment K^2 scaling", 0.0, criterion5},
        {6, "BER curve within 3 SE, strictly decreasing", 30.0, criterion6},
        {7, "outage curve vs empirical CDF band", 0.0, criterion7},
        {8, "CLI determinism (byte-identical reruns)", 0.0, criterion8},
    };

    int failures = 0;
    for (const auto& entry : entries) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o = entry.fn();
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (entry.budget_s > 0.0 && o.seconds >= entry.budget_s) {
            o.pass = false;
            o.detail += fmt("; runtime %.1f s exceeded budget %.0f s", o.seconds, entry.budget_s);
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] criterion %d: %s (%s) [%.2f s]\n", o.pass ? "PASS" : "FAIL", entry.id,
                    entry.name, o.detail.c_str(), o.seconds);
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
