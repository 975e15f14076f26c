// snrlab: analytic moments, generalized-Gamma fit, BER and outage curves for
// the LMMSE output SNR on receive-correlated channels, with a built-in Monte
// Carlo validator. Subcommands: moments, ber, outage, validate.

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "snrlab/snrlab.hpp"

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw snrlab::ValidationError("cannot open '" + tmp + "' for writing");
        }
        out << content;
        if (!out) {
            throw snrlab::ValidationError("failed while writing '" + tmp + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

struct ModelFlags {
    int n = 0;
    int k = 0;
    double a = 0.0;
    double snr_db = 0.0;
    double p0 = 1.0;
    std::string powers = "preset";
};

struct OutputFlags {
    std::string out;
    bool as_json = false;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SNRLAB_SEED")) {
        try {
            std::size_t used = 0;
            const std::string text(env);
            const std::uint64_t v = std::stoull(text, &used);
            if (used != text.size()) {
                throw std::invalid_argument(text);
            }
            return v;
        } catch (const std::exception&) {
            throw snrlab::ValidationError(
                std::string("SNRLAB_SEED must be a 64-bit unsigned integer, got '") + env + "'");
        }
    }
    return 42;
}

// --powers is either the literal "preset" or a path to a file of multiples of
// P = p0, one per line.
snrlab::SystemConfig resolve_config(const ModelFlags& mf, std::string* powers_source) {
    snrlab::SystemConfig config;
    config.n_rx = mf.n;
    config.k_users = mf.k;
    config.corr_a = mf.a;
    config.p0 = mf.p0;
    config.rho = mf.p0 * std::pow(10.0, -mf.snr_db / 10.0);
    if (mf.powers == "preset") {
        config.powers = snrlab::power_profile(mf.k, mf.p0);
        *powers_source = "preset";
    } else {
        config.powers = snrlab::read_power_file(mf.powers);
        for (auto& p : config.powers) {
            p *= mf.p0;
        }
        *powers_source = mf.powers;
    }
    return config;
}

json manifest_base(const std::string& command, const ModelFlags& mf,
                   const snrlab::SystemConfig& config, const std::string& powers_source,
                   std::uint64_t seed, bool as_json) {
    json m;
    m["command"] = command;
    m["tool"] = "snrlab";
    m["version"] = snrlab::version;
    m["timestamp"] = utc_timestamp();
    m["seed"] = seed;
    m["json"] = as_json;
    m["config"] = {{"n", config.n_rx},        {"k", config.k_users},
                   {"a", config.corr_a},      {"snr_db", mf.snr_db},
                   {"p0", config.p0},         {"rho", config.rho},
                   {"powers", config.powers}, {"powers_source", powers_source}};
    return m;
}

// Payload goes to stdout or, with --out, to the file plus a sidecar
// <out>.manifest.json. The payload itself carries no timestamp, so a rerun
// with the same flags and seed is byte-identical.
void emit(const OutputFlags& out, const std::string& payload, const json& manifest) {
    if (out.out.empty()) {
        std::cout << payload;
        return;
    }
    write_atomic(out.out, payload);
    write_atomic(out.out + ".manifest.json", manifest.dump(2) + "\n");
}

void add_model_flags(CLI::App* cmd, ModelFlags& mf, bool with_snr_db) {
    cmd->add_option("--n", mf.n, "receive antennas N")->required();
    cmd->add_option("--k", mf.k, "interfering users K")->required();
    cmd->add_option("--a", mf.a, "receive correlation coefficient in [0, 1)")->required();
    if (with_snr_db) {
        cmd->add_option("--snr-db", mf.snr_db, "input SNR p0/rho in dB")->required();
    }
    cmd->add_option("--p0", mf.p0, "power of the user of interest");
    cmd->add_option("--powers", mf.powers, "'preset' or a power file (multiples of P = p0)");
}

void add_output_flags(CLI::App* cmd, OutputFlags& out) {
    cmd->add_option("--out", out.out, "write the table here (plus <out>.manifest.json)");
    cmd->add_flag("--json", out.as_json, "emit JSON with full double precision");
}

std::vector<double> step_grid(double lo, double hi, double step, const char* what) {
    if (!(step > 0.0)) {
        throw snrlab::ValidationError(std::string(what) + ": step must be positive");
    }
    if (hi < lo) {
        throw snrlab::ValidationError(std::string(what) + ": max must be >= min");
    }
    std::vector<double> grid;
    const double slack = 1e-9 * std::max(1.0, std::abs(hi));
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + slack) {
            break;
        }
        grid.push_back(v);
    }
    return grid;
}

std::vector<double> count_grid(double lo, double hi, int points) {
    if (points < 1) {
        throw snrlab::ValidationError("--points must be >= 1");
    }
    if (points == 1) {
        return {lo};
    }
    if (hi < lo) {
        throw snrlab::ValidationError("--threshold-max must be >= --threshold-min");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

void run_moments(const ModelFlags& mf, const OutputFlags& out, std::uint64_t seed) {
    std::string powers_source;
    const auto config = resolve_config(mf, &powers_source);
    const auto spec = snrlab::validate_config(config);
    const auto fp = snrlab::solve_fixed_point(spec, 1.0 / config.rho);
    const auto aux = snrlab::auxiliary_quantities(spec, fp);
    const auto m = snrlab::asymptotic_moments(spec, fp, aux, config.rho, config.p0);
    const auto fit = snrlab::fit_from_moments(m.mean, m.variance, m.third_central);

    const std::pair<const char*, double> rows[] = {
        {"delta", fp.delta},       {"delta_tilde", fp.delta_tilde},
        {"gamma", aux.gamma},      {"gamma_tilde", aux.gamma_tilde},
        {"omega_sq", m.omega_sq},  {"nu", m.nu},
        {"mean", m.mean},          {"variance", m.variance},
        {"third_central", m.third_central},
        {"alpha", fit.alpha},      {"b", fit.b},
        {"xi", fit.xi},
    };

    std::string payload;
    if (out.as_json) {
        json j;
        for (const auto& [key, value] : rows) {
            j[key] = value;
        }
        payload = j.dump(2) + "\n";
    } else {
        payload = "key,value\n";
        for (const auto& [key, value] : rows) {
            payload += key;
            payload += ',';
            payload += num(value);
            payload += '\n';
        }
    }
    emit(out, payload, manifest_base("moments", mf, config, powers_source, seed, out.as_json));
}

void run_ber(const ModelFlags& mf, const OutputFlags& out, double snr_min, double snr_max,
             double snr_step, std::optional<int> trials, std::uint64_t seed) {
    ModelFlags base = mf;
    base.snr_db = snr_min;
    std::string powers_source;
    const auto config = resolve_config(base, &powers_source);
    const auto grid = step_grid(snr_min, snr_max, snr_step, "--snr-step");

    std::optional<snrlab::MonteCarloSpec> mc;
    if (trials) {
        mc = snrlab::MonteCarloSpec{*trials, seed, 0};
    }
    const auto rows = snrlab::ber_curve(config, grid, {}, mc);

    std::string payload;
    json jrows = json::array();
    if (!out.as_json) {
        payload = "snr_db,ber_theory,ber_empirical,trials,seed\n";
    }
    for (const auto& r : rows) {
        if (out.as_json) {
            json jr;
            jr["snr_db"] = r.snr_db;
            jr["ber_theory"] = r.ber_theory;
            jr["ber_empirical"] = r.ber_empirical ? json(*r.ber_empirical) : json(nullptr);
            jr["trials"] = trials ? json(*trials) : json(nullptr);
            jr["seed"] = trials ? json(seed) : json(nullptr);
            jrows.push_back(jr);
        } else {
            payload += num(r.snr_db);
            payload += ',';
            payload += num(r.ber_theory);
            payload += ',';
            if (r.ber_empirical) {
                payload += num(*r.ber_empirical);
                payload += ',';
                payload += std::to_string(*trials);
                payload += ',';
                payload += std::to_string(seed);
            } else {
                payload += ",,";
            }
            payload += '\n';
        }
    }
    if (out.as_json) {
        payload = jrows.dump(2) + "\n";
    }

    json manifest = manifest_base("ber", base, config, powers_source, seed, out.as_json);
    manifest["grid"] = {{"snr_min", snr_min}, {"snr_max", snr_max}, {"snr_step", snr_step}};
    if (trials) {
        manifest["trials"] = *trials;
    }
    emit(out, payload, manifest);
}

void run_outage(const ModelFlags& mf, const OutputFlags& out, double th_min, double th_max,
                int points, const std::string& grid_kind, std::optional<int> trials,
                std::uint64_t seed) {
    std::string powers_source;
    const auto config = resolve_config(mf, &powers_source);
    std::vector<double> grid = count_grid(th_min, th_max, points);
    if (grid_kind == "db") {
        for (auto& v : grid) {
            v = std::pow(10.0, v / 10.0);
        }
    } else if (grid_kind != "linear") {
        throw snrlab::ValidationError("--grid must be 'linear' or 'db'");
    }

    std::optional<snrlab::MonteCarloSpec> mc;
    if (trials) {
        mc = snrlab::MonteCarloSpec{*trials, seed, 0};
    }
    const auto rows = snrlab::outage_curve(config, grid, mc);

    std::string payload;
    json jrows = json::array();
    if (!out.as_json) {
        payload = "threshold,pout_saddle,pout_empirical\n";
    }
    for (const auto& r : rows) {
        if (out.as_json) {
            json jr;
            jr["threshold"] = r.threshold;
            jr["pout_saddle"] = r.pout_saddle;
            jr["pout_empirical"] = r.pout_empirical ? json(*r.pout_empirical) : json(nullptr);
            jrows.push_back(jr);
        } else {
            payload += num(r.threshold);
            payload += ',';
            payload += num(r.pout_saddle);
            payload += ',';
            if (r.pout_empirical) {
                payload += num(*r.pout_empirical);
            }
            payload += '\n';
        }
    }
    if (out.as_json) {
        payload = jrows.dump(2) + "\n";
    }

    json manifest = manifest_base("outage", mf, config, powers_source, seed, out.as_json);
    manifest["grid"] = {{"threshold_min", th_min},
                        {"threshold_max", th_max},
                        {"points", points},
                        {"kind", grid_kind}};
    if (trials) {
        manifest["trials"] = *trials;
    }
    emit(out, payload, manifest);
}

void run_validate(const ModelFlags& mf, const OutputFlags& out, int trials, std::uint64_t seed) {
    std::string powers_source;
    const auto config = resolve_config(mf, &powers_source);
    const auto m = snrlab::asymptotic_moments(config);
    const auto samples = snrlab::run_trials(config, trials, seed);
    const auto e = snrlab::empirical_moments(samples);

    struct Row {
        const char* moment;
        double asymptotic;
        double empirical;
    };
    const Row rows[] = {{"first", m.mean, e.mean},
                        {"second", m.variance, e.variance},
                        {"third", m.third_central, e.third_central}};

    std::string payload;
    if (out.as_json) {
        json jrows = json::array();
        for (const auto& r : rows) {
            jrows.push_back({{"moment", r.moment},
                             {"asymptotic", r.asymptotic},
                             {"empirical", r.empirical},
                             {"relative_error", std::abs(r.asymptotic - r.empirical) /
                                                    std::abs(r.empirical)}});
        }
        payload = jrows.dump(2) + "\n";
    } else {
        payload = "moment,asymptotic,empirical,relative_error\n";
        for (const auto& r : rows) {
            payload += r.moment;
            payload += ',';
            payload += num(r.asymptotic);
            payload += ',';
            payload += num(r.empirical);
            payload += ',';
            payload += num(std::abs(r.asymptotic - r.empirical) / std::abs(r.empirical));
            payload += '\n';
        }
    }

    json manifest = manifest_base("validate", mf, config, powers_source, seed, out.as_json);
    manifest["trials"] = trials;
    emit(out, payload, manifest);
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"LMMSE output-SNR analytics on receive-correlated MIMO channels"};
    app.require_subcommand(1);

    ModelFlags mf;
    OutputFlags out;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (default: $SNRLAB_SEED or 42)")
            ->each([&](const std::string&) { seed_given = true; });
    };

    auto* moments = app.add_subcommand("moments", "asymptotic moments and generalized-Gamma fit");
    add_model_flags(moments, mf, true);
    add_output_flags(moments, out);
    add_seed(moments);

    auto* ber = app.add_subcommand("ber", "BER curve over an input-SNR sweep");
    double snr_min = 0.0;
    double snr_max = 0.0;
    double snr_step = 1.0;
    std::optional<int> ber_trials;
    add_model_flags(ber, mf, false);
    ber->add_option("--snr-min", snr_min, "sweep start, dB")->required();
    ber->add_option("--snr-max", snr_max, "sweep end, dB")->required();
    ber->add_option("--snr-step", snr_step, "sweep step, dB")->required();
    ber->add_option("--trials", ber_trials, "Monte Carlo trials per grid point");
    add_output_flags(ber, out);
    add_seed(ber);

    auto* outage = app.add_subcommand("outage", "outage probability over a threshold grid");
    double th_min = 0.0;
    double th_max = 0.0;
    int th_points = 1;
    std::string grid_kind = "linear";
    std::optional<int> outage_trials;
    add_model_flags(outage, mf, true);
    outage->add_option("--threshold-min", th_min, "first threshold")->required();
    outage->add_option("--threshold-max", th_max, "last threshold")->required();
    outage->add_option("--points", th_points, "number of grid points")->required();
    outage->add_option("--grid", grid_kind, "'linear' (default) or 'db'");
    outage->add_option("--trials", outage_trials, "Monte Carlo trials for the empirical column");
    add_output_flags(outage, out);
    add_seed(outage);

    auto* validate = app.add_subcommand("validate", "asymptotic vs empirical moment report");
    int validate_trials = 0;
    add_model_flags(validate, mf, true);
    validate->add_option("--trials", validate_trials, "Monte Carlo trials")->required();
    add_output_flags(validate, out);
    add_seed(validate);

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }
        if (!seed_given) {
            seed = default_seed();
        }
        if (moments->parsed()) {
            run_moments(mf, out, seed);
        } else if (ber->parsed()) {
            run_ber(mf, out, snr_min, snr_max, snr_step, ber_trials, seed);
        } else if (outage->parsed()) {
            run_outage(mf, out, th_min, th_max, th_points, grid_kind, outage_trials, seed);
        } else if (validate->parsed()) {
            run_validate(mf, out, validate_trials, seed);
        }
        return 0;
    } catch (const snrlab::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const snrlab::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
