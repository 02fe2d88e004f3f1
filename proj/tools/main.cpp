// Command-line front end: parameter sweeps emitting figure data as CSV or
// JSON lines, plus the validation suite.
//
// Exit codes: 0 success, 1 validation failure, 2 config error,
// 3 numeric failure (positivity/cutoff/convergence).

#include "sqpulse/errors.hpp"
#include "sqpulse/sweep.hpp"
#include "sqpulse/validation.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace sqpulse;

struct SweepCli {
    double r_min = 0.0;
    double r_max = 0.0;
    int r_steps = 1;
    double gamma_tau = 0.1;
    double gamma_tau_min = 0.0;
    double gamma_tau_max = 0.0;
    int gamma_tau_steps = 0;  // > 0 switches to a Gamma*tau grid
    double kappa_over_gamma = 1e-3;
    std::vector<std::string> phis = {"0"};
    std::string theta = "0";
    std::vector<std::string> states = {"g"};
    std::string engine = "unitary";
    std::string rotation_angle = "pi";
    int n_max = 5;
    int steps = 2000;
    std::uint64_t seed = 424242;
    std::string format = "csv";
    std::string out_path;
    bool unsafe_lambda = false;
};

void add_sweep_options(CLI::App* cmd, SweepCli& o) {
    cmd->add_option("--r-min", o.r_min, "Squeezing grid start")->capture_default_str();
    cmd->add_option("--r-max", o.r_max, "Squeezing grid end")->capture_default_str();
    cmd->add_option("--r-steps", o.r_steps, "Number of r grid points")->capture_default_str();
    cmd->add_option("--gamma-tau", o.gamma_tau, "Pulse duration in free-space decay times")
        ->capture_default_str();
    cmd->add_option("--gamma-tau-min", o.gamma_tau_min, "Gamma*tau grid start");
    cmd->add_option("--gamma-tau-max", o.gamma_tau_max, "Gamma*tau grid end");
    cmd->add_option("--gamma-tau-steps", o.gamma_tau_steps,
                    "Number of Gamma*tau grid points (enables the Gamma*tau sweep)");
    cmd->add_option("--kappa-over-gamma", o.kappa_over_gamma,
                    "Paraxial-to-total decay ratio kappa/Gamma")
        ->capture_default_str();
    cmd->add_option("--phi", o.phis, "Squeezing phase(s): radians or pi forms like pi/2")
        ->capture_default_str();
    cmd->add_option("--theta", o.theta, "Field phase (rotation axis angle from y)")
        ->capture_default_str();
    cmd->add_option("--state", o.states,
                    "Initial state(s): g, e, eq:ANGLE or bloch:POLAR:AZIMUTH")
        ->capture_default_str();
    cmd->add_option("--engine", o.engine, "unitary, lindblad or perturbative")
        ->check(CLI::IsMember({"unitary", "lindblad", "perturbative"}))
        ->capture_default_str();
    cmd->add_option("--rotation-angle", o.rotation_angle, "Pulse area")->capture_default_str();
    cmd->add_option("--n-max", o.n_max, "Fock cutoff")->capture_default_str();
    cmd->add_option("--steps", o.steps, "Integration steps per pulse (lindblad)")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed,
                    "Random seed (Monte-Carlo checks only; quantum sweeps are deterministic)")
        ->capture_default_str();
    cmd->add_option("--format", o.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out_path, "Output path (default: stdout)");
    cmd->add_flag("--unsafe-lambda", o.unsafe_lambda,
                  "Allow lambda above lambda_max; such rows are marked, not rejected");
}

SweepConfig build_config(SweepKind kind, const SweepCli& o) {
    if (o.r_steps < 1) {
        throw std::invalid_argument("empty r grid: --r-steps must be >= 1");
    }
    SweepConfig cfg;
    cfg.kind = kind;
    cfg.r_values = linear_grid(o.r_min, o.r_max, o.r_steps);
    if (o.gamma_tau_steps > 0) {
        cfg.gamma_tau_values = linear_grid(o.gamma_tau_min, o.gamma_tau_max, o.gamma_tau_steps);
    } else {
        cfg.gamma_tau_values = {o.gamma_tau};
    }
    cfg.kappa_over_gamma = o.kappa_over_gamma;
    cfg.phi_values.clear();
    for (const std::string& phi : o.phis) cfg.phi_values.push_back(parse_angle(phi));
    cfg.theta = parse_angle(o.theta);
    cfg.rotation_angle = parse_angle(o.rotation_angle);
    cfg.states.clear();
    for (const std::string& state : o.states) cfg.states.push_back(QubitSpec::parse(state));
    cfg.engine = engine_from_string(o.engine);
    cfg.n_max = o.n_max;
    cfg.steps = o.steps;
    cfg.allow_unsafe_lambda = o.unsafe_lambda;
    cfg.validate();
    return cfg;
}

int run_sweep_command(SweepKind kind, const SweepCli& o) {
    const SweepConfig cfg = build_config(kind, o);
    const std::vector<SweepRow> rows = run_sweep(cfg);

    std::size_t unsafe_rows = 0;
    for (const SweepRow& row : rows) {
        if (row.diagnostics.unsafe_lambda) ++unsafe_rows;
    }
    if (unsafe_rows > 0) {
        std::cerr << "warning: " << unsafe_rows << " row(s) exceed lambda_max = "
                  << cfg.lambda_max << " and are marked unsafe_lambda=1\n";
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!o.out_path.empty()) {
        file.open(o.out_path, std::ios::binary);
        if (!file) {
            throw std::invalid_argument("cannot open output file '" + o.out_path + "'");
        }
        out = &file;
    }
    if (o.format == "csv") {
        write_csv(*out, kind, rows);
    } else {
        write_jsonl(*out, kind, rows);
    }
    return 0;
}

int run_validate_command(bool fast, std::uint64_t seed) {
    const std::vector<CheckResult> results = run_validation({fast, seed});
    std::size_t passed = 0;
    for (const CheckResult& check : results) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail
                  << "\n";
        if (check.passed) ++passed;
    }
    std::cout << passed << "/" << results.size() << " checks passed\n";
    return passed == results.size() ? 0 : 1;
}

// Best-effort line number for a token named in a config parse error.
void report_config_error(const std::string& config_path, const std::string& message) {
    std::string token;
    const auto quote = message.find('\'');
    if (quote != std::string::npos) {
        const auto end = message.find('\'', quote + 1);
        if (end != std::string::npos) token = message.substr(quote + 1, end - quote - 1);
    }
    if (token.empty()) {
        const auto space = message.find_last_of(' ');
        if (space != std::string::npos) token = message.substr(space + 1);
    }
    // config items come back section-qualified ("sub.key"); match the bare key
    const auto dot = token.find_last_of('.');
    if (dot != std::string::npos) token = token.substr(dot + 1);
    if (!token.empty() && !config_path.empty()) {
        std::ifstream file(config_path);
        std::string line;
        int line_number = 0;
        while (std::getline(file, line)) {
            ++line_number;
            if (line.find(token) != std::string::npos) {
                std::cerr << config_path << ":" << line_number << ": " << message << "\n";
                return;
            }
        }
    }
    std::cerr << (config_path.empty() ? std::string("config") : config_path) << ": " << message
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulator of single-qubit pi-pulse gates driven by squeezed light: atom-pulse "
        "entanglement (tangle) and gate error, with and without the free-space reservoir."};
    app.require_subcommand(1);
    auto* config_opt =
        app.set_config("--config", "",
                       "Config file (key = value with [subcommand] sections; flags win)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    SweepCli tangle_opts, error_opts, avg_opts;

    CLI::App* tangle_cmd =
        app.add_subcommand("tangle-sweep", "Atom-pulse tangle over a parameter grid");
    add_sweep_options(tangle_cmd, tangle_opts);

    CLI::App* error_cmd =
        app.add_subcommand("error-sweep", "Gate error probability over a parameter grid");
    add_sweep_options(error_cmd, error_opts);

    CLI::App* avg_cmd = app.add_subcommand(
        "avg-error-sweep", "State-averaged gate error with the closed-form overlay column");
    add_sweep_options(avg_cmd, avg_opts);

    bool fast = false;
    std::uint64_t validate_seed = 424242;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Run the full validation suite and report pass/fail");
    validate_cmd->add_flag("--fast", fast, "Skip Monte-Carlo checks");
    validate_cmd->add_option("--seed", validate_seed, "Seed for the stochastic checks")
        ->capture_default_str();

    for (CLI::App* cmd : {tangle_cmd, error_cmd, avg_cmd, validate_cmd}) {
        cmd->configurable();
        cmd->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ConfigError& error) {
        report_config_error(config_opt->as<std::string>(), error.what());
        return 2;
    } catch (const CLI::ParseError& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return 2;
    }

    try {
        if (tangle_cmd->parsed()) return run_sweep_command(SweepKind::tangle, tangle_opts);
        if (error_cmd->parsed()) return run_sweep_command(SweepKind::error, error_opts);
        if (avg_cmd->parsed()) return run_sweep_command(SweepKind::avg_error, avg_opts);
        if (validate_cmd->parsed()) return run_validate_command(fast, validate_seed);
    } catch (const numeric_error& error) {
        std::cerr << "numeric failure: " << error.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    }
    return 0;
}
