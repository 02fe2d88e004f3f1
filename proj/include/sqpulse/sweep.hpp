// Parameter sweeps over (r, Gamma*tau, phi, initial state) grids and CSV /
// JSON-lines serialization. Rows are computed concurrently and emitted in
// deterministic grid order; output is byte-stable for identical config.
#pragma once

#include "sqpulse/entanglement.hpp"

#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace sqpulse {

enum class SweepKind { tangle, error, avg_error };

struct SweepConfig {
    SweepKind kind = SweepKind::tangle;
    std::vector<double> r_values = {0.0};
    std::vector<double> gamma_tau_values = {0.1};
    std::vector<double> phi_values = {0.0};
    std::vector<QubitSpec> states = {QubitSpec::ground()};
    double kappa_over_gamma = 1e-3;
    double theta = 0.0;
    double rotation_angle = std::numbers::pi;
    Engine engine = Engine::unitary;
    int n_max = 5;
    int steps = 2000;
    bool allow_unsafe_lambda = false;
    double lambda_max = kDefaultLambdaMax;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument
};

struct RowDiagnostics {
    double lambda = 0.0;
    double truncation_discard = 0.0;
    double step_convergence_delta = 0.0;
    bool unsafe_lambda = false;
};

struct SweepRow {
    double r = 0.0;
    double gamma_tau = 0.0;
    double kappa_over_gamma = 0.0;
    double kappa_tau = 0.0;
    double phi = 0.0;
    double theta = 0.0;
    double rotation_angle = std::numbers::pi;
    int n_max = 5;
    int steps = 2000;
    std::string state;  // empty on averaged rows
    Engine engine = Engine::unitary;
    std::optional<double> tangle;
    std::optional<double> error;
    std::optional<double> avg_error;
    std::optional<double> avg_error_closed_form;
    RowDiagnostics diagnostics;
};

// Uniform grid with `steps` points from lo to hi inclusive (steps = 1 -> {lo}).
std::vector<double> linear_grid(double lo, double hi, int steps);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

void write_csv(std::ostream& out, SweepKind kind, const std::vector<SweepRow>& rows);
void write_jsonl(std::ostream& out, SweepKind kind, const std::vector<SweepRow>& rows);

}  // namespace sqpulse
