#include "sqpulse/sweep.hpp"

#include "sqpulse/closed_forms.hpp"
#include "sqpulse/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace sqpulse {

namespace {

constexpr double kStepConvergenceLimit = 1e-8;

bool is_branch_phi(double phi) {
    return std::abs(phi) <= 1e-12 || std::abs(phi - 0.5 * std::numbers::pi) <= 1e-12;
}

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string{};
}

void require_finite_row(const SweepRow& row) {
    const auto bad = [](const std::optional<double>& v) { return v && !std::isfinite(*v); };
    if (bad(row.tangle) || bad(row.error) || bad(row.avg_error) ||
        bad(row.avg_error_closed_form) || !std::isfinite(row.diagnostics.lambda) ||
        !std::isfinite(row.diagnostics.truncation_discard) ||
        !std::isfinite(row.diagnostics.step_convergence_delta)) {
        throw numeric_error(numeric_error::kind::non_finite,
                            "sweep row contains a non-finite value");
    }
}

struct Job {
    double r;
    double gamma_tau;
    double phi;
    const QubitSpec* state;  // nullptr for averaged rows
};

SweepRow compute_row(const SweepConfig& cfg, const Job& job) {
    const PulseParams p =
        params_from_ratios(job.r, job.phi, cfg.theta, cfg.kappa_over_gamma, job.gamma_tau,
                           cfg.rotation_angle, cfg.n_max, cfg.allow_unsafe_lambda);

    SweepRow row;
    row.r = job.r;
    row.gamma_tau = job.gamma_tau;
    row.kappa_over_gamma = cfg.kappa_over_gamma;
    row.kappa_tau = p.kappa_tau;
    row.phi = job.phi;
    row.theta = cfg.theta;
    row.rotation_angle = cfg.rotation_angle;
    row.n_max = cfg.n_max;
    row.steps = cfg.steps;
    row.engine = cfg.engine;
    row.diagnostics.lambda = p.lambda();
    row.diagnostics.unsafe_lambda = p.lambda() > cfg.lambda_max;

    if (cfg.kind == SweepKind::avg_error) {
        row.avg_error = average_error(p, cfg.engine, cfg.steps);
        if (cfg.engine == Engine::lindblad) {
            const double half = average_error(p, cfg.engine, cfg.steps / 2);
            row.diagnostics.step_convergence_delta = std::abs(*row.avg_error - half);
        }
        const bool closed_form_applies = is_branch_phi(job.phi) && std::abs(cfg.theta) <= 1e-12 &&
                                         std::abs(cfg.rotation_angle - std::numbers::pi) <= 1e-12;
        if (closed_form_applies) {
            row.avg_error_closed_form = average_error_closed_form(job.r, job.phi, p.kappa_tau);
        }
    } else {
        const QubitSpec& q = *job.state;
        row.state = q.label();
        const Eigen::Vector2cd eta = target_state(q, p);
        switch (cfg.engine) {
            case Engine::unitary:
            case Engine::perturbative: {
                ComplexVector psi;
                if (cfg.engine == Engine::unitary) {
                    psi = evolve_unitary(product_state(q, p), p);
                } else {
                    const PropagatorExpansion u = perturbative_propagator(p);
                    psi = apply_expansion(u, p.lambda(), product_state(q, p));
                }
                row.diagnostics.truncation_discard = truncation_weight(psi);
                if (cfg.kind == SweepKind::tangle) {
                    row.tangle = tangle_pure(psi).value;
                } else {
                    row.error = error_probability(atom_marginal(psi), eta);
                }
                break;
            }
            case Engine::lindblad: {
                const ComplexVector psi0 = product_state(q, p);
                const ComplexMatrix rho0 = psi0 * psi0.adjoint();
                const ComplexMatrix rho = evolve_lindblad(rho0, p, cfg.steps);
                const ComplexMatrix rho_half = evolve_lindblad(rho0, p, cfg.steps / 2);
                row.diagnostics.truncation_discard = truncation_weight(rho);
                double coarse = 0.0;
                if (cfg.kind == SweepKind::tangle) {
                    row.tangle = tangle_mixed(rho).value;
                    coarse = tangle_mixed(rho_half).value;
                    row.diagnostics.step_convergence_delta = std::abs(*row.tangle - coarse);
                } else {
                    row.error = error_probability(atom_marginal(rho), eta);
                    coarse = error_probability(atom_marginal(rho_half), eta);
                    row.diagnostics.step_convergence_delta = std::abs(*row.error - coarse);
                }
                break;
            }
        }
    }

    if (row.diagnostics.step_convergence_delta >= kStepConvergenceLimit) {
        throw numeric_error(numeric_error::kind::convergence,
                            "step-halving changed the observable by " +
                                format_number(row.diagnostics.step_convergence_delta) +
                                "; integration not converged");
    }
    require_finite_row(row);
    return row;
}

}  // namespace

void SweepConfig::validate() const {
    if (r_values.empty()) throw std::invalid_argument("sweep: empty r grid");
    if (gamma_tau_values.empty()) throw std::invalid_argument("sweep: empty gamma_tau grid");
    if (phi_values.empty()) throw std::invalid_argument("sweep: empty phi list");
    if (kind != SweepKind::avg_error && states.empty()) {
        throw std::invalid_argument("sweep: empty state list");
    }
    for (double r : r_values) {
        if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("sweep: invalid r value");
    }
    for (double g : gamma_tau_values) {
        if (!std::isfinite(g) || g <= 0.0) {
            throw std::invalid_argument("sweep: gamma_tau values must be > 0");
        }
    }
    if (kappa_over_gamma < 0.0) throw std::invalid_argument("sweep: kappa_over_gamma must be >= 0");
    if (n_max < 2) throw std::invalid_argument("sweep: n_max must be >= 2");
    const int min_steps = engine == Engine::lindblad ? 200 : 100;
    if (steps < min_steps) {
        throw std::invalid_argument("sweep: steps too small for the selected engine");
    }
    if (kind == SweepKind::avg_error && engine == Engine::perturbative) {
        throw std::invalid_argument("sweep: avg-error supports the unitary and lindblad engines");
    }
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("linear_grid: steps must be >= 1");
    if (steps == 1) return {lo};
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
    }
    return grid;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    config.validate();

    std::vector<Job> jobs;
    for (double r : config.r_values) {
        for (double gamma_tau : config.gamma_tau_values) {
            for (double phi : config.phi_values) {
                if (config.kind == SweepKind::avg_error) {
                    jobs.push_back({r, gamma_tau, phi, nullptr});
                } else {
                    for (const QubitSpec& q : config.states) {
                        jobs.push_back({r, gamma_tau, phi, &q});
                    }
                }
            }
        }
    }

    std::vector<SweepRow> rows(jobs.size());
    unsigned n_threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, jobs.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    const auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            try {
                rows[i] = compute_row(config, jobs[i]);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

namespace {

const char* observable_column(SweepKind kind) {
    switch (kind) {
        case SweepKind::tangle: return "tangle";
        case SweepKind::error: return "error";
        case SweepKind::avg_error: return "avg_error";
    }
    throw std::logic_error("SweepKind: invalid value");
}

std::optional<double> observable_value(SweepKind kind, const SweepRow& row) {
    switch (kind) {
        case SweepKind::tangle: return row.tangle;
        case SweepKind::error: return row.error;
        case SweepKind::avg_error: return row.avg_error;
    }
    throw std::logic_error("SweepKind: invalid value");
}

}  // namespace

void write_csv(std::ostream& out, SweepKind kind, const std::vector<SweepRow>& rows) {
    const bool averaged = kind == SweepKind::avg_error;
    out << "r,gamma_tau,kappa_over_gamma,kappa_tau,phi,theta,rotation_angle,n_max,steps,";
    if (!averaged) out << "state,";
    out << "engine," << observable_column(kind) << ",";
    if (averaged) out << "avg_error_closed_form,";
    out << "lambda,truncation_discard,step_convergence_delta,unsafe_lambda\n";

    for (const SweepRow& row : rows) {
        out << format_number(row.r) << ',' << format_number(row.gamma_tau) << ','
            << format_number(row.kappa_over_gamma) << ',' << format_number(row.kappa_tau) << ','
            << format_number(row.phi) << ',' << format_number(row.theta) << ','
            << format_number(row.rotation_angle) << ',' << row.n_max << ',' << row.steps << ',';
        if (!averaged) out << row.state << ',';
        out << to_string(row.engine) << ',' << format_optional(observable_value(kind, row)) << ',';
        if (averaged) out << format_optional(row.avg_error_closed_form) << ',';
        out << format_number(row.diagnostics.lambda) << ','
            << format_number(row.diagnostics.truncation_discard) << ','
            << format_number(row.diagnostics.step_convergence_delta) << ','
            << (row.diagnostics.unsafe_lambda ? 1 : 0) << '\n';
    }
}

void write_jsonl(std::ostream& out, SweepKind kind, const std::vector<SweepRow>& rows) {
    for (const SweepRow& row : rows) {
        nlohmann::ordered_json record{
            {"r", row.r},
            {"gamma_tau", row.gamma_tau},
            {"kappa_over_gamma", row.kappa_over_gamma},
            {"kappa_tau", row.kappa_tau},
            {"phi", row.phi},
            {"theta", row.theta},
            {"rotation_angle", row.rotation_angle},
            {"n_max", row.n_max},
            {"steps", row.steps},
        };
        if (kind != SweepKind::avg_error) record["state"] = row.state;
        record["engine"] = to_string(row.engine);
        if (const auto value = observable_value(kind, row)) {
            record[observable_column(kind)] = *value;
        }
        if (kind == SweepKind::avg_error && row.avg_error_closed_form) {
            record["avg_error_closed_form"] = *row.avg_error_closed_form;
        }
        record["lambda"] = row.diagnostics.lambda;
        record["truncation_discard"] = row.diagnostics.truncation_discard;
        record["step_convergence_delta"] = row.diagnostics.step_convergence_delta;
        record["unsafe_lambda"] = row.diagnostics.unsafe_lambda;
        out << record.dump() << '\n';
    }
}

}  // namespace sqpulse
