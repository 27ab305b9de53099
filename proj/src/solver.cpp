#include "nesvm/solver.hpp"

#include "nesvm/error.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace nesvm {

namespace {

constexpr std::size_t max_homotopy_stages = 1000000;

Vector or_zeros(const Vector &v, std::size_t n, const char *what) {
    if (v.empty()) {
        return Vector(n, 0.0);
    }
    if (v.size() != n) {
        throw error{errc::dimension_mismatch,
                    std::string{what} + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(n)};
    }
    return v;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw error{errc::invalid_parameter, "epsilon must be finite and positive"};
    }
    if (max_iter < 1) {
        throw error{errc::invalid_parameter, "max_iter must be at least 1"};
    }
    if (!(stage_tolerance_factor >= 1.0) || !std::isfinite(stage_tolerance_factor)) {
        throw error{errc::invalid_parameter, "stage_tolerance_factor must be finite and at least 1"};
    }
}

SolverState SolverState::initial(std::span<const double> w0) {
    SolverState s;
    s.w.assign(w0.begin(), w0.end());
    s.grad_accum.assign(w0.size(), 0.0);
    s.y = s.w;
    s.z = s.w;
    return s;
}

SolverState nesterov_step(SolverState state, const ObjectiveEval &eval, std::span<const double> prox_center) {
    const std::size_t p = state.w.size();
    if (eval.gradient.size() != p || prox_center.size() != p || state.grad_accum.size() != p) {
        throw error{errc::dimension_mismatch, "gradient, prox-center and iterate lengths differ"};
    }
    if (!(eval.lipschitz > 0.0)) {
        throw error{errc::invalid_parameter, "Lipschitz constant must be positive"};
    }
    const double inv_l = 1.0 / eval.lipschitz;
    const double k = static_cast<double>(state.k);
    const double accum_weight = (k + 1.0) / 2.0;
    const double z_weight = 2.0 / (k + 3.0);
    const double y_weight = (k + 1.0) / (k + 3.0);

    state.y.resize(p);
    state.z.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        state.y[j] = state.w[j] - inv_l * eval.gradient[j];
        state.grad_accum[j] += accum_weight * eval.gradient[j];
        // σ₂ = 1
        state.z[j] = prox_center[j] - inv_l * state.grad_accum[j];
        state.w[j] = z_weight * state.z[j] + y_weight * state.y[j];
    }
    ++state.k;
    if (!all_finite(state.w)) {
        throw error{errc::non_finite_iterate, "iterate diverged at step " + std::to_string(state.k) +
                                                  "; the Lipschitz constant is probably too small"};
    }
    return state;
}

TrainedModel solve(const Objective &objective, const SolverConfig &config) {
    config.validate();
    const std::size_t p = objective.dimension();
    const Vector center = or_zeros(config.w_star, p, "prox-center");
    SolverState state = SolverState::initial(or_zeros(config.w0, p, "initial solution"));

    TrainedModel out;
    out.spec = objective.spec();
    out.lipschitz = objective.lipschitz();
    if (config.record_history || config.record_iterates) {
        out.trace.emplace();
    }

    double previous = 0.0;
    double current = 0.0;
    for (;;) {
        ObjectiveEval eval = objective.evaluate(state.w, &out.matvecs);
        ++out.evaluations;
        current = eval.value;
        if (!std::isfinite(current) || !all_finite(eval.gradient)) {
            std::string hint;
            if (objective.spec().variant == Variant::lssvm && objective.spec().ls_lipschitz == LsLipschitz::per_row) {
                hint = "; the per-row LS-SVM Lipschitz bound underestimates the curvature here, use the strict constant";
            }
            throw error{errc::non_finite_iterate,
                        "objective or gradient is not finite at step " + std::to_string(state.k) + hint};
        }
        if (config.record_history) {
            out.trace->objective.push_back(current);
            state.f_history.push_back(current);
        }
        if (config.stop_on_tolerance && state.k > 0 && std::abs(current - previous) < config.epsilon) {
            out.converged = true;
            break;
        }
        if (state.k >= config.max_iter) {
            break;
        }
        previous = current;

        Vector w_before;
        if (config.record_iterates) {
            w_before = state.w;
        }
        state = nesterov_step(std::move(state), eval, center);
        if (config.record_history) {
            // diagnostic only; not part of the per-iteration product budget
            out.trace->y_objective.push_back(objective.value(state.y));
        }
        if (config.record_iterates) {
            out.trace->iterates.push_back({std::move(w_before), std::move(eval.gradient), state.y, state.z});
        }
    }

    out.w = std::move(state.w);
    out.iterations = state.k;
    out.final_objective = current;
    return out;
}

TrainedModel solve(const TrainingProblem &problem, const SolverConfig &config) {
    return solve(problem.objective(), config);
}

std::vector<double> homotopy_schedule(double mu0, double mu_star) {
    if (!(mu_star > 0.0) || !std::isfinite(mu0) || !(mu0 >= mu_star)) {
        throw error{errc::invalid_parameter, "homotopy needs mu0 >= mu_star > 0"};
    }
    std::vector<double> schedule;
    for (std::size_t t = 0;; ++t) {
        if (t >= max_homotopy_stages) {
            throw error{errc::invalid_parameter, "homotopy schedule exceeds " + std::to_string(max_homotopy_stages) +
                                                     " stages; raise mu_star"};
        }
        const double mu = mu0 / static_cast<double>(t + 1);
        if (mu <= mu_star) {
            schedule.push_back(mu_star);
            break;
        }
        schedule.push_back(mu);
    }
    return schedule;
}

TrainedModel solve_homotopy(const Objective &objective, const SolverConfig &config, double mu0, double mu_star) {
    config.validate();
    const std::vector<double> schedule = homotopy_schedule(mu0, mu_star);
    const ModelSpec &spec = objective.spec();

    if (spec.variant == Variant::lssvm) {
        TrainedModel m = solve(objective, config);
        m.stages.push_back({spec.mu, spec.nu, m.lipschitz, config.epsilon, m.iterations, m.final_objective, m.converged});
        return m;
    }

    TrainedModel out;
    out.spec = spec;
    if (config.record_history || config.record_iterates) {
        out.trace.emplace();
    }
    Vector warm = or_zeros(config.w0, objective.dimension(), "initial solution");
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        const bool last = t + 1 == schedule.size();
        const double mu = schedule[t];
        std::optional<double> nu;
        if (spec.nu) {
            nu = *spec.nu * (mu / mu0);
        }
        const Objective stage = objective.with_smoothing(mu, nu);

        SolverConfig cfg = config;
        cfg.w0 = warm;
        if (config.recenter_prox) {
            cfg.w_star = warm;
        }
        cfg.epsilon = last ? config.epsilon : config.epsilon * config.stage_tolerance_factor;

        TrainedModel m = solve(stage, cfg);
        out.stages.push_back({mu, nu, m.lipschitz, cfg.epsilon, m.iterations, m.final_objective, m.converged});
        out.iterations += m.iterations;
        out.evaluations += m.evaluations;
        out.matvecs.forward += m.matvecs.forward;
        out.matvecs.transpose += m.matvecs.transpose;
        if (out.trace && m.trace) {
            auto &dst = *out.trace;
            dst.objective.insert(dst.objective.end(), m.trace->objective.begin(), m.trace->objective.end());
            dst.y_objective.insert(dst.y_objective.end(), m.trace->y_objective.begin(), m.trace->y_objective.end());
            for (auto &rec : m.trace->iterates) {
                dst.iterates.push_back(std::move(rec));
            }
        }
        warm = std::move(m.w);
        if (last) {
            out.final_objective = m.final_objective;
            out.converged = m.converged;
            out.lipschitz = m.lipschitz;
            out.spec = stage.spec();
        }
    }
    out.w = std::move(warm);
    return out;
}

TrainedModel solve_homotopy(const TrainingProblem &problem, const SolverConfig &config, double mu0, double mu_star) {
    return solve_homotopy(problem.objective(), config, mu0, mu_star);
}

}  // namespace nesvm
