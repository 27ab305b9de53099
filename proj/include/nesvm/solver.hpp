#ifndef NESVM_SOLVER_HPP_
#define NESVM_SOLVER_HPP_
#pragma once

#include "nesvm/matrix.hpp"
#include "nesvm/models.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nesvm {

struct SolverConfig {
    /// Stop once |F_μ(wᵏ⁺¹) − F_μ(wᵏ)| < epsilon.
    double epsilon{1e-3};
    /// Hard cap on accelerated steps; hitting it yields converged = false.
    std::size_t max_iter{100000};
    /// Initial solution; empty means zeros.
    Vector w0;
    /// Prox-center ("guess solution"); empty means zeros.
    Vector w_star;
    /// Record F_μ(wᵏ) and F_μ(yᵏ) per iteration. Costs one extra product per iteration.
    bool record_history{false};
    /// Keep every wᵏ, yᵏ, zᵏ and gradient (small runs only).
    bool record_iterates{false};
    /// Homotopy stages before the last one run at this multiple of epsilon.
    double stage_tolerance_factor{10.0};
    /// Homotopy: use each stage's warm start as that stage's prox-center.
    bool recenter_prox{true};
    /// When false the stopping rule is skipped and exactly max_iter steps run (rate diagnostics).
    bool stop_on_tolerance{true};

    void validate() const;
};

/// Mutable state of one accelerated gradient run.
struct SolverState {
    std::size_t k{0};
    Vector w;
    /// Σ_{i≤k} (i+1)/2 · ∇F_μ(wⁱ)
    Vector grad_accum;
    Vector y;
    Vector z;
    std::vector<double> f_history;

    [[nodiscard]] static SolverState initial(std::span<const double> w0);
};

/**
 * @brief One accelerated step from wᵏ given ∇F_μ(wᵏ) and L_μ in @p eval.
 * @details yᵏ = wᵏ − ∇F/L, zᵏ = w⋆ − accum/L, wᵏ⁺¹ = 2/(k+3)·zᵏ + (k+1)/(k+3)·yᵏ.
 *          Throws non_finite_iterate when the new iterate is not finite.
 */
[[nodiscard]] SolverState nesterov_step(SolverState state, const ObjectiveEval &eval,
                                        std::span<const double> prox_center);

struct IterateRecord {
    Vector w;
    Vector gradient;
    Vector y;
    Vector z;
};

struct Trace {
    /// F_μ(wᵏ) for k = 0..evaluations-1
    std::vector<double> objective;
    /// F_μ(yᵏ) for k = 0..iterations-1
    std::vector<double> y_objective;
    std::vector<IterateRecord> iterates;
};

struct StageReport {
    double mu{};
    std::optional<double> nu;
    double lipschitz{};
    double tolerance{};
    std::size_t iterations{};
    double objective{};
    bool converged{};
};

struct TrainedModel {
    Vector w;
    ModelSpec spec;
    /// Accelerated steps taken.
    std::size_t iterations{0};
    /// Objective/gradient evaluations (iterations + 1 per stage).
    std::size_t evaluations{0};
    MatvecCounter matvecs;
    double final_objective{};
    double lipschitz{};
    bool converged{false};
    std::optional<Trace> trace;
    std::vector<StageReport> stages;
};

[[nodiscard]] TrainedModel solve(const Objective &objective, const SolverConfig &config);
[[nodiscard]] TrainedModel solve(const TrainingProblem &problem, const SolverConfig &config);

/// μᵗ = μ⁰/(t+1) for t = 0, 1, ... up to the first value ≤ μ*, which is replaced by μ* itself.
[[nodiscard]] std::vector<double> homotopy_schedule(double mu0, double mu_star);

/**
 * @brief Continuation over decreasing smoothing: each stage warm-starts from the last.
 * @details LP-SVM scales ν by the same factor 1/(t+1) from spec.nu. LS-SVM has
 *          nothing to smooth and runs a single stage.
 */
[[nodiscard]] TrainedModel solve_homotopy(const Objective &objective, const SolverConfig &config, double mu0,
                                          double mu_star);
[[nodiscard]] TrainedModel solve_homotopy(const TrainingProblem &problem, const SolverConfig &config, double mu0,
                                          double mu_star);

}  // namespace nesvm

#endif  // NESVM_SOLVER_HPP_
