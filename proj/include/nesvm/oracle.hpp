#ifndef NESVM_ORACLE_HPP_
#define NESVM_ORACLE_HPP_
#pragma once

// Reference computations that do not share code paths with the solver:
// finite differences, brute-force dual maximization, a direct LS-SVM solve and
// a plain subgradient minimizer of the non-smooth objective.

#include "nesvm/data_model.hpp"
#include "nesvm/models.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace nesvm::oracle {

struct FDSpec {
    /// Step relative to max(1, |w_i|).
    double step{1e-6};
};

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central differences (f(w+h·eᵢ) − f(w−h·eᵢ))/(2h). Throws non_finite_evaluation.
[[nodiscard]] Vector fd_gradient(const ScalarFunction &f, std::span<const double> w, FDSpec spec = {});

/// max over u ∈ {0, 1/grid_n, ..., 1} of u·margin_term − (μ/2)·inf_norm·u².
[[nodiscard]] double saddle_max(double margin_term, double inf_norm, double mu, std::size_t grid_n);

/// Same brute force for the smoothed absolute value over u ∈ [−1, 1].
[[nodiscard]] double saddle_max_abs(double w, double mu, std::size_t grid_n);

/**
 * @brief Stationary point of the LS-SVM objective from its normal equations.
 * @details Solves (D + 2C·AᵀA)w = 2C·Aᵀe with A = YX and D = I, or D = I with a
 *          zero last diagonal entry when @p bias is set (unpenalized intercept).
 *          Uses a dense Cholesky factorization.
 */
[[nodiscard]] Vector lssvm_direct(const Dataset &d, double C, bool bias = false);

/// True when a ±10h perturbation of @p w could cross a branch boundary of the smoothed terms.
[[nodiscard]] bool near_kink(const Objective &objective, std::span<const double> w, double h);

struct GradientCheck {
    double max_relative_error{0.0};
    std::size_t checked{0};
    std::size_t skipped{0};
};

/// Compares analytic and finite-difference gradients at random kink-free points.
[[nodiscard]] GradientCheck verify_gradients(const Objective &objective, std::size_t samples, std::uint64_t seed,
                                             FDSpec spec = {});

struct SubgradientResult {
    Vector w;
    double best_objective{};
    /// Best objective after each iteration.
    std::vector<double> best_history;
};

/**
 * @brief Subgradient descent on the non-smooth objective with best-iterate tracking.
 * @details ℓ2-regularized models use step 1/(k+1) (the regularizer is
 *          1-strongly convex) with the weights kept in the ball of radius
 *          √(2·F(0)) that must contain the minimizer. LP-SVM uses
 *          r/(G√(k+1)) with r = F(0) and G the largest possible subgradient norm.
 */
[[nodiscard]] SubgradientResult subgradient_reference(const Objective &objective, std::size_t iterations,
                                                      std::span<const double> w0 = {});

}  // namespace nesvm::oracle

#endif  // NESVM_ORACLE_HPP_
