#ifndef NESVM_MODELS_HPP_
#define NESVM_MODELS_HPP_
#pragma once

#include "nesvm/data_model.hpp"
#include "nesvm/matrix.hpp"
#include "nesvm/smoothing.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace nesvm {

enum class Variant { csvm, lpsvm, lssvm };

[[nodiscard]] std::string to_string(Variant v);
[[nodiscard]] Variant parse_variant(const std::string &name);

enum class LsLipschitz {
    /// 1 + 2C·maxᵢ‖X_i‖₂²
    per_row,
    /// 1 + 2C·λ_max((YX)ᵀYX), estimated by power iteration
    strict,
};

/**
 * @brief Which SVM to train and its smoothing parameters.
 * @details mu smooths the hinge loss (C-SVM and LP-SVM). nu smooths the ℓ1
 *          regularizer and is required for LP-SVM. LS-SVM ignores both.
 */
struct ModelSpec {
    Variant variant{Variant::csvm};
    double C{1.0};
    KernelParams kernel{};
    bool bias{false};
    double mu{5.0};
    std::optional<double> nu{};
    HingeLipschitz hinge_lipschitz{HingeLipschitz::max_row};
    LsLipschitz ls_lipschitz{LsLipschitz::per_row};

    /// Throws invalid_parameter / missing_nu.
    void validate() const;
    friend bool operator==(const ModelSpec &, const ModelSpec &) = default;
};

/// F_μ(w), ∇F_μ(w) and the Lipschitz constant of ∇F_μ.
struct ObjectiveEval {
    double value{};
    Vector gradient;
    double lipschitz{};
};

/// Counts products with the effective data matrix.
struct MatvecCounter {
    std::size_t forward{0};
    std::size_t transpose{0};

    [[nodiscard]] std::size_t total() const noexcept { return forward + transpose; }
};

/**
 * @brief Smoothed SVM objective over an effective data matrix.
 * @details The effective matrix is X (or [X, e] with a bias) for linear models
 *          and K(X,X)·Y (or [K·Y, e]) for kernel models. Every evaluation costs
 *          exactly one forward product (margins) and one transpose product
 *          (loss gradient). For kernels the regularizer ½(Yα)ᵀK(Yα) reuses the
 *          forward product, so the budget stays at two.
 */
class Objective {
  public:
    /// @p kernel is required iff spec.kernel.type == rbf; it must match the non-bias part of @p data.
    Objective(std::shared_ptr<const Dataset> data, ModelSpec spec, std::shared_ptr<const Matrix> kernel = nullptr);

    [[nodiscard]] ObjectiveEval evaluate(std::span<const double> w, MatvecCounter *counter = nullptr) const;
    [[nodiscard]] double value(std::span<const double> w, MatvecCounter *counter = nullptr) const;

    [[nodiscard]] double lipschitz() const noexcept { return lipschitz_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return data_->dimension(); }
    [[nodiscard]] const ModelSpec &spec() const noexcept { return spec_; }
    [[nodiscard]] const Dataset &data() const noexcept { return *data_; }
    [[nodiscard]] std::shared_ptr<const Dataset> shared_data() const noexcept { return data_; }
    [[nodiscard]] std::shared_ptr<const Matrix> kernel() const noexcept { return kernel_; }
    /// Whether the last weight is an unpenalized bias.
    [[nodiscard]] bool has_bias() const noexcept { return spec_.bias; }

    /// Same problem with new smoothing parameters; the Lipschitz constant is recomputed.
    [[nodiscard]] Objective with_smoothing(double mu, std::optional<double> nu) const;

  private:
    [[nodiscard]] std::size_t penalized() const noexcept;
    [[nodiscard]] double compute_lipschitz() const;
    [[nodiscard]] double regularizer_lipschitz() const;

    std::shared_ptr<const Dataset> data_;
    ModelSpec spec_;
    std::shared_ptr<const Matrix> kernel_;
    double kernel_norm_bound_{0.0};
    double lipschitz_{0.0};
};

/// Data, kernel and spec ready for the solver.
class TrainingProblem {
  public:
    [[nodiscard]] const Objective &objective() const noexcept { return objective_; }
    [[nodiscard]] const ModelSpec &spec() const noexcept { return objective_.spec(); }
    [[nodiscard]] const Dataset &effective() const noexcept { return objective_.data(); }
    /// Original samples; needed for kernel prediction.
    [[nodiscard]] const Matrix &points() const noexcept { return *points_; }
    [[nodiscard]] std::span<const double> labels() const noexcept { return objective_.data().labels(); }

  private:
    TrainingProblem(Objective objective, std::shared_ptr<const Matrix> points);
    friend TrainingProblem make_problem(const Dataset &d, const ModelSpec &spec);
    friend TrainingProblem make_problem(const GramDataset &g, const ModelSpec &spec);

    Objective objective_;
    std::shared_ptr<const Matrix> points_;
};

/// Validates the spec, builds the Gram data for RBF kernels and appends the bias column when requested.
[[nodiscard]] TrainingProblem make_problem(const Dataset &d, const ModelSpec &spec);
[[nodiscard]] TrainingProblem make_problem(const GramDataset &g, const ModelSpec &spec);

// Direct evaluation entry points. @p d is the effective data: it must already
// carry the bias column when spec.bias is set.
[[nodiscard]] ObjectiveEval eval_csvm(const Dataset &d, std::span<const double> w, const ModelSpec &spec);
[[nodiscard]] ObjectiveEval eval_lpsvm(const Dataset &d, std::span<const double> w, const ModelSpec &spec);
[[nodiscard]] ObjectiveEval eval_lssvm(const Dataset &d, std::span<const double> w, const ModelSpec &spec);
/// Kernel-model evaluation at coefficient vector alpha (length n, or n+1 with a bias).
[[nodiscard]] ObjectiveEval kernelize(const ModelSpec &spec, const GramDataset &g, std::span<const double> alpha);

/// Un-smoothed objective (true hinge loss and ℓ1 norm).
[[nodiscard]] double nonsmooth_objective(const Objective &objective, std::span<const double> w);

/// Largest eigenvalue of AᵀA by power iteration.
[[nodiscard]] double gram_spectral_norm(const Matrix &a, std::size_t max_iter = 1000, double tol = 1e-12);

}  // namespace nesvm

#endif  // NESVM_MODELS_HPP_
