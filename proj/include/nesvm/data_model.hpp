#ifndef NESVM_DATA_MODEL_HPP_
#define NESVM_DATA_MODEL_HPP_
#pragma once

#include "nesvm/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nesvm {

/// One raw training sample before validation.
struct LabeledRow {
    Vector features;
    double label{};
};

/**
 * @brief Immutable binary classification data: X (n×p), y ∈ {−1,+1}ⁿ and per-row norms.
 * @details Construction rejects empty data, ragged rows, non-finite entries,
 *          labels outside {−1,+1} and all-zero rows (‖X_i‖∞ appears in a
 *          denominator of the smoothed hinge loss; drop or perturb such rows).
 */
class Dataset {
  public:
    Dataset(Matrix features, Vector labels, std::size_t bias_columns = 0);

    [[nodiscard]] const Matrix &features() const noexcept { return x_; }
    [[nodiscard]] std::span<const double> labels() const noexcept { return y_; }
    [[nodiscard]] std::span<const double> row_inf_norms() const noexcept { return inf_norms_; }
    [[nodiscard]] std::span<const double> row_sq_norms() const noexcept { return sq_norms_; }

    [[nodiscard]] std::size_t samples() const noexcept { return x_.rows(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return x_.cols(); }
    /// Number of constant-one columns appended by augment_bias.
    [[nodiscard]] std::size_t bias_columns() const noexcept { return bias_columns_; }

  private:
    Matrix x_;
    Vector y_;
    Vector inf_norms_;
    Vector sq_norms_;
    std::size_t bias_columns_{0};
};

[[nodiscard]] Dataset build_dataset(std::span<const LabeledRow> rows);

/// Appends a column of exact ones as the last feature; the bias is the last weight.
[[nodiscard]] Dataset augment_bias(const Dataset &d);

enum class KernelType { linear, rbf };

/// Kernel family plus the RBF width; an unset width means "use the feature count p".
struct KernelParams {
    KernelType type{KernelType::linear};
    std::optional<double> width;
    friend bool operator==(const KernelParams &, const KernelParams &) = default;
};

/// exp(−‖a−b‖²/width)
[[nodiscard]] double rbf_kernel(std::span<const double> a, std::span<const double> b, double width) noexcept;

/// Symmetric RBF Gram matrix of the rows of x.
[[nodiscard]] Matrix rbf_gram(const Matrix &x, double width);

/**
 * @brief Kernelized training data.
 * @details effective() is a Dataset whose feature matrix is K(X,X)·Diag(y), so
 *          every linear-model routine applies unchanged. kernel() keeps the
 *          unscaled K for the regularizer and points() the original samples
 *          for out-of-sample prediction.
 */
class GramDataset {
  public:
    GramDataset(Matrix kernel, Dataset effective, Matrix points, KernelParams params);

    [[nodiscard]] const Matrix &kernel() const noexcept { return kernel_; }
    [[nodiscard]] const Dataset &effective() const noexcept { return effective_; }
    [[nodiscard]] const Matrix &points() const noexcept { return points_; }
    [[nodiscard]] std::span<const double> labels() const noexcept { return effective_.labels(); }
    [[nodiscard]] const KernelParams &params() const noexcept { return params_; }

  private:
    Matrix kernel_;
    Dataset effective_;
    Matrix points_;
    KernelParams params_;
};

/// Builds the RBF Gram data. Throws non_positive_kernel_width unless the width is finite and positive.
[[nodiscard]] GramDataset build_gram(const Dataset &d, KernelParams params);
/// Same from raw rows. All-zero samples are allowed here: only the effective rows enter the loss.
[[nodiscard]] GramDataset build_gram(std::span<const LabeledRow> rows, KernelParams params);

}  // namespace nesvm

#endif  // NESVM_DATA_MODEL_HPP_
