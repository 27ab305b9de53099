#ifndef NESVM_SMOOTHING_HPP_
#define NESVM_SMOOTHING_HPP_
#pragma once

#include "nesvm/data_model.hpp"
#include "nesvm/matrix.hpp"

#include <span>

namespace nesvm {

// Smoothed hinge loss
//
//   hinge_mu(m) = max_{0<=u<=1} u(1 - m) - (mu/2)·‖X_i‖∞·u²,   m = y_i X_i w
//
// and smoothed absolute value
//
//   abs_mu(w) = max_{-1<=u<=1} w·u - (mu/2)·u².
//
// Values and gradients are always derived from the clamped dual, so branch
// selection agrees between dual, value and gradient at the kinks.

/// Non-smooth hinge max{0, 1 − m}.
[[nodiscard]] double hinge(double margin) noexcept;

/// Hinge dual for one sample: clamp((1 − m)/(μ‖X_i‖∞), 0, 1).
[[nodiscard]] double hinge_dual(double margin, double inf_norm, double mu) noexcept;
/// Smoothed hinge value for one sample.
[[nodiscard]] double smoothed_hinge(double margin, double inf_norm, double mu) noexcept;

/// m = Y·X·w, one matrix-vector product.
[[nodiscard]] Vector margins(const Dataset &d, std::span<const double> w);

[[nodiscard]] Vector hinge_dual(const Dataset &d, std::span<const double> w, double mu);
[[nodiscard]] Vector hinge_dual_from_margins(std::span<const double> margins, std::span<const double> inf_norms, double mu);

/// Σᵢ hinge_mu over all samples.
[[nodiscard]] double hinge_value(const Dataset &d, std::span<const double> w, double mu);
/// Σᵢ uᵢ(1 − mᵢ) − (μ/2)‖X_i‖∞uᵢ² for an already clamped dual u.
[[nodiscard]] double hinge_value_from_duals(std::span<const double> margins, std::span<const double> inf_norms,
                                            std::span<const double> u, double mu);

/// −(YX)ᵀu, one matrix-vector product.
[[nodiscard]] Vector hinge_gradient(const Dataset &d, std::span<const double> u);

enum class HingeLipschitz {
    /// (n/μ)·maxᵢ ‖X_i‖₂²/‖X_i‖∞
    max_row,
    /// (1/μ)·Σᵢ ‖X_i‖₂²/‖X_i‖∞, never larger than max_row
    tight_sum,
};

[[nodiscard]] double hinge_lipschitz(const Dataset &d, double mu, HingeLipschitz mode = HingeLipschitz::max_row);

/// clamp(w/μ, −1, 1)
[[nodiscard]] double l1_dual(double w, double mu) noexcept;
[[nodiscard]] double smoothed_abs(double w, double mu) noexcept;

[[nodiscard]] Vector l1_dual(std::span<const double> w, double mu);
[[nodiscard]] double l1_value(std::span<const double> w, double mu);
/// The gradient of Σ abs_mu(w_i) is the dual itself.
[[nodiscard]] Vector l1_gradient(std::span<const double> w, double mu);
/// Always 1/μ.
[[nodiscard]] double l1_lipschitz(double mu);

}  // namespace nesvm

#endif  // NESVM_SMOOTHING_HPP_
