#ifndef NESVM_MATRIX_HPP_
#define NESVM_MATRIX_HPP_
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nesvm {

using Vector = std::vector<double>;

/**
 * @brief Dense row-major matrix of doubles.
 * @details Rows are samples everywhere in this library, so row access is
 *          contiguous and the two hot products (A·x and Aᵀ·u) stream rows.
 */
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] double &operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b) noexcept;
[[nodiscard]] double squared_norm(std::span<const double> a) noexcept;
[[nodiscard]] double norm(std::span<const double> a) noexcept;
[[nodiscard]] double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// out = A·x
void multiply(const Matrix &a, std::span<const double> x, std::span<double> out);
/// out = Aᵀ·u. Rows with u_i == 0 are skipped.
void multiply_transpose(const Matrix &a, std::span<const double> u, std::span<double> out);

[[nodiscard]] bool all_finite(std::span<const double> v) noexcept;

}  // namespace nesvm

#endif  // NESVM_MATRIX_HPP_
