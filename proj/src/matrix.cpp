#include "nesvm/matrix.hpp"

#include "nesvm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nesvm {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) :
    rows_{rows},
    cols_{cols},
    data_(rows * cols, fill) {}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_norm(std::span<const double> a) noexcept { return dot(a, a); }

double norm(std::span<const double> a) noexcept { return std::sqrt(squared_norm(a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void multiply(const Matrix &a, std::span<const double> x, std::span<double> out) {
    if (x.size() != a.cols() || out.size() != a.rows()) {
        throw error{errc::dimension_mismatch, "A·x with A " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                  ", x of length " + std::to_string(x.size())};
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out[i] = dot(a.row(i), x);
    }
}

void multiply_transpose(const Matrix &a, std::span<const double> u, std::span<double> out) {
    if (u.size() != a.rows() || out.size() != a.cols()) {
        throw error{errc::dimension_mismatch, "Aᵀ·u with A " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + ", u of length " + std::to_string(u.size())};
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double ui = u[i];
        const auto r = a.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            out[j] += ui * r[j];
        }
    }
}

bool all_finite(std::span<const double> v) noexcept {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace nesvm
