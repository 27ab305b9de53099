#include "nesvm/data_model.hpp"

#include "nesvm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace nesvm {

Dataset::Dataset(Matrix features, Vector labels, std::size_t bias_columns) :
    x_{std::move(features)},
    y_{std::move(labels)},
    bias_columns_{bias_columns} {
    if (x_.rows() == 0 || x_.cols() == 0) {
        throw error{errc::empty_dataset, "a dataset needs at least one sample and one feature"};
    }
    if (y_.size() != x_.rows()) {
        throw error{errc::dimension_mismatch,
                    std::to_string(x_.rows()) + " samples but " + std::to_string(y_.size()) + " labels"};
    }
    inf_norms_.resize(x_.rows());
    sq_norms_.resize(x_.rows());
    for (std::size_t i = 0; i < x_.rows(); ++i) {
        if (y_[i] != 1.0 && y_[i] != -1.0) {
            throw error{errc::label_out_of_range, "sample " + std::to_string(i) + " has label " + std::to_string(y_[i]) +
                                                      "; labels must be -1 or +1"};
        }
        const auto r = x_.row(i);
        if (!all_finite(r)) {
            throw error{errc::non_finite_value, "sample " + std::to_string(i) + " has a non-finite feature"};
        }
        double inf = 0.0;
        for (const double v : r) {
            inf = std::max(inf, std::abs(v));
        }
        if (inf == 0.0) {
            throw error{errc::zero_row, "sample " + std::to_string(i) +
                                            " is all zeros; remove or deduplicate it before training"};
        }
        inf_norms_[i] = inf;
        sq_norms_[i] = squared_norm(r);
    }
}

Dataset build_dataset(std::span<const LabeledRow> rows) {
    if (rows.empty()) {
        throw error{errc::empty_dataset, "no rows"};
    }
    const std::size_t p = rows.front().features.size();
    Matrix x{rows.size(), p};
    Vector y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].features.size() != p) {
            throw error{errc::ragged_rows, "row " + std::to_string(i) + " has " +
                                               std::to_string(rows[i].features.size()) + " features, expected " +
                                               std::to_string(p)};
        }
        std::copy(rows[i].features.begin(), rows[i].features.end(), x.row(i).begin());
        y[i] = rows[i].label;
    }
    return Dataset{std::move(x), std::move(y)};
}

Dataset augment_bias(const Dataset &d) {
    const Matrix &x = d.features();
    Matrix out{x.rows(), x.cols() + 1};
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto src = x.row(i);
        auto dst = out.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
        dst.back() = 1.0;
    }
    return Dataset{std::move(out), Vector(d.labels().begin(), d.labels().end()), d.bias_columns() + 1};
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double width) noexcept {
    return std::exp(-squared_distance(a, b) / width);
}

Matrix rbf_gram(const Matrix &x, double width) {
    const std::size_t n = x.rows();
    Matrix k{n, n};
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rbf_kernel(x.row(i), x.row(j), width);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

GramDataset::GramDataset(Matrix kernel, Dataset effective, Matrix points, KernelParams params) :
    kernel_{std::move(kernel)},
    effective_{std::move(effective)},
    points_{std::move(points)},
    params_{params} {}

namespace {

GramDataset gram_from(const Matrix &x, std::span<const double> y, KernelParams params) {
    const double width = params.width.value_or(static_cast<double>(x.cols()));
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw error{errc::non_positive_kernel_width, "RBF width must be finite and positive, got " + std::to_string(width)};
    }
    params.type = KernelType::rbf;
    params.width = width;

    Matrix k = rbf_gram(x, width);
    Matrix ky = k;
    for (std::size_t i = 0; i < ky.rows(); ++i) {
        auto r = ky.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] *= y[j];
        }
    }
    // The unit diagonal keeps every effective row non-zero.
    Dataset effective{std::move(ky), Vector(y.begin(), y.end())};
    return GramDataset{std::move(k), std::move(effective), x, params};
}

}  // namespace

GramDataset build_gram(const Dataset &d, KernelParams params) {
    if (d.bias_columns() != 0) {
        throw error{errc::invalid_parameter, "build the Gram matrix from data without a bias column"};
    }
    return gram_from(d.features(), d.labels(), params);
}

GramDataset build_gram(std::span<const LabeledRow> rows, KernelParams params) {
    if (rows.empty() || rows.front().features.empty()) {
        throw error{errc::empty_dataset, "a dataset needs at least one sample and one feature"};
    }
    const std::size_t p = rows.front().features.size();
    Matrix x{rows.size(), p};
    Vector y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].features.size() != p) {
            throw error{errc::ragged_rows, "row " + std::to_string(i) + " has " +
                                               std::to_string(rows[i].features.size()) + " features, expected " +
                                               std::to_string(p)};
        }
        if (!all_finite(rows[i].features)) {
            throw error{errc::non_finite_value, "sample " + std::to_string(i) + " has a non-finite feature"};
        }
        std::copy(rows[i].features.begin(), rows[i].features.end(), x.row(i).begin());
        y[i] = rows[i].label;
    }
    return gram_from(x, y, params);
}

}  // namespace nesvm
