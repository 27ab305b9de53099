#ifndef NESVM_MODEL_IO_HPP_
#define NESVM_MODEL_IO_HPP_
#pragma once

#include "nesvm/io_ingest.hpp"
#include "nesvm/models.hpp"
#include "nesvm/solver.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace nesvm {

/**
 * @brief A trained classifier as stored on disk.
 * @details Linear models keep w (bias last). Kernel models keep one
 *          coefficient per support point, the support points with their
 *          labels, and the bias last; the decision value is
 *          Σⱼ αⱼ yⱼ K(sⱼ, x) + b.
 */
struct ModelFile {
    static constexpr int format_version = 1;

    ModelSpec spec;
    std::size_t feature_dimension{0};
    Vector weights;
    Matrix support_points;
    Vector support_labels;
    io::ScalingSpec scaling;

    /// @p x must already be scaled.
    [[nodiscard]] double decision_value(std::span<const double> x) const;
    /// sign of the decision value, with sign(0) = +1
    [[nodiscard]] int predict(std::span<const double> x) const { return decision_value(x) >= 0.0 ? 1 : -1; }

    friend bool operator==(const ModelFile &, const ModelFile &) = default;
};

inline bool operator==(const io::ScalingSpec &a, const io::ScalingSpec &b) {
    return a.mode == b.mode && a.mins == b.mins && a.maxs == b.maxs;
}

[[nodiscard]] ModelFile make_model_file(const TrainingProblem &problem, const TrainedModel &model,
                                        io::ScalingSpec scaling = {});

/// "NESVM-MODEL 1" on the first line followed by a JSON body; doubles round-trip exactly.
[[nodiscard]] std::string serialize_model(const ModelFile &model);
[[nodiscard]] ModelFile parse_model(std::string_view text);

void save_model(const std::filesystem::path &path, const ModelFile &model);
[[nodiscard]] ModelFile load_model(const std::filesystem::path &path);

/// Fraction of rows whose predicted sign equals the label. Rows must already be scaled.
[[nodiscard]] double accuracy(const ModelFile &model, std::span<const LabeledRow> rows);

}  // namespace nesvm

#endif  // NESVM_MODEL_IO_HPP_
