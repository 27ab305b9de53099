#ifndef NESVM_IO_INGEST_HPP_
#define NESVM_IO_INGEST_HPP_
#pragma once

#include "nesvm/data_model.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nesvm::io {

/// One line of a LIBSVM / SVM-Light file. Indices are 1-based and strictly increasing.
struct SvmLightRecord {
    double label{};
    std::vector<std::pair<std::size_t, double>> entries;

    friend bool operator==(const SvmLightRecord &, const SvmLightRecord &) = default;
};

/**
 * @brief Parses "<label> <idx>:<val> ..." lines; '#' starts a comment, blank lines are skipped.
 * @details Labels +1/1 map to +1 and −1/0 map to −1; anything else throws
 *          unmappable_label. Errors carry the 1-based line number.
 */
[[nodiscard]] std::vector<SvmLightRecord> parse_svmlight(std::istream &in);
/// Reads a file, transparently inflating it when the name ends in ".gz".
[[nodiscard]] std::vector<SvmLightRecord> read_svmlight_file(const std::filesystem::path &path);

/// Canonical text: "+1"/"-1" labels and 17 significant digits per value.
[[nodiscard]] std::string serialize_svmlight(std::span<const SvmLightRecord> records);
void write_svmlight_file(const std::filesystem::path &path, std::span<const SvmLightRecord> records);

[[nodiscard]] std::size_t max_feature_index(std::span<const SvmLightRecord> records) noexcept;

/// Dense rows of width @p dimension (0 means the largest index seen); missing entries are zeros.
[[nodiscard]] std::vector<LabeledRow> densify(std::span<const SvmLightRecord> records, std::size_t dimension = 0);

/// densify + build_dataset
[[nodiscard]] Dataset to_dataset(std::span<const SvmLightRecord> records, std::size_t dimension = 0);

enum class ScalingMode { none, minmax_per_feature, unit_l2_per_sample };

[[nodiscard]] ScalingMode parse_scaling_mode(const std::string &name);

/// Feature scaling learned on a training split and replayed on any other split.
struct ScalingSpec {
    ScalingMode mode{ScalingMode::none};
    Vector mins;
    Vector maxs;

    [[nodiscard]] static ScalingSpec learn(std::span<const LabeledRow> train, ScalingMode mode);
    void apply(std::vector<LabeledRow> &rows) const;
};

struct SplitResult {
    std::vector<SvmLightRecord> train;
    std::vector<SvmLightRecord> test;
    bool stratified{true};
    /// Non-empty when stratification had to be abandoned.
    std::string warning;
};

/**
 * @brief Seeded, class-stratified train/test split.
 * @details The training split gets round(fraction·n) records (kept within
 *          [1, n−1]). Each class with at least two records is represented in
 *          both halves. With a single class the split falls back to a plain
 *          shuffle and sets a warning.
 */
[[nodiscard]] SplitResult split(std::span<const SvmLightRecord> records, double train_fraction, std::uint64_t seed);

/// Seeded subset of @p count records, original order preserved.
[[nodiscard]] std::vector<SvmLightRecord> subsample(std::span<const SvmLightRecord> records, std::size_t count,
                                                    std::uint64_t seed);

}  // namespace nesvm::io

#endif  // NESVM_IO_INGEST_HPP_
