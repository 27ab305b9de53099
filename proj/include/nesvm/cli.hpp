#ifndef NESVM_CLI_HPP_
#define NESVM_CLI_HPP_
#pragma once

#include "nesvm/io_ingest.hpp"
#include "nesvm/models.hpp"
#include "nesvm/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace nesvm::cli {

/// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_not_converged = 3;

/// Parses "mu0:mustar".
[[nodiscard]] std::pair<double, double> parse_homotopy(const std::string &text);

/// Shared model and solver flags of train and sweep.
struct ModelOptions {
    Variant variant{Variant::csvm};
    double C{1.0};
    double mu{5.0};
    std::optional<double> nu;
    double epsilon{1e-3};
    std::size_t max_iter{100000};
    KernelType kernel{KernelType::linear};
    std::optional<double> kernel_width;
    bool bias{false};
    std::optional<std::pair<double, double>> homotopy;
    bool strict_lipschitz{false};
    io::ScalingMode scaling{io::ScalingMode::none};
    /// 0 = infer from the data files
    std::size_t features{0};

    [[nodiscard]] ModelSpec spec() const;
    [[nodiscard]] SolverConfig solver_config() const;
};

struct TrainOptions {
    ModelOptions model;
    std::filesystem::path data;
    std::optional<std::filesystem::path> test;
    /// Hold out part of --data instead of reading --test.
    std::optional<double> split_fraction;
    std::uint64_t seed{42};
    std::filesystem::path out{"model.nesvm"};
    std::optional<std::filesystem::path> report;
    bool verify{false};
};

struct RunReport {
    ModelSpec spec;
    SolverConfig config;
    std::optional<std::pair<double, double>> homotopy;
    std::size_t samples{0};
    std::size_t dimension{0};
    double wall_time_seconds{0.0};
    std::size_t iterations{0};
    std::size_t evaluations{0};
    std::size_t matvecs{0};
    double final_objective{0.0};
    bool converged{false};
    std::optional<double> train_accuracy;
    std::optional<double> test_accuracy;
    std::vector<StageReport> stages;
};

/// Stable key order.
[[nodiscard]] nlohmann::ordered_json to_json(const RunReport &report);

[[nodiscard]] int run_train(const TrainOptions &options, std::ostream &out, std::ostream &err);

struct PredictOptions {
    std::filesystem::path model;
    std::filesystem::path data;
    std::optional<std::filesystem::path> out;
};

[[nodiscard]] int run_predict(const PredictOptions &options, std::ostream &out, std::ostream &err);

struct SweepOptions {
    ModelOptions model;
    std::filesystem::path data;
    std::optional<std::filesystem::path> test;
    std::vector<double> c_grid{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
    /// Training-set sizes; empty means the whole file.
    std::vector<std::size_t> sizes;
    std::size_t repeats{10};
    std::uint64_t seed{42};
    bool baseline{false};
    std::size_t baseline_iterations{1000};
    std::size_t threads{1};
    std::optional<std::filesystem::path> out;
};

struct SweepRow {
    double c{};
    std::size_t n{};
    double mean_time{};
    double std_time{};
    double mean_iters{};
    double accuracy{};
    std::string solver;
    std::size_t repeats{};
    double time_per_iter{};
    std::size_t converged{};
};

/// Runs every (size, C, solver) cell; rows come back in cell order.
[[nodiscard]] std::vector<SweepRow> sweep(const SweepOptions &options, std::ostream &err);

[[nodiscard]] std::string sweep_csv(const std::vector<SweepRow> &rows);

[[nodiscard]] int run_sweep(const SweepOptions &options, std::ostream &out, std::ostream &err);

}  // namespace nesvm::cli

#endif  // NESVM_CLI_HPP_
