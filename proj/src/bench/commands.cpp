#include "nesvm/cli.hpp"

#include "nesvm/error.hpp"
#include "nesvm/model_io.hpp"
#include "nesvm/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

namespace nesvm::cli {

namespace {

using clock_type = std::chrono::steady_clock;

TrainingProblem problem_from_rows(std::span<const LabeledRow> rows, const ModelSpec &spec) {
    if (spec.kernel.type == KernelType::rbf) {
        return make_problem(build_gram(rows, spec.kernel), spec);
    }
    return make_problem(build_dataset(rows), spec);
}

struct PreparedData {
    std::vector<LabeledRow> train;
    std::vector<LabeledRow> test;
    std::size_t dimension{0};
    io::ScalingSpec scaling;
};

PreparedData prepare(std::span<const io::SvmLightRecord> train, std::span<const io::SvmLightRecord> test,
                     std::size_t features, io::ScalingMode mode) {
    PreparedData out;
    out.dimension = features != 0 ? features : std::max(io::max_feature_index(train), io::max_feature_index(test));
    if (out.dimension == 0) {
        throw error{errc::empty_dataset, "no features in the training data"};
    }
    out.train = io::densify(train, out.dimension);
    out.test = io::densify(test, out.dimension);
    out.scaling = io::ScalingSpec::learn(out.train, mode);
    out.scaling.apply(out.train);
    out.scaling.apply(out.test);
    return out;
}

TrainedModel run_solver(const TrainingProblem &problem, const ModelOptions &opts) {
    const SolverConfig cfg = opts.solver_config();
    if (opts.homotopy) {
        return solve_homotopy(problem, cfg, opts.homotopy->first, opts.homotopy->second);
    }
    return solve(problem, cfg);
}

int exit_code_for(const error &e) {
    switch (e.code()) {
        case errc::non_finite_iterate:
        case errc::non_finite_evaluation:
        case errc::singular_system: return exit_failure;
        default: return exit_input_error;
    }
}

std::string format_real(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

}  // namespace

std::pair<double, double> parse_homotopy(const std::string &text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw error{errc::invalid_parameter, "homotopy must look like 'mu0:mustar', got '" + text + "'"};
    }
    try {
        std::size_t used0 = 0;
        std::size_t used1 = 0;
        const std::string a = text.substr(0, colon);
        const std::string b = text.substr(colon + 1);
        const double mu0 = std::stod(a, &used0);
        const double mu_star = std::stod(b, &used1);
        if (used0 != a.size() || used1 != b.size()) {
            throw std::invalid_argument{"trailing characters"};
        }
        if (!(mu_star > 0.0) || !(mu0 >= mu_star)) {
            throw error{errc::invalid_parameter, "homotopy needs mu0 >= mustar > 0"};
        }
        return {mu0, mu_star};
    } catch (const std::logic_error &) {
        throw error{errc::invalid_parameter, "homotopy must look like 'mu0:mustar', got '" + text + "'"};
    }
}

ModelSpec ModelOptions::spec() const {
    ModelSpec s;
    s.variant = variant;
    s.C = C;
    s.mu = mu;
    s.nu = nu;
    s.kernel.type = kernel;
    s.kernel.width = kernel_width;
    s.bias = bias;
    s.ls_lipschitz = strict_lipschitz ? LsLipschitz::strict : LsLipschitz::per_row;
    s.validate();
    return s;
}

SolverConfig ModelOptions::solver_config() const {
    SolverConfig c;
    c.epsilon = epsilon;
    c.max_iter = max_iter;
    c.validate();
    return c;
}

nlohmann::ordered_json to_json(const RunReport &r) {
    using json = nlohmann::ordered_json;
    json j;
    json cfg;
    cfg["variant"] = to_string(r.spec.variant);
    cfg["C"] = r.spec.C;
    cfg["mu"] = r.spec.mu;
    cfg["nu"] = r.spec.nu ? json(*r.spec.nu) : json(nullptr);
    cfg["kernel"] = r.spec.kernel.type == KernelType::rbf ? "rbf" : "linear";
    cfg["kernel_width"] = r.spec.kernel.width ? json(*r.spec.kernel.width) : json(nullptr);
    cfg["bias"] = r.spec.bias;
    cfg["epsilon"] = r.config.epsilon;
    cfg["max_iter"] = r.config.max_iter;
    cfg["homotopy"] = r.homotopy ? json{{"mu0", r.homotopy->first}, {"mu_star", r.homotopy->second}} : json(nullptr);
    j["config"] = std::move(cfg);
    j["samples"] = r.samples;
    j["dimension"] = r.dimension;
    j["wall_time_seconds"] = r.wall_time_seconds;
    j["iterations"] = r.iterations;
    j["evaluations"] = r.evaluations;
    j["matvecs"] = r.matvecs;
    j["final_objective"] = r.final_objective;
    j["converged"] = r.converged;
    j["train_accuracy"] = r.train_accuracy ? json(*r.train_accuracy) : json(nullptr);
    j["test_accuracy"] = r.test_accuracy ? json(*r.test_accuracy) : json(nullptr);
    json stages = json::array();
    for (const auto &s : r.stages) {
        stages.push_back({{"mu", s.mu},
                          {"nu", s.nu ? json(*s.nu) : json(nullptr)},
                          {"lipschitz", s.lipschitz},
                          {"tolerance", s.tolerance},
                          {"iterations", s.iterations},
                          {"objective", s.objective},
                          {"converged", s.converged}});
    }
    j["stages"] = std::move(stages);
    return j;
}

int run_train(const TrainOptions &options, std::ostream &out, std::ostream &err) {
    try {
        const ModelSpec spec = options.model.spec();
        auto records = io::read_svmlight_file(options.data);
        std::vector<io::SvmLightRecord> test_records;
        if (options.split_fraction) {
            auto parts = io::split(records, *options.split_fraction, options.seed);
            if (!parts.warning.empty()) {
                err << "warning: " << parts.warning << '\n';
            }
            records = std::move(parts.train);
            test_records = std::move(parts.test);
        } else if (options.test) {
            test_records = io::read_svmlight_file(*options.test);
        }
        const PreparedData data = prepare(records, test_records, options.model.features, options.model.scaling);
        const TrainingProblem problem = problem_from_rows(data.train, spec);

        if (options.verify) {
            const auto check = oracle::verify_gradients(problem.objective(), 20, options.seed);
            out << "gradient check: " << check.checked << " points, max relative error " << check.max_relative_error
                << " (" << check.skipped << " near kinks skipped)\n";
        }

        const auto start = clock_type::now();
        const TrainedModel model = run_solver(problem, options.model);
        const std::chrono::duration<double> elapsed = clock_type::now() - start;

        const ModelFile file = make_model_file(problem, model, data.scaling);
        save_model(options.out, file);

        RunReport report;
        report.spec = model.spec;
        report.config = options.model.solver_config();
        report.homotopy = options.model.homotopy;
        report.samples = data.train.size();
        report.dimension = data.dimension;
        report.wall_time_seconds = elapsed.count();
        report.iterations = model.iterations;
        report.evaluations = model.evaluations;
        report.matvecs = model.matvecs.total();
        report.final_objective = model.final_objective;
        report.converged = model.converged;
        report.train_accuracy = accuracy(file, data.train);
        if (!data.test.empty()) {
            report.test_accuracy = accuracy(file, data.test);
        }
        report.stages = model.stages;
        if (options.report) {
            std::ofstream rep{*options.report};
            if (!rep) {
                throw error{errc::io_failure, "cannot write " + options.report->string()};
            }
            rep << to_json(report).dump(2) << '\n';
        }

        out << (model.converged ? "converged" : "stopped at max_iter") << " after " << model.iterations
            << " iterations, objective " << format_real(model.final_objective) << ", train accuracy "
            << *report.train_accuracy;
        if (report.test_accuracy) {
            out << ", test accuracy " << *report.test_accuracy;
        }
        out << ", " << elapsed.count() << " s\n";
        return model.converged ? exit_ok : exit_not_converged;
    } catch (const error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

int run_predict(const PredictOptions &options, std::ostream &out, std::ostream &err) {
    try {
        const ModelFile model = load_model(options.model);
        const auto records = io::read_svmlight_file(options.data);
        if (io::max_feature_index(records) > model.feature_dimension) {
            throw error{errc::dimension_mismatch, "data uses feature index " +
                                                      std::to_string(io::max_feature_index(records)) +
                                                      " but the model has " + std::to_string(model.feature_dimension) +
                                                      " features"};
        }
        auto rows = io::densify(records, model.feature_dimension);
        model.scaling.apply(rows);

        std::ofstream file;
        if (options.out) {
            file.open(*options.out);
            if (!file) {
                throw error{errc::io_failure, "cannot write " + options.out->string()};
            }
        }
        std::ostream &sink = options.out ? static_cast<std::ostream &>(file) : out;
        std::size_t correct = 0;
        for (const auto &row : rows) {
            const int label = model.predict(row.features);
            sink << (label > 0 ? "+1" : "-1") << '\n';
            correct += static_cast<double>(label) == row.label ? 1 : 0;
        }
        if (!rows.empty()) {
            (options.out ? out : err) << "accuracy " << static_cast<double>(correct) / static_cast<double>(rows.size())
                                      << " (" << correct << "/" << rows.size() << ")\n";
        }
        return exit_ok;
    } catch (const error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

std::vector<SweepRow> sweep(const SweepOptions &options, std::ostream &err) {
    if (options.c_grid.empty()) {
        throw error{errc::invalid_parameter, "the C grid is empty"};
    }
    if (options.repeats == 0) {
        throw error{errc::invalid_parameter, "repeats must be at least 1"};
    }
    const auto records = io::read_svmlight_file(options.data);
    std::vector<io::SvmLightRecord> test_records;
    if (options.test) {
        test_records = io::read_svmlight_file(*options.test);
    }
    std::vector<std::size_t> sizes = options.sizes;
    if (sizes.empty()) {
        sizes.push_back(records.size());
    }
    const std::size_t features = options.model.features != 0
                                     ? options.model.features
                                     : std::max(io::max_feature_index(records), io::max_feature_index(test_records));

    struct Cell {
        std::size_t size;
        double c;
        bool baseline;
    };
    std::vector<Cell> cells;
    for (const auto size : sizes) {
        for (const double c : options.c_grid) {
            cells.push_back({size, c, false});
            if (options.baseline) {
                cells.push_back({size, c, true});
            }
        }
    }

    std::vector<SweepRow> rows(cells.size());
    std::vector<std::exception_ptr> failures(cells.size());
    std::atomic<std::size_t> next{0};

    const auto run_cell = [&](std::size_t index) {
        const Cell &cell = cells[index];
        const auto subset = cell.size == records.size() ? records : io::subsample(records, cell.size, options.seed);
        const PreparedData data = prepare(subset, test_records, features, options.model.scaling);
        ModelOptions mopts = options.model;
        mopts.C = cell.c;
        const TrainingProblem problem = problem_from_rows(data.train, mopts.spec());

        std::vector<double> times;
        std::vector<double> iters;
        std::size_t evaluations = 0;
        std::size_t converged = 0;
        TrainedModel last;
        for (std::size_t r = 0; r < options.repeats; ++r) {
            const auto start = clock_type::now();
            if (cell.baseline) {
                auto res = oracle::subgradient_reference(problem.objective(), options.baseline_iterations);
                last = TrainedModel{};
                last.w = std::move(res.w);
                last.spec = problem.spec();
                last.iterations = options.baseline_iterations;
            } else {
                last = run_solver(problem, mopts);
            }
            const std::chrono::duration<double> elapsed = clock_type::now() - start;
            times.push_back(elapsed.count());
            iters.push_back(static_cast<double>(last.iterations));
            evaluations += cell.baseline ? last.iterations : last.evaluations;
            converged += last.converged ? 1 : 0;
        }
        const ModelFile file = make_model_file(problem, last, data.scaling);

        SweepRow row;
        row.c = cell.c;
        row.n = data.train.size();
        row.solver = cell.baseline ? "subgradient" : "nesvm";
        row.repeats = options.repeats;
        const double k = static_cast<double>(times.size());
        row.mean_time = std::accumulate(times.begin(), times.end(), 0.0) / k;
        row.mean_iters = std::accumulate(iters.begin(), iters.end(), 0.0) / k;
        if (times.size() > 1) {
            double ss = 0.0;
            for (const double t : times) {
                ss += (t - row.mean_time) * (t - row.mean_time);
            }
            row.std_time = std::sqrt(ss / (k - 1.0));
        }
        // Each solver pass does one objective evaluation, so the per-pass cost is time over evaluations.
        row.time_per_iter = row.mean_time / std::max(1.0, static_cast<double>(evaluations) / k);
        row.accuracy = accuracy(file, data.test.empty() ? data.train : data.test);
        row.converged = converged;
        rows[index] = std::move(row);
    };

    const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                run_cell(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, cells.size());
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (failures[i]) {
            err << "sweep cell " << i << " (C=" << cells[i].c << ", n=" << cells[i].size << ") failed\n";
            std::rethrow_exception(failures[i]);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string csv = "c,n,mean_time,std_time,mean_iters,accuracy,solver,repeats,time_per_iter,converged\n";
    for (const auto &r : rows) {
        csv += format_real(r.c) + ',' + std::to_string(r.n) + ',' + format_real(r.mean_time) + ',' +
               format_real(r.std_time) + ',' + format_real(r.mean_iters) + ',' + format_real(r.accuracy) + ',' +
               r.solver + ',' + std::to_string(r.repeats) + ',' + format_real(r.time_per_iter) + ',' +
               std::to_string(r.converged) + '\n';
    }
    return csv;
}

int run_sweep(const SweepOptions &options, std::ostream &out, std::ostream &err) {
    try {
        const auto rows = sweep(options, err);
        const std::string csv = sweep_csv(rows);
        if (options.out) {
            std::ofstream file{*options.out};
            if (!file) {
                throw error{errc::io_failure, "cannot write " + options.out->string()};
            }
            file << csv;
        } else {
            out << csv;
        }
        return exit_ok;
    } catch (const error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace nesvm::cli
