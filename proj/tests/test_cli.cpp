#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nesvm/cli.hpp"
#include "nesvm/error.hpp"
#include "nesvm/model_io.hpp"
#include "support.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nesvm;
using namespace nesvm::cli;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("nesvm_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    [[nodiscard]] fs::path operator/(const std::string &name) const { return path / name; }
};

void write_text(const fs::path &p, const std::string &text) {
    std::ofstream out{p};
    out << text;
}

std::string read_text(const fs::path &p) {
    std::ifstream in{p, std::ios::binary};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string separable = "+1 1:2 2:1\n+1 1:1.5 2:2\n-1 1:-1 2:-1.5\n-1 1:-2 2:-0.5\n";

std::string random_file(std::mt19937_64 &rng, std::size_t n, std::size_t p) {
    const Dataset d = testing::random_dataset(rng, n, p);
    std::ostringstream out;
    for (std::size_t i = 0; i < n; ++i) {
        out << (d.labels()[i] > 0 ? "+1" : "-1");
        for (std::size_t j = 0; j < p; ++j) {
            out << ' ' << j + 1 << ':' << d.features()(i, j);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

TEST_CASE("train on a separable toy") {
    TempDir dir;
    write_text(dir / "toy.svm", separable);
    TrainOptions opts;
    opts.data = dir / "toy.svm";
    opts.out = dir / "toy.model";
    opts.report = dir / "report.json";
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run_train(opts, out, err) == exit_ok);
    const auto report = nlohmann::json::parse(read_text(dir / "report.json"));
    CHECK(report["converged"] == true);
    CHECK(report["train_accuracy"] == 1.0);
    CHECK(report["wall_time_seconds"].get<double>() >= 0.0);
}

TEST_CASE("extreme C values both complete") {
    TempDir dir;
    write_text(dir / "toy.svm", separable);
    for (const double C : {0.001, 1000.0}) {
        TrainOptions opts;
        opts.data = dir / "toy.svm";
        opts.model.C = C;
        opts.out = dir / "m.model";
        opts.report = dir / "r.json";
        std::ostringstream out;
        std::ostringstream err;
        CHECK(run_train(opts, out, err) == exit_ok);
        CHECK(nlohmann::json::parse(read_text(dir / "r.json"))["config"]["C"] == C);
    }
}

TEST_CASE("homotopy report lists the stages") {
    TempDir dir;
    write_text(dir / "toy.svm", separable);
    TrainOptions opts;
    opts.data = dir / "toy.svm";
    opts.model.homotopy = parse_homotopy("5:0.5");
    opts.out = dir / "m.model";
    opts.report = dir / "r.json";
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(run_train(opts, out, err) == exit_ok);
    const auto stages = nlohmann::json::parse(read_text(dir / "r.json"))["stages"];
    REQUIRE(stages.size() == 10);
    CHECK(stages[0]["mu"] == 5.0);
    CHECK(stages[1]["mu"] == 2.5);
    CHECK(stages[5]["mu"].get<double>() == doctest::Approx(5.0 / 6.0));
    CHECK(stages[9]["mu"] == 0.5);
    CHECK_THROWS_AS((void)parse_homotopy("5"), error);
    CHECK_THROWS_AS((void)parse_homotopy("1:2"), error);
}

TEST_CASE("exit codes") {
    TempDir dir;
    std::ostringstream out;
    std::ostringstream err;
    TrainOptions missing;
    missing.data = dir / "nope.svm";
    missing.out = dir / "m.model";
    CHECK(run_train(missing, out, err) == exit_input_error);

    write_text(dir / "bad.svm", "+1 1:1\n3 1:2\n");
    TrainOptions bad;
    bad.data = dir / "bad.svm";
    bad.out = dir / "m.model";
    CHECK(run_train(bad, out, err) == exit_input_error);
    CHECK(err.str().find("line 2") != std::string::npos);

    std::mt19937_64 rng(3);
    write_text(dir / "r.svm", random_file(rng, 50, 4));
    TrainOptions capped;
    capped.data = dir / "r.svm";
    capped.out = dir / "m.model";
    capped.model.max_iter = 2;
    capped.model.epsilon = 1e-12;
    CHECK(run_train(capped, out, err) == exit_not_converged);

    TrainOptions lp;
    lp.data = dir / "r.svm";
    lp.out = dir / "m.model";
    lp.model.variant = Variant::lpsvm;
    CHECK(run_train(lp, out, err) == exit_input_error);
}

TEST_CASE("model file round-trip keeps predictions") {
    std::mt19937_64 rng(4);
    TempDir dir;
    write_text(dir / "r.svm", random_file(rng, 40, 3));
    for (const KernelType k : {KernelType::linear, KernelType::rbf}) {
        for (const bool bias : {false, true}) {
            TrainOptions opts;
            opts.data = dir / "r.svm";
            opts.out = dir / "m.model";
            opts.model.kernel = k;
            opts.model.bias = bias;
            opts.model.scaling = io::ScalingMode::minmax_per_feature;
            std::ostringstream out;
            std::ostringstream err;
            REQUIRE(run_train(opts, out, err) == exit_ok);
            const ModelFile a = load_model(dir / "m.model");
            const ModelFile b = parse_model(serialize_model(a));
            CHECK(a == b);
            CHECK(serialize_model(b) == read_text(dir / "m.model"));
            for (int trial = 0; trial < 100; ++trial) {
                const Vector x = testing::random_vector(rng, 3, 3.0);
                REQUIRE(a.decision_value(x) == b.decision_value(x));
            }
        }
    }
}

TEST_CASE("prediction sign rule") {
    ModelFile m;
    m.feature_dimension = 1;
    m.weights = Vector{1.0};
    CHECK(m.predict(Vector{2.0}) == 1);
    CHECK(m.predict(Vector{0.0}) == 1);
    CHECK(m.predict(Vector{-0.5}) == -1);

    TempDir dir;
    save_model(dir / "m.model", m);
    write_text(dir / "x.svm", "+1 1:2\n+1 1:0\n-1 1:-3\n");
    PredictOptions opts;
    opts.model = dir / "m.model";
    opts.data = dir / "x.svm";
    opts.out = dir / "pred.txt";
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run_predict(opts, out, err) == exit_ok);
    CHECK(read_text(dir / "pred.txt") == "+1\n+1\n-1\n");
    CHECK(out.str().find("accuracy 1") != std::string::npos);

    write_text(dir / "wide.svm", "+1 2:1\n");
    opts.data = dir / "wide.svm";
    CHECK(run_predict(opts, out, err) == exit_input_error);
}

TEST_CASE("kernel decision value expands over the support points") {
    ModelFile m;
    m.spec.kernel = KernelParams{KernelType::rbf, 2.0};
    m.spec.bias = true;
    m.feature_dimension = 1;
    m.support_points = Matrix(2, 1);
    m.support_points(0, 0) = 0.0;
    m.support_points(1, 0) = 1.0;
    m.support_labels = Vector{1.0, -1.0};
    m.weights = Vector{0.5, 0.25, 0.1};
    const Vector x{0.5};
    const double expected = 0.5 * std::exp(-0.25 / 2.0) - 0.25 * std::exp(-0.25 / 2.0) + 0.1;
    CHECK(m.decision_value(x) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("malformed model files are rejected") {
    CHECK_THROWS_AS((void)parse_model("garbage"), error);
    CHECK_THROWS_AS((void)parse_model("NESVM-MODEL 1\n{\"variant\": 3}"), error);
}

TEST_CASE("sweep rows, schema and determinism") {
    std::mt19937_64 rng(5);
    TempDir dir;
    write_text(dir / "r.svm", random_file(rng, 60, 4));
    SweepOptions opts;
    opts.data = dir / "r.svm";
    opts.repeats = 1;
    opts.threads = 2;
    std::ostringstream err;
    const auto rows = sweep(opts, err);
    REQUIRE(rows.size() == 7);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].c == opts.c_grid[i]);
        CHECK(rows[i].std_time == 0.0);
        CHECK(rows[i].n == 60);
        CHECK(rows[i].solver == "nesvm");
    }
    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("c,n,mean_time,std_time,mean_iters,accuracy,solver,repeats,time_per_iter,converged\n", 0) == 0);

    const auto again = sweep(opts, err);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(again[i].accuracy == rows[i].accuracy);
        CHECK(again[i].mean_iters == rows[i].mean_iters);
    }

    // Every numeric field parses back to the same double.
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    const double c = std::stod(line.substr(0, line.find(',')));
    CHECK(c == rows[0].c);

    SweepOptions sized = opts;
    sized.sizes = {20, 40};
    sized.c_grid = {1.0};
    sized.repeats = 3;
    sized.baseline = true;
    sized.baseline_iterations = 50;
    const auto cells = sweep(sized, err);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0].n == 20);
    CHECK(cells[2].n == 40);
    CHECK(cells[1].solver == "subgradient");
    CHECK(cells[0].std_time >= 0.0);
}
