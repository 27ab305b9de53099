// Command-line front end: train, predict and benchmark sweeps.

#include "nesvm/cli.hpp"
#include "nesvm/error.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <string>

namespace {

void add_model_flags(CLI::App &cmd, nesvm::cli::ModelOptions &m, std::string &variant, std::string &kernel,
                     std::string &bias, std::string &homotopy, std::string &scaling) {
    cmd.add_option("--model", variant, "SVM variant")->check(CLI::IsMember({"csvm", "lpsvm", "lssvm"}))->capture_default_str();
    cmd.add_option("--c", m.C, "SVM parameter C")->capture_default_str();
    cmd.add_option("--mu", m.mu, "hinge smoothing parameter")->capture_default_str();
    cmd.add_option("--nu", m.nu, "l1 smoothing parameter (LP-SVM)");
    cmd.add_option("--eps", m.epsilon, "stop when the objective changes by less than this")->capture_default_str();
    cmd.add_option("--max-iter", m.max_iter, "iteration cap")->capture_default_str();
    cmd.add_option("--kernel", kernel, "kernel")->check(CLI::IsMember({"linear", "rbf"}))->capture_default_str();
    cmd.add_option("--width", m.kernel_width, "RBF width (default: number of features)");
    cmd.add_option("--bias", bias, "append an unpenalized bias")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
    cmd.add_option("--homotopy", homotopy, "'off' or 'mu0:mustar'")->capture_default_str();
    cmd.add_flag("--strict-lipschitz", m.strict_lipschitz, "LS-SVM: use the spectral-norm Lipschitz constant");
    cmd.add_option("--scaling", scaling, "feature scaling")->check(CLI::IsMember({"none", "minmax", "unit-l2"}))->capture_default_str();
    cmd.add_option("--features", m.features, "feature dimension (default: largest index in the data)");
}

void finish_model_flags(nesvm::cli::ModelOptions &m, const std::string &variant, const std::string &kernel,
                        const std::string &bias, const std::string &homotopy, const std::string &scaling) {
    m.variant = nesvm::parse_variant(variant);
    m.kernel = kernel == "rbf" ? nesvm::KernelType::rbf : nesvm::KernelType::linear;
    m.bias = bias == "on";
    if (homotopy != "off") {
        m.homotopy = nesvm::cli::parse_homotopy(homotopy);
    }
    m.scaling = nesvm::io::parse_scaling_mode(scaling);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Primal SVM training with smoothed losses and accelerated gradients"};
    app.require_subcommand(1);

    std::string variant = "csvm";
    std::string kernel = "linear";
    std::string bias = "off";
    std::string homotopy = "off";
    std::string scaling = "none";

    nesvm::cli::TrainOptions train;
    std::string train_out = train.out.string();
    std::string train_report;
    std::string train_test;
    double train_split = 0.0;
    auto *train_cmd = app.add_subcommand("train", "train a model");
    train_cmd->add_option("--data", train.data, "training data (LIBSVM format, .gz accepted)")->required();
    train_cmd->add_option("--test", train_test, "test data for reporting accuracy");
    train_cmd->add_option("--split", train_split, "hold out (1 - fraction) of --data for testing");
    train_cmd->add_option("--seed", train.seed, "seed for --split")->capture_default_str();
    train_cmd->add_option("--out", train_out, "model file")->capture_default_str();
    train_cmd->add_option("--report", train_report, "JSON run report");
    train_cmd->add_flag("--verify", train.verify, "check analytic gradients against finite differences first");
    add_model_flags(*train_cmd, train.model, variant, kernel, bias, homotopy, scaling);

    nesvm::cli::PredictOptions predict;
    std::string predict_out;
    auto *predict_cmd = app.add_subcommand("predict", "predict labels with a trained model");
    predict_cmd->add_option("--model", predict.model, "model file")->required();
    predict_cmd->add_option("--data", predict.data, "data to classify")->required();
    predict_cmd->add_option("--out", predict_out, "prediction file (default: stdout)");

    nesvm::cli::SweepOptions sweep;
    std::string sweep_out;
    std::string sweep_test;
    auto *sweep_cmd = app.add_subcommand("sweep", "time training over a grid of C values and training-set sizes");
    sweep_cmd->add_option("--data", sweep.data, "training data")->required();
    sweep_cmd->add_option("--test", sweep_test, "test data for the accuracy column");
    sweep_cmd->add_option("--c-grid", sweep.c_grid, "C values")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--sizes", sweep.sizes, "training-set sizes (default: all)")->delimiter(',');
    sweep_cmd->add_option("--repeats", sweep.repeats, "timed runs per cell")->capture_default_str();
    sweep_cmd->add_option("--seed", sweep.seed, "subsampling seed")->capture_default_str();
    sweep_cmd->add_flag("--baseline", sweep.baseline, "also time the subgradient baseline");
    sweep_cmd->add_option("--baseline-iters", sweep.baseline_iterations, "subgradient iterations")->capture_default_str();
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "CSV output (default: stdout)");
    add_model_flags(*sweep_cmd, sweep.model, variant, kernel, bias, homotopy, scaling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return nesvm::cli::exit_input_error;
    }

    try {
        if (*train_cmd) {
            finish_model_flags(train.model, variant, kernel, bias, homotopy, scaling);
            train.out = train_out;
            if (!train_report.empty()) train.report = train_report;
            if (!train_test.empty()) train.test = train_test;
            if (train_split > 0.0) train.split_fraction = train_split;
            return nesvm::cli::run_train(train, std::cout, std::cerr);
        }
        if (*predict_cmd) {
            if (!predict_out.empty()) predict.out = predict_out;
            return nesvm::cli::run_predict(predict, std::cout, std::cerr);
        }
        finish_model_flags(sweep.model, variant, kernel, bias, homotopy, scaling);
        if (!sweep_out.empty()) sweep.out = sweep_out;
        if (!sweep_test.empty()) sweep.test = sweep_test;
        return nesvm::cli::run_sweep(sweep, std::cout, std::cerr);
    } catch (const nesvm::error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return nesvm::cli::exit_input_error;
    }
}
