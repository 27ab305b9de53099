#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nesvm/error.hpp"
#include "nesvm/models.hpp"
#include "nesvm/oracle.hpp"
#include "support.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <vector>

using namespace nesvm;

namespace {

Dataset single(double x, double y) { return build_dataset(std::vector<LabeledRow>{{{x}, y}}); }

ModelSpec make_spec(Variant v, double C, double mu = 5.0, std::optional<double> nu = std::nullopt) {
    ModelSpec s;
    s.variant = v;
    s.C = C;
    s.mu = mu;
    s.nu = nu;
    return s;
}

ModelSpec random_spec(std::mt19937_64 &rng, Variant v, bool bias, KernelType kernel) {
    ModelSpec s = make_spec(v, testing::log_uniform(rng, 0.05, 5.0), testing::log_uniform(rng, 0.1, 5.0));
    if (v == Variant::lpsvm) {
        s.nu = testing::log_uniform(rng, 0.1, 5.0);
    }
    s.bias = bias;
    s.kernel.type = kernel;
    return s;
}

}  // namespace

TEST_CASE("C-SVM examples") {
    const ObjectiveEval e = eval_csvm(single(1.0, 1.0), Vector{0.0}, make_spec(Variant::csvm, 1.0));
    CHECK(e.value == doctest::Approx(0.1));
    CHECK(e.gradient[0] == doctest::Approx(-0.2));
    CHECK(e.lipschitz == doctest::Approx(1.2));

    const Dataset d = single(1.0, 1.0);
    const auto f = [&](std::span<const double> w) { return eval_csvm(d, w, make_spec(Variant::csvm, 1.0)).value; };
    CHECK(oracle::fd_gradient(f, Vector{0.0})[0] == doctest::Approx(-0.2).epsilon(1e-8));

    // Every sample beyond the margin.
    const ObjectiveEval beyond = eval_csvm(single(1.0, 1.0), Vector{3.0}, make_spec(Variant::csvm, 1.0));
    CHECK(beyond.gradient == Vector{3.0});

    std::mt19937_64 rng(1);
    const Dataset r = testing::random_dataset(rng, 20, 3);
    const double l1 = eval_csvm(r, Vector(3, 0.0), make_spec(Variant::csvm, 0.5)).lipschitz;
    const double l2 = eval_csvm(r, Vector(3, 0.0), make_spec(Variant::csvm, 1.0)).lipschitz;
    CHECK(l2 - 1.0 == doctest::Approx(2.0 * (l1 - 1.0)).epsilon(1e-15));
}

TEST_CASE("LP-SVM examples") {
    const ObjectiveEval e = eval_lpsvm(single(1.0, 1.0), Vector{0.0}, make_spec(Variant::lpsvm, 1.0, 1.0, 1.0));
    CHECK(e.value == doctest::Approx(0.5));
    CHECK(e.gradient[0] == doctest::Approx(-1.0));
    CHECK(e.lipschitz == doctest::Approx(2.0));

    const ObjectiveEval lin =
        eval_lpsvm(build_dataset(std::vector<LabeledRow>{{{1.0, 0.5}, 1.0}}), Vector{3.0, -2.0},
                   make_spec(Variant::lpsvm, 1.0, 1.0, 1.0));
    CHECK(lin.gradient == Vector{1.0, -1.0});

    const Dataset d = single(1.0, 1.0);
    const double a = eval_lpsvm(d, Vector{0.0}, make_spec(Variant::lpsvm, 1.0, 1.0, 0.5)).lipschitz;
    const double b = eval_lpsvm(d, Vector{0.0}, make_spec(Variant::lpsvm, 1.0, 1.0, 0.25)).lipschitz;
    // The l1 smoothing is nu here; halving it doubles 1/nu.
    CHECK(b - a == doctest::Approx(1.0 / 0.5));

    CHECK_THROWS_AS((void)eval_lpsvm(d, Vector{0.0}, make_spec(Variant::lpsvm, 1.0, 1.0)), error);
}

TEST_CASE("LS-SVM examples") {
    const ObjectiveEval e = eval_lssvm(single(1.0, 1.0), Vector{0.0}, make_spec(Variant::lssvm, 1.0));
    CHECK(e.value == 1.0);
    CHECK(e.gradient[0] == -2.0);
    CHECK(e.lipschitz == 3.0);

    const Dataset fit = build_dataset(std::vector<LabeledRow>{{{1.0}, 1.0}, {{1.0}, 1.0}});
    CHECK(eval_lssvm(fit, Vector{1.0}, make_spec(Variant::lssvm, 2.0)).gradient == Vector{1.0});

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset d = testing::random_dataset(rng, 5 + rng() % 20, 1 + rng() % 6);
        const double C = testing::log_uniform(rng, 0.01, 10.0);
        const Vector w = oracle::lssvm_direct(d, C);
        const ObjectiveEval at = eval_lssvm(d, w, make_spec(Variant::lssvm, C));
        double gmax = 0.0;
        for (const double g : at.gradient) {
            gmax = std::max(gmax, std::abs(g));
        }
        CHECK(gmax < 1e-8);
    }
}

TEST_CASE("variant mismatch and bad parameters") {
    const Dataset d = single(1.0, 1.0);
    CHECK_THROWS_AS((void)eval_csvm(d, Vector{0.0}, make_spec(Variant::lssvm, 1.0)), error);
    CHECK_THROWS_AS((void)eval_csvm(d, Vector{0.0, 1.0}, make_spec(Variant::csvm, 1.0)), error);
    CHECK_THROWS_AS((void)eval_csvm(d, Vector{0.0}, make_spec(Variant::csvm, -1.0)), error);
    CHECK_THROWS_AS((void)eval_csvm(d, Vector{0.0}, make_spec(Variant::csvm, 1.0, 0.0)), error);
    CHECK(parse_variant("lpsvm") == Variant::lpsvm);
    CHECK(to_string(Variant::lssvm) == "lssvm");
}

TEST_CASE("identity kernel reduces to per-sample indicator features") {
    // Points far apart relative to the width give an exact identity Gram matrix.
    const std::vector<LabeledRow> rows{{{0.0}, 1.0}, {{100.0}, -1.0}, {{200.0}, 1.0}};
    const GramDataset g = build_gram(rows, KernelParams{KernelType::rbf, 1.0});
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            REQUIRE(g.kernel()(i, j) == (i == j ? 1.0 : 0.0));
        }
    }
    Matrix indicator(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        indicator(i, i) = rows[i].label;
    }
    const Dataset linear{indicator, Vector{1.0, -1.0, 1.0}};

    ModelSpec kspec = make_spec(Variant::csvm, 2.0, 0.7);
    kspec.kernel = g.params();
    const ModelSpec lspec = make_spec(Variant::csvm, 2.0, 0.7);
    const Vector alpha{0.3, -1.2, 2.5};
    const ObjectiveEval ke = kernelize(kspec, g, alpha);
    const ObjectiveEval le = eval_csvm(linear, alpha, lspec);
    CHECK(ke.value == le.value);
    CHECK(ke.gradient == le.gradient);
}

TEST_CASE("zero coefficients leave only the loss at zero margins") {
    const std::vector<LabeledRow> rows{{{0.0}, 1.0}, {{1.0}, -1.0}, {{3.0}, 1.0}};
    const GramDataset g = build_gram(rows, KernelParams{KernelType::rbf, std::nullopt});
    ModelSpec spec = make_spec(Variant::csvm, 1.5, 5.0);
    spec.kernel = g.params();
    const ObjectiveEval e = kernelize(spec, g, Vector(3, 0.0));
    // Rows of K·Y have unit infinity norm (the diagonal), so each loss is 1/(2μ).
    CHECK(e.value == doctest::Approx(1.5 * 3.0 / (2.0 * 5.0)).epsilon(1e-15));
}

TEST_CASE("two-point RBF toy matches finite differences") {
    const std::vector<LabeledRow> rows{{{0.0}, 1.0}, {{1.0}, -1.0}};
    const GramDataset g = build_gram(rows, KernelParams{KernelType::rbf, std::nullopt});
    for (const Variant v : {Variant::csvm, Variant::lpsvm, Variant::lssvm}) {
        ModelSpec spec = make_spec(v, 1.0, 0.5, v == Variant::lpsvm ? std::optional<double>{0.3} : std::nullopt);
        spec.kernel = g.params();
        const Vector alpha{0.37, -0.81};
        const ObjectiveEval e = kernelize(spec, g, alpha);
        const Vector fd =
            oracle::fd_gradient([&](std::span<const double> a) { return kernelize(spec, g, a).value; }, alpha);
        CHECK(testing::max_abs_diff(e.gradient, fd) / std::max(1.0, norm(e.gradient)) < 1e-6);
    }
}

TEST_CASE("gradients match finite differences for every configuration") {
    std::mt19937_64 rng(21);
    for (const Variant v : {Variant::csvm, Variant::lpsvm, Variant::lssvm}) {
        for (const KernelType k : {KernelType::linear, KernelType::rbf}) {
            for (const bool bias : {false, true}) {
                const Dataset d = testing::random_dataset(rng, 12, 4);
                const TrainingProblem problem = make_problem(d, random_spec(rng, v, bias, k));
                const oracle::GradientCheck check = oracle::verify_gradients(problem.objective(), 20, rng());
                CAPTURE(to_string(v));
                CAPTURE(bias);
                CHECK(check.checked == 20);
                CHECK(check.max_relative_error < 1e-6);
            }
        }
    }
}

TEST_CASE("objectives are convex along random segments") {
    std::mt19937_64 rng(22);
    for (const Variant v : {Variant::csvm, Variant::lpsvm, Variant::lssvm}) {
        for (const KernelType k : {KernelType::linear, KernelType::rbf}) {
            const Dataset d = testing::random_dataset(rng, 15, 3);
            const TrainingProblem problem = make_problem(d, random_spec(rng, v, rng() % 2 == 0, k));
            const Objective &obj = problem.objective();
            for (int trial = 0; trial < 200; ++trial) {
                const Vector a = testing::random_vector(rng, obj.dimension(), 2.0);
                const Vector b = testing::random_vector(rng, obj.dimension(), 2.0);
                const double t = testing::uniform(rng, 0.0, 1.0);
                Vector mid(a.size());
                for (std::size_t j = 0; j < a.size(); ++j) {
                    mid[j] = t * a[j] + (1.0 - t) * b[j];
                }
                const double lhs = obj.value(mid);
                const double rhs = t * obj.value(a) + (1.0 - t) * obj.value(b);
                REQUIRE(lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
            }
        }
    }
}

TEST_CASE("assembled Lipschitz constant bounds the gradient variation") {
    std::mt19937_64 rng(23);
    for (const Variant v : {Variant::csvm, Variant::lpsvm, Variant::lssvm}) {
        for (const KernelType k : {KernelType::linear, KernelType::rbf}) {
            const Dataset d = testing::random_dataset(rng, 10, 3);
            ModelSpec spec = random_spec(rng, v, rng() % 2 == 0, k);
            spec.ls_lipschitz = LsLipschitz::strict;
            const TrainingProblem problem = make_problem(d, spec);
            const Objective &obj = problem.objective();
            for (int trial = 0; trial < 200; ++trial) {
                const Vector a = testing::random_vector(rng, obj.dimension());
                const Vector b = testing::random_vector(rng, obj.dimension());
                const Vector ga = obj.evaluate(a).gradient;
                const Vector gb = obj.evaluate(b).gradient;
                Vector dg(a.size());
                Vector dw(a.size());
                for (std::size_t j = 0; j < a.size(); ++j) {
                    dg[j] = ga[j] - gb[j];
                    dw[j] = a[j] - b[j];
                }
                REQUIRE(norm(dg) <= obj.lipschitz() * norm(dw) * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("C-SVM smoothing sandwich") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 200; ++trial) {
        const Dataset d = testing::random_dataset(rng, 1 + rng() % 20, 1 + rng() % 4);
        const ModelSpec spec = make_spec(Variant::csvm, testing::log_uniform(rng, 0.01, 100.0),
                                         testing::log_uniform(rng, 1e-3, 10.0));
        const TrainingProblem problem = make_problem(d, spec);
        const Vector w = testing::random_vector(rng, d.dimension(), 2.0);
        const double smooth = problem.objective().value(w);
        const double exact = nonsmooth_objective(problem.objective(), w);
        double gap = 0.0;
        for (const double r : d.row_inf_norms()) {
            gap += r;
        }
        gap *= spec.C * spec.mu / 2.0;
        const double slack = 1e-12 * std::max(1.0, exact);
        REQUIRE(smooth <= exact + slack);
        REQUIRE(exact <= smooth + gap + slack);
    }
}

TEST_CASE("bias is not regularized") {
    std::mt19937_64 rng(25);
    for (const Variant v : {Variant::csvm, Variant::lpsvm, Variant::lssvm}) {
        const Dataset d = testing::random_dataset(rng, 10, 3);
        ModelSpec spec = random_spec(rng, v, true, KernelType::linear);
        spec.C = 1.0;
        const TrainingProblem problem = make_problem(d, spec);
        const Dataset &a = problem.effective();
        Vector w = testing::random_vector(rng, a.dimension());
        w.back() = 5.0;
        const ObjectiveEval e = problem.objective().evaluate(w);

        Vector residual(a.samples());
        const Vector m = margins(a, w);
        if (v == Variant::lssvm) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                residual[i] = 2.0 * (1.0 - m[i]);
            }
        } else {
            residual = hinge_dual_from_margins(m, a.row_inf_norms(), spec.mu);
        }
        const Vector loss = hinge_gradient(a, residual);
        CHECK(e.gradient.back() == loss.back());
    }
}

TEST_CASE("bias must be appended exactly once") {
    const Dataset d = single(1.0, 1.0);
    ModelSpec spec = make_spec(Variant::csvm, 1.0);
    spec.bias = true;
    CHECK_THROWS_AS((void)make_problem(augment_bias(d), spec), error);
    const TrainingProblem p = make_problem(d, spec);
    CHECK(p.effective().dimension() == 2);
    CHECK(p.objective().has_bias());
}
