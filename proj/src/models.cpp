#include "nesvm/models.hpp"

#include "nesvm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace nesvm {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

std::shared_ptr<const Dataset> borrow(const Dataset &d) {
    // non-owning: the caller keeps d alive for the duration of the call
    return std::shared_ptr<const Dataset>{std::shared_ptr<const Dataset>{}, &d};
}

void require_variant(const ModelSpec &spec, Variant want) {
    if (spec.variant != want) {
        throw error{errc::invalid_parameter, "expected a " + to_string(want) + " spec, got " + to_string(spec.variant)};
    }
}

}  // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::csvm: return "csvm";
        case Variant::lpsvm: return "lpsvm";
        case Variant::lssvm: return "lssvm";
    }
    return "unknown";
}

Variant parse_variant(const std::string &name) {
    if (name == "csvm") return Variant::csvm;
    if (name == "lpsvm") return Variant::lpsvm;
    if (name == "lssvm") return Variant::lssvm;
    throw error{errc::invalid_parameter, "unknown model variant '" + name + "' (expected csvm, lpsvm or lssvm)"};
}

void ModelSpec::validate() const {
    if (!positive_finite(C)) {
        throw error{errc::invalid_parameter, "C must be finite and positive, got " + std::to_string(C)};
    }
    if (variant != Variant::lssvm && !positive_finite(mu)) {
        throw error{errc::invalid_parameter, "mu must be finite and positive, got " + std::to_string(mu)};
    }
    if (variant == Variant::lpsvm) {
        if (!nu) {
            throw error{errc::missing_nu, "LP-SVM needs the l1 smoothing parameter nu"};
        }
        if (!positive_finite(*nu)) {
            throw error{errc::invalid_parameter, "nu must be finite and positive, got " + std::to_string(*nu)};
        }
    }
    if (kernel.type == KernelType::rbf && kernel.width && !positive_finite(*kernel.width)) {
        throw error{errc::non_positive_kernel_width, "RBF width must be finite and positive"};
    }
}

Objective::Objective(std::shared_ptr<const Dataset> data, ModelSpec spec, std::shared_ptr<const Matrix> kernel) :
    data_{std::move(data)},
    spec_{std::move(spec)},
    kernel_{std::move(kernel)} {
    spec_.validate();
    if (data_->bias_columns() != (spec_.bias ? 1u : 0u)) {
        throw error{errc::dimension_mismatch, "data carries " + std::to_string(data_->bias_columns()) +
                                                  " bias columns but the spec " +
                                                  (spec_.bias ? "expects one" : "expects none")};
    }
    if (spec_.kernel.type == KernelType::rbf) {
        if (!kernel_) {
            throw error{errc::invalid_parameter, "an RBF objective needs its kernel matrix"};
        }
        if (kernel_->rows() != data_->samples() || kernel_->cols() != data_->samples() ||
            data_->dimension() != data_->samples() + data_->bias_columns()) {
            throw error{errc::dimension_mismatch, "kernel matrix does not match the effective data"};
        }
        // ‖K‖₂ ≤ max absolute row sum
        for (std::size_t i = 0; i < kernel_->rows(); ++i) {
            double s = 0.0;
            for (const double v : kernel_->row(i)) {
                s += std::abs(v);
            }
            kernel_norm_bound_ = std::max(kernel_norm_bound_, s);
        }
    } else if (kernel_) {
        throw error{errc::invalid_parameter, "a linear objective takes no kernel matrix"};
    }
    lipschitz_ = compute_lipschitz();
}

std::size_t Objective::penalized() const noexcept { return dimension() - (spec_.bias ? 1 : 0); }

double Objective::regularizer_lipschitz() const {
    if (spec_.variant == Variant::lpsvm) {
        return l1_lipschitz(*spec_.nu);
    }
    return spec_.kernel.type == KernelType::rbf ? kernel_norm_bound_ : 1.0;
}

double Objective::compute_lipschitz() const {
    const double reg = regularizer_lipschitz();
    switch (spec_.variant) {
        case Variant::csvm:
        case Variant::lpsvm: return reg + spec_.C * hinge_lipschitz(*data_, spec_.mu, spec_.hinge_lipschitz);
        case Variant::lssvm: {
            if (spec_.ls_lipschitz == LsLipschitz::strict) {
                return reg + 2.0 * spec_.C * gram_spectral_norm(data_->features());
            }
            const auto sq = data_->row_sq_norms();
            return reg + 2.0 * spec_.C * *std::max_element(sq.begin(), sq.end());
        }
    }
    return reg;
}

ObjectiveEval Objective::evaluate(std::span<const double> w, MatvecCounter *counter) const {
    const std::size_t n = data_->samples();
    const std::size_t pen = penalized();
    if (w.size() != dimension()) {
        throw error{errc::dimension_mismatch,
                    "weight vector has length " + std::to_string(w.size()) + ", expected " + std::to_string(dimension())};
    }
    const auto y = data_->labels();
    const double b = spec_.bias ? w.back() : 0.0;

    const Vector m = margins(*data_, w);
    if (counter) {
        ++counter->forward;
    }

    ObjectiveEval out;
    out.gradient.assign(w.size(), 0.0);
    out.lipschitz = lipschitz_;

    double reg = 0.0;
    if (spec_.variant == Variant::lpsvm) {
        for (std::size_t j = 0; j < pen; ++j) {
            const double u = l1_dual(w[j], *spec_.nu);
            reg += w[j] * u - 0.5 * *spec_.nu * u * u;
            out.gradient[j] = u;
        }
    } else if (spec_.kernel.type == KernelType::rbf) {
        // y_j(Kβ)_j with β = Yα, read back from the forward product
        for (std::size_t j = 0; j < pen; ++j) {
            const double ykb = m[j] - y[j] * b;
            reg += 0.5 * w[j] * ykb;
            out.gradient[j] = ykb;
        }
    } else {
        for (std::size_t j = 0; j < pen; ++j) {
            reg += 0.5 * w[j] * w[j];
            out.gradient[j] = w[j];
        }
    }

    Vector coef(n);
    double loss = 0.0;
    if (spec_.variant == Variant::lssvm) {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = 1.0 - m[i];
            loss += r * r;
            coef[i] = -2.0 * spec_.C * y[i] * r;
        }
    } else {
        const auto inf = data_->row_inf_norms();
        for (std::size_t i = 0; i < n; ++i) {
            const double u = hinge_dual(m[i], inf[i], spec_.mu);
            loss += u * (1.0 - m[i]) - 0.5 * spec_.mu * inf[i] * u * u;
            coef[i] = -spec_.C * y[i] * u;
        }
    }

    Vector g_loss(w.size());
    multiply_transpose(data_->features(), coef, g_loss);
    if (counter) {
        ++counter->transpose;
    }
    for (std::size_t j = 0; j < w.size(); ++j) {
        out.gradient[j] += g_loss[j];
    }
    out.value = reg + spec_.C * loss;
    return out;
}

double Objective::value(std::span<const double> w, MatvecCounter *counter) const {
    const std::size_t pen = penalized();
    if (w.size() != dimension()) {
        throw error{errc::dimension_mismatch,
                    "weight vector has length " + std::to_string(w.size()) + ", expected " + std::to_string(dimension())};
    }
    const auto y = data_->labels();
    const double b = spec_.bias ? w.back() : 0.0;
    const Vector m = margins(*data_, w);
    if (counter) {
        ++counter->forward;
    }
    double reg = 0.0;
    if (spec_.variant == Variant::lpsvm) {
        reg = l1_value(w.first(pen), *spec_.nu);
    } else if (spec_.kernel.type == KernelType::rbf) {
        for (std::size_t j = 0; j < pen; ++j) {
            reg += 0.5 * w[j] * (m[j] - y[j] * b);
        }
    } else {
        reg = 0.5 * squared_norm(w.first(pen));
    }
    double loss = 0.0;
    if (spec_.variant == Variant::lssvm) {
        for (const double mi : m) {
            loss += (1.0 - mi) * (1.0 - mi);
        }
    } else {
        const auto inf = data_->row_inf_norms();
        for (std::size_t i = 0; i < m.size(); ++i) {
            loss += smoothed_hinge(m[i], inf[i], spec_.mu);
        }
    }
    return reg + spec_.C * loss;
}

Objective Objective::with_smoothing(double mu, std::optional<double> nu) const {
    ModelSpec s = spec_;
    s.mu = mu;
    s.nu = nu;
    return Objective{data_, std::move(s), kernel_};
}

TrainingProblem::TrainingProblem(Objective objective, std::shared_ptr<const Matrix> points) :
    objective_{std::move(objective)},
    points_{std::move(points)} {}

TrainingProblem make_problem(const Dataset &d, const ModelSpec &spec) {
    spec.validate();
    if (d.bias_columns() != 0) {
        throw error{errc::invalid_parameter, "pass data without a bias column; the spec's bias flag appends it"};
    }
    if (spec.kernel.type == KernelType::rbf) {
        return make_problem(build_gram(d, spec.kernel), spec);
    }
    auto data = std::make_shared<const Dataset>(spec.bias ? augment_bias(d) : d);
    return TrainingProblem{Objective{std::move(data), spec}, std::make_shared<const Matrix>(d.features())};
}

TrainingProblem make_problem(const GramDataset &g, const ModelSpec &spec) {
    ModelSpec s = spec;
    s.kernel = g.params();
    s.validate();
    auto data = std::make_shared<const Dataset>(s.bias ? augment_bias(g.effective()) : g.effective());
    auto kernel = std::make_shared<const Matrix>(g.kernel());
    return TrainingProblem{Objective{std::move(data), s, std::move(kernel)}, std::make_shared<const Matrix>(g.points())};
}

ObjectiveEval eval_csvm(const Dataset &d, std::span<const double> w, const ModelSpec &spec) {
    require_variant(spec, Variant::csvm);
    return Objective{borrow(d), spec}.evaluate(w);
}

ObjectiveEval eval_lpsvm(const Dataset &d, std::span<const double> w, const ModelSpec &spec) {
    require_variant(spec, Variant::lpsvm);
    return Objective{borrow(d), spec}.evaluate(w);
}

ObjectiveEval eval_lssvm(const Dataset &d, std::span<const double> w, const ModelSpec &spec) {
    require_variant(spec, Variant::lssvm);
    return Objective{borrow(d), spec}.evaluate(w);
}

ObjectiveEval kernelize(const ModelSpec &spec, const GramDataset &g, std::span<const double> alpha) {
    if (spec.kernel.type != KernelType::rbf) {
        throw error{errc::invalid_parameter, "kernelize needs an RBF spec"};
    }
    return make_problem(g, spec).objective().evaluate(alpha);
}

double nonsmooth_objective(const Objective &objective, std::span<const double> w) {
    const ModelSpec &spec = objective.spec();
    if (spec.variant == Variant::lssvm) {
        return objective.value(w);
    }
    const Dataset &d = objective.data();
    const std::size_t pen = objective.dimension() - (spec.bias ? 1 : 0);
    const Vector m = margins(d, w);
    const auto y = d.labels();
    const double b = spec.bias ? w.back() : 0.0;
    double reg = 0.0;
    if (spec.variant == Variant::lpsvm) {
        for (std::size_t j = 0; j < pen; ++j) {
            reg += std::abs(w[j]);
        }
    } else if (spec.kernel.type == KernelType::rbf) {
        for (std::size_t j = 0; j < pen; ++j) {
            reg += 0.5 * w[j] * (m[j] - y[j] * b);
        }
    } else {
        reg = 0.5 * squared_norm(w.first(pen));
    }
    double loss = 0.0;
    for (const double mi : m) {
        loss += hinge(mi);
    }
    return reg + spec.C * loss;
}

double gram_spectral_norm(const Matrix &a, std::size_t max_iter, double tol) {
    const std::size_t p = a.cols();
    Vector v(p);
    // fixed pseudo-random start, unlikely to be orthogonal to the top eigenvector
    std::uint64_t state = 0x9E3779B97F4A7C15ull;
    for (auto &x : v) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        x = 0.5 + static_cast<double>(state >> 11) / 9007199254740992.0;
    }
    double nv = norm(v);
    for (auto &x : v) {
        x /= nv;
    }
    Vector av(a.rows());
    Vector atav(p);
    double lambda = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        multiply(a, v, av);
        multiply_transpose(a, av, atav);
        const double next = norm(atav);
        if (next == 0.0) {
            return 0.0;
        }
        for (std::size_t j = 0; j < p; ++j) {
            v[j] = atav[j] / next;
        }
        const bool done = std::abs(next - lambda) <= tol * next;
        lambda = next;
        if (done) {
            break;
        }
    }
    return lambda;
}

}  // namespace nesvm
