#include "nesvm/oracle.hpp"

#include "nesvm/error.hpp"
#include "nesvm/smoothing.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace nesvm::oracle {

namespace {

double nonsmooth_from_margins(const ModelSpec &spec, std::span<const double> w, std::span<const double> m,
                              std::span<const double> y, std::size_t pen) {
    const double b = spec.bias ? w.back() : 0.0;
    double reg = 0.0;
    for (std::size_t j = 0; j < pen; ++j) {
        if (spec.variant == Variant::lpsvm) {
            reg += std::abs(w[j]);
        } else if (spec.kernel.type == KernelType::rbf) {
            reg += 0.5 * w[j] * (m[j] - y[j] * b);
        } else {
            reg += 0.5 * w[j] * w[j];
        }
    }
    double loss = 0.0;
    for (const double mi : m) {
        loss += spec.variant == Variant::lssvm ? (1.0 - mi) * (1.0 - mi) : hinge(mi);
    }
    return reg + spec.C * loss;
}

}  // namespace

Vector fd_gradient(const ScalarFunction &f, std::span<const double> w, FDSpec spec) {
    if (!(spec.step > 0.0)) {
        throw error{errc::invalid_parameter, "finite-difference step must be positive"};
    }
    Vector x(w.begin(), w.end());
    Vector g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double h = spec.step * std::max(1.0, std::abs(w[i]));
        const double plus = w[i] + h;
        const double minus = w[i] - h;
        x[i] = plus;
        const double fp = f(x);
        x[i] = minus;
        const double fm = f(x);
        x[i] = w[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw error{errc::non_finite_evaluation, "f is not finite near coordinate " + std::to_string(i)};
        }
        g[i] = (fp - fm) / (plus - minus);
    }
    return g;
}

double saddle_max(double margin_term, double inf_norm, double mu, std::size_t grid_n) {
    if (grid_n < 1000) {
        throw error{errc::invalid_parameter, "saddle_max needs at least 1000 grid intervals"};
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= grid_n; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(grid_n);
        best = std::max(best, u * margin_term - 0.5 * mu * inf_norm * u * u);
    }
    return best;
}

double saddle_max_abs(double w, double mu, std::size_t grid_n) {
    if (grid_n < 1000) {
        throw error{errc::invalid_parameter, "saddle_max_abs needs at least 1000 grid intervals"};
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= grid_n; ++k) {
        const double u = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(grid_n);
        best = std::max(best, w * u - 0.5 * mu * u * u);
    }
    return best;
}

Vector lssvm_direct(const Dataset &d, double C, bool bias) {
    if (!(C > 0.0)) {
        throw error{errc::invalid_parameter, "C must be positive"};
    }
    if (d.bias_columns() != (bias ? 1u : 0u)) {
        throw error{errc::dimension_mismatch, "bias flag does not match the data's bias columns"};
    }
    const std::size_t n = d.samples();
    const std::size_t p = d.dimension();
    if (p > 2000) {
        throw error{errc::invalid_parameter, "dense normal equations limited to 2000 features"};
    }
    Eigen::MatrixXd a(n, p);
    const auto y = d.labels();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = y[i] * d.features()(i, j);
        }
    }
    Eigen::MatrixXd m = 2.0 * C * (a.transpose() * a);
    for (std::size_t j = 0; j < p - (bias ? 1 : 0); ++j) {
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += 1.0;
    }
    const Eigen::VectorXd rhs = 2.0 * C * (a.transpose() * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
    const Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw error{errc::singular_system, "normal equations are not positive definite"};
    }
    const Eigen::VectorXd w = llt.solve(rhs);
    return Vector(w.data(), w.data() + w.size());
}

bool near_kink(const Objective &objective, std::span<const double> w, double h) {
    const ModelSpec &spec = objective.spec();
    if (spec.variant == Variant::lssvm) {
        return false;
    }
    const Dataset &d = objective.data();
    double w_scale = 1.0;
    for (const double v : w) {
        w_scale = std::max(w_scale, std::abs(v));
    }
    const Vector m = margins(d, w);
    const auto inf = d.row_inf_norms();
    for (std::size_t i = 0; i < m.size(); ++i) {
        double l1 = 0.0;
        for (const double v : d.features().row(i)) {
            l1 += std::abs(v);
        }
        const double zone = 10.0 * h * w_scale * l1;
        if (std::abs(m[i] - 1.0) < zone || std::abs(m[i] - (1.0 - spec.mu * inf[i])) < zone) {
            return true;
        }
    }
    if (spec.variant == Variant::lpsvm) {
        const std::size_t pen = w.size() - (spec.bias ? 1 : 0);
        for (std::size_t j = 0; j < pen; ++j) {
            if (std::abs(std::abs(w[j]) - *spec.nu) < 10.0 * h * std::max(1.0, std::abs(w[j]))) {
                return true;
            }
        }
    }
    return false;
}

GradientCheck verify_gradients(const Objective &objective, std::size_t samples, std::uint64_t seed, FDSpec spec) {
    const Dataset &d = objective.data();
    double mean_sq = 0.0;
    for (const double s : d.row_sq_norms()) {
        mean_sq += s;
    }
    const double rms = std::sqrt(mean_sq / static_cast<double>(d.samples()));
    constexpr double scales[] = {0.5, 2.0, 8.0};

    std::mt19937_64 rng{seed};
    std::normal_distribution<double> normal{0.0, 1.0};
    const auto f = [&objective](std::span<const double> x) { return objective.value(x); };

    GradientCheck out;
    Vector w(objective.dimension());
    for (std::size_t attempt = 0; out.checked < samples && attempt < 50 * samples; ++attempt) {
        const double scale = scales[attempt % 3] / rms;
        for (auto &v : w) {
            v = scale * normal(rng);
        }
        if (near_kink(objective, w, spec.step)) {
            ++out.skipped;
            continue;
        }
        const Vector analytic = objective.evaluate(w).gradient;
        const Vector numeric = fd_gradient(f, w, spec);
        double diff = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            diff += (analytic[j] - numeric[j]) * (analytic[j] - numeric[j]);
        }
        const double denom = std::max({norm(numeric), norm(analytic), 1e-8});
        out.max_relative_error = std::max(out.max_relative_error, std::sqrt(diff) / denom);
        ++out.checked;
    }
    return out;
}

SubgradientResult subgradient_reference(const Objective &objective, std::size_t iterations, std::span<const double> w0) {
    const ModelSpec &spec = objective.spec();
    const Dataset &d = objective.data();
    const std::size_t p = objective.dimension();
    const std::size_t pen = p - (spec.bias ? 1 : 0);
    if (!w0.empty() && w0.size() != p) {
        throw error{errc::dimension_mismatch, "initial solution has the wrong length"};
    }
    Vector w = w0.empty() ? Vector(p, 0.0) : Vector(w0.begin(), w0.end());
    const auto y = d.labels();
    const bool kernel = spec.kernel.type == KernelType::rbf;

    const Vector zeros(p, 0.0);
    const double f_zero = nonsmooth_objective(objective, zeros);
    const double radius = std::sqrt(2.0 * f_zero);
    double g_bound = std::sqrt(static_cast<double>(pen));
    for (const double s : d.row_sq_norms()) {
        g_bound += spec.C * std::sqrt(s);
    }

    SubgradientResult out;
    out.w = w;
    out.best_objective = std::numeric_limits<double>::infinity();
    out.best_history.reserve(iterations);

    Vector coef(d.samples());
    Vector g(p);
    for (std::size_t k = 0; k <= iterations; ++k) {
        const Vector m = margins(d, w);
        const double f = nonsmooth_from_margins(spec, w, m, y, pen);
        if (f < out.best_objective) {
            out.best_objective = f;
            out.w = w;
        }
        if (k > 0) {
            out.best_history.push_back(out.best_objective);
        }
        if (k == iterations) {
            break;
        }
        const double b = spec.bias ? w.back() : 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (spec.variant == Variant::lssvm) {
                coef[i] = -2.0 * spec.C * y[i] * (1.0 - m[i]);
            } else {
                coef[i] = m[i] < 1.0 ? -spec.C * y[i] : 0.0;
            }
        }
        multiply_transpose(d.features(), coef, g);
        for (std::size_t j = 0; j < pen; ++j) {
            if (spec.variant == Variant::lpsvm) {
                g[j] += static_cast<double>((w[j] > 0.0) - (w[j] < 0.0));
            } else if (kernel) {
                g[j] += m[j] - y[j] * b;
            } else {
                g[j] += w[j];
            }
        }
        const double step = spec.variant == Variant::lpsvm
                                ? f_zero / (g_bound * std::sqrt(static_cast<double>(k + 1)))
                                : 1.0 / static_cast<double>(k + 1);
        for (std::size_t j = 0; j < p; ++j) {
            w[j] -= step * g[j];
        }
        if (spec.variant != Variant::lpsvm && !kernel) {
            const double r = norm(std::span<const double>{w}.first(pen));
            if (r > radius) {
                for (std::size_t j = 0; j < pen; ++j) {
                    w[j] *= radius / r;
                }
            }
        }
    }
    return out;
}

}  // namespace nesvm::oracle
