#include "nesvm/smoothing.hpp"

#include "nesvm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nesvm {

namespace {

void require_positive(double mu, const char *name) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw error{errc::invalid_parameter, std::string{name} + " must be finite and positive, got " + std::to_string(mu)};
    }
}

void require_length(std::size_t got, std::size_t want, const char *what) {
    if (got != want) {
        throw error{errc::dimension_mismatch,
                    std::string{what} + " has length " + std::to_string(got) + ", expected " + std::to_string(want)};
    }
}

}  // namespace

double hinge(double margin) noexcept { return std::max(0.0, 1.0 - margin); }

double hinge_dual(double margin, double inf_norm, double mu) noexcept {
    return std::clamp((1.0 - margin) / (mu * inf_norm), 0.0, 1.0);
}

double smoothed_hinge(double margin, double inf_norm, double mu) noexcept {
    const double u = hinge_dual(margin, inf_norm, mu);
    return u * (1.0 - margin) - 0.5 * mu * inf_norm * u * u;
}

Vector margins(const Dataset &d, std::span<const double> w) {
    require_length(w.size(), d.dimension(), "weight vector");
    Vector m(d.samples());
    multiply(d.features(), w, m);
    const auto y = d.labels();
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] *= y[i];
    }
    return m;
}

Vector hinge_dual_from_margins(std::span<const double> margins, std::span<const double> inf_norms, double mu) {
    require_positive(mu, "mu");
    require_length(inf_norms.size(), margins.size(), "norm vector");
    Vector u(margins.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = hinge_dual(margins[i], inf_norms[i], mu);
    }
    return u;
}

Vector hinge_dual(const Dataset &d, std::span<const double> w, double mu) {
    return hinge_dual_from_margins(margins(d, w), d.row_inf_norms(), mu);
}

double hinge_value_from_duals(std::span<const double> margins, std::span<const double> inf_norms,
                              std::span<const double> u, double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        s += u[i] * (1.0 - margins[i]) - 0.5 * mu * inf_norms[i] * u[i] * u[i];
    }
    return s;
}

double hinge_value(const Dataset &d, std::span<const double> w, double mu) {
    const Vector m = margins(d, w);
    const Vector u = hinge_dual_from_margins(m, d.row_inf_norms(), mu);
    return hinge_value_from_duals(m, d.row_inf_norms(), u, mu);
}

Vector hinge_gradient(const Dataset &d, std::span<const double> u) {
    require_length(u.size(), d.samples(), "dual vector");
    Vector yu(u.size());
    const auto y = d.labels();
    for (std::size_t i = 0; i < u.size(); ++i) {
        yu[i] = -y[i] * u[i];
    }
    Vector g(d.dimension());
    multiply_transpose(d.features(), yu, g);
    return g;
}

double hinge_lipschitz(const Dataset &d, double mu, HingeLipschitz mode) {
    require_positive(mu, "mu");
    const auto sq = d.row_sq_norms();
    const auto inf = d.row_inf_norms();
    double max_ratio = 0.0;
    double sum_ratio = 0.0;
    for (std::size_t i = 0; i < d.samples(); ++i) {
        // ‖X_iᵀX_i‖₂ of the rank-one outer product is ‖X_i‖₂².
        const double r = sq[i] / inf[i];
        max_ratio = std::max(max_ratio, r);
        sum_ratio += r;
    }
    if (mode == HingeLipschitz::tight_sum) {
        return sum_ratio / mu;
    }
    return static_cast<double>(d.samples()) / mu * max_ratio;
}

double l1_dual(double w, double mu) noexcept { return std::clamp(w / mu, -1.0, 1.0); }

double smoothed_abs(double w, double mu) noexcept {
    const double u = l1_dual(w, mu);
    return w * u - 0.5 * mu * u * u;
}

Vector l1_dual(std::span<const double> w, double mu) {
    require_positive(mu, "mu");
    Vector u(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        u[i] = l1_dual(w[i], mu);
    }
    return u;
}

double l1_value(std::span<const double> w, double mu) {
    require_positive(mu, "mu");
    double s = 0.0;
    for (const double wi : w) {
        s += smoothed_abs(wi, mu);
    }
    return s;
}

Vector l1_gradient(std::span<const double> w, double mu) { return l1_dual(w, mu); }

double l1_lipschitz(double mu) {
    require_positive(mu, "mu");
    return 1.0 / mu;
}

}  // namespace nesvm
