#ifndef NESVM_TESTS_SUPPORT_HPP_
#define NESVM_TESTS_SUPPORT_HPP_

#include "nesvm/data_model.hpp"
#include "nesvm/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace nesvm::testing {

// Hand-rolled generators for the property tests.

inline Dataset random_dataset(std::mt19937_64 &rng, std::size_t n, std::size_t p, double noise = 0.3) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector truth(p);
    for (auto &t : truth) {
        t = gauss(rng);
    }
    Matrix x(n, p);
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        bool nonzero = false;
        for (std::size_t j = 0; j < p; ++j) {
            x(i, j) = gauss(rng);
            nonzero = nonzero || x(i, j) != 0.0;
            s += x(i, j) * truth[j];
        }
        if (!nonzero) {
            x(i, 0) = 1.0;
        }
        y[i] = s + noise * gauss(rng) >= 0.0 ? 1.0 : -1.0;
    }
    // Both classes present.
    y[0] = 1.0;
    y[n > 1 ? 1 : 0] = n > 1 ? -1.0 : 1.0;
    return Dataset{std::move(x), std::move(y)};
}

inline Vector random_vector(std::mt19937_64 &rng, std::size_t p, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Vector v(p);
    for (auto &x : v) {
        x = gauss(rng);
    }
    return v;
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline double max_abs_diff(const Vector &a, const Vector &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace nesvm::testing

#endif  // NESVM_TESTS_SUPPORT_HPP_
