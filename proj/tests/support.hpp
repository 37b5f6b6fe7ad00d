#pragma once

#include <random>

#include "crparallax/germ.hpp"

namespace testing_support {

using namespace crparallax;

template <CoefficientField S>
S random_scalar(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    if constexpr (is_exact_v<S>) {
        return GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
    } else {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        return {u(rng), u(rng)};
    }
}

template <CoefficientField S>
BasePoint<S> random_base(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-9, 9);
    return {random_scalar<S>(rng), random_scalar<S>(rng), rational<S>(num(rng), 10)};
}

/// Random germ whose higher coefficients are moderately sparse, to keep exact runs quick.
template <CoefficientField S>
Germ<S> random_germ(const BasePoint<S>& base, int order, std::mt19937_64& rng, double density = 0.3)
{
    std::bernoulli_distribution keep(density);
    Germ<S> g(base, order);
    auto& c = g.mutable_coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i == 0 || keep(rng)) {
            c[i] = random_scalar<S>(rng);
        }
    }
    return g;
}

template <CoefficientField S>
double relative_gap(const Germ<S>& a, const Germ<S>& b)
{
    return distance(a, b) / (1.0 + std::max(a.sup_norm(), b.sup_norm()));
}

} // namespace testing_support
