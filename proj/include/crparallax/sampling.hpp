#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "crparallax/germ.hpp"

namespace crparallax {

/// Seeded draws in the polydisc |z1 - c1|, |z2 - c2| <= box, |v - cv| <= box.
struct SamplingRequest {
    int samples = 20;
    std::uint64_t seed = 7;
    double box = 0.3;
    BasePoint<GaussianRational> center;
};

/// Denominator of the rational grid used for exact-mode samples.
inline constexpr long kExactGrid = 1000;

/// Deterministic point stream: the n-th draw depends only on (seed, n), using
/// raw mt19937_64 output rather than distribution objects whose algorithms
/// vary between standard libraries.
class PointSampler {
public:
    explicit PointSampler(const SamplingRequest& req) : req_(req), rng_(req.seed) {}

    BasePoint<Complex> next_floating();
    BasePoint<GaussianRational> next_exact();

private:
    double unit();
    long grid(long half_width);

    SamplingRequest req_;
    std::mt19937_64 rng_;
};

template <CoefficientField S>
BasePoint<S> next_point(PointSampler& sampler)
{
    if constexpr (is_exact_v<S>) {
        return sampler.next_exact();
    } else {
        return sampler.next_floating();
    }
}

/// Parses "z1=a+bi,z2=c+di,v=e"; missing coordinates are zero. Components are
/// integers, fractions p/q or (floating mode only) decimals.
template <CoefficientField S>
BasePoint<S> parse_point(const std::string& text);

} // namespace crparallax
