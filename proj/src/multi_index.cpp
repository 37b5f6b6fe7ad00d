#include "crparallax/multi_index.hpp"

#include <stdexcept>

namespace crparallax {

std::string_view to_string(Axis axis)
{
    switch (axis) {
    case Axis::z1: return "z1";
    case Axis::z2: return "z2";
    case Axis::z1bar: return "z1bar";
    case Axis::z2bar: return "z2bar";
    case Axis::v: return "v";
    }
    return "?";
}

namespace {

constexpr std::size_t kRadix = kMaxOrder + 1;

// Appends every monomial of exactly `remaining` total degree over variables
// [var, 5), in lexicographic order with higher leading exponents first.
void enumerate_degree(MultiIndex& cur, int var, int remaining, std::vector<MultiIndex>& out)
{
    if (var == kVariables - 1) {
        cur[var] = static_cast<std::uint8_t>(remaining);
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[var] = static_cast<std::uint8_t>(e);
        enumerate_degree(cur, var + 1, remaining - e, out);
    }
}

} // namespace

std::size_t MonomialLayout::key(const MultiIndex& m)
{
    std::size_t k = 0;
    for (auto e : m) {
        k = k * kRadix + e;
    }
    return k;
}

const MonomialLayout& MonomialLayout::instance()
{
    static const MonomialLayout layout;
    return layout;
}

MonomialLayout::MonomialLayout()
{
    for (int d = 0; d <= kMaxOrder; ++d) {
        MultiIndex cur{};
        enumerate_degree(cur, 0, d, exponents_);
    }
    std::size_t radix_pow = 1;
    for (int i = 0; i < kVariables; ++i) {
        radix_pow *= kRadix;
    }
    lookup_.assign(radix_pow, -1);
    degrees_.reserve(exponents_.size());
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        lookup_[key(exponents_[i])] = static_cast<std::int32_t>(i);
        degrees_.push_back(degree(exponents_[i]));
    }

    sum_offsets_.reserve(exponents_.size());
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        sum_offsets_.push_back(sums_.size());
        const std::size_t width = monomial_count(kMaxOrder - degrees_[i]);
        for (std::size_t j = 0; j < width; ++j) {
            MultiIndex m = exponents_[i];
            for (int a = 0; a < kVariables; ++a) {
                m[a] = static_cast<std::uint8_t>(m[a] + exponents_[j][a]);
            }
            sums_.push_back(static_cast<std::uint16_t>(lookup_[key(m)]));
        }
    }

    raised_.assign(exponents_.size() * kVariables, -1);
    involuted_.resize(exponents_.size());
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const MultiIndex& m = exponents_[i];
        if (degrees_[i] < kMaxOrder) {
            for (int a = 0; a < kVariables; ++a) {
                MultiIndex up = m;
                ++up[a];
                raised_[i * kVariables + a] = lookup_[key(up)];
            }
        }
        MultiIndex sw{m[2], m[3], m[0], m[1], m[4]};
        involuted_[i] = static_cast<std::size_t>(lookup_[key(sw)]);
    }
}

std::size_t MonomialLayout::index_of(const MultiIndex& m) const
{
    for (auto e : m) {
        if (e > kMaxOrder) {
            throw std::out_of_range("MultiIndex exceeds the maximum supported order");
        }
    }
    const auto idx = lookup_[key(m)];
    if (idx < 0) {
        throw std::out_of_range("MultiIndex exceeds the maximum supported order");
    }
    return static_cast<std::size_t>(idx);
}

} // namespace crparallax
