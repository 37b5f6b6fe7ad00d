#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace crparallax {

/// Series variables, in storage order: offsets of z1, z2, conj(z1), conj(z2), v.
enum class Axis : std::uint8_t { z1 = 0, z2 = 1, z1bar = 2, z2bar = 3, v = 4 };

inline constexpr int kVariables = 5;
inline constexpr int kMaxOrder = 12;
inline constexpr std::array<Axis, kVariables> kAxes{Axis::z1, Axis::z2, Axis::z1bar, Axis::z2bar, Axis::v};

std::string_view to_string(Axis axis);

/// The axis whose role is swapped by complex conjugation (v is fixed).
constexpr Axis conjugate_axis(Axis a)
{
    switch (a) {
    case Axis::z1: return Axis::z1bar;
    case Axis::z2: return Axis::z2bar;
    case Axis::z1bar: return Axis::z1;
    case Axis::z2bar: return Axis::z2;
    case Axis::v: return Axis::v;
    }
    return a;
}

using MultiIndex = std::array<std::uint8_t, kVariables>;

constexpr int degree(const MultiIndex& m)
{
    int d = 0;
    for (auto e : m) {
        d += e;
    }
    return d;
}

/// Number of monomials of degree <= order in five variables, C(order+5, 5).
constexpr std::size_t monomial_count(int order)
{
    if (order < 0) {
        return 0;
    }
    std::size_t n = 1;
    for (int k = 1; k <= kVariables; ++k) {
        n = n * static_cast<std::size_t>(order + k) / static_cast<std::size_t>(k);
    }
    return n;
}

/// Graded-lexicographic enumeration of all monomials up to kMaxOrder.
///
/// Because the order is graded, the monomials of degree <= n form a prefix of
/// length monomial_count(n); a germ of order n stores exactly that prefix.
/// Products are driven by sum_row(i): entry j is the index of m_i + m_j and is
/// defined for every j of degree <= kMaxOrder - deg(m_i).
class MonomialLayout {
public:
    static const MonomialLayout& instance();

    std::size_t size() const { return exponents_.size(); }
    const MultiIndex& exponents(std::size_t idx) const { return exponents_[idx]; }
    int degree_of(std::size_t idx) const { return degrees_[idx]; }
    std::size_t index_of(const MultiIndex& m) const;

    std::span<const std::uint16_t> sum_row(std::size_t idx) const
    {
        return {sums_.data() + sum_offsets_[idx], monomial_count(kMaxOrder - degrees_[idx])};
    }

    /// Index of m + e_axis, or -1 past kMaxOrder.
    int raised(std::size_t idx, Axis axis) const { return raised_[idx * kVariables + static_cast<int>(axis)]; }

    /// Index of the monomial with z and conj(z) exponents swapped.
    std::size_t involuted(std::size_t idx) const { return involuted_[idx]; }

private:
    MonomialLayout();

    static std::size_t key(const MultiIndex& m);

    std::vector<MultiIndex> exponents_;
    std::vector<int> degrees_;
    std::vector<std::int32_t> lookup_;
    std::vector<std::size_t> sum_offsets_;
    std::vector<std::uint16_t> sums_;
    std::vector<int> raised_;
    std::vector<std::size_t> involuted_;
};

inline const MonomialLayout& layout() { return MonomialLayout::instance(); }

inline MultiIndex unit_index(Axis a)
{
    MultiIndex m{};
    m[static_cast<int>(a)] = 1;
    return m;
}

} // namespace crparallax
