#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crparallax/errors.hpp"
#include "crparallax/multi_index.hpp"
#include "crparallax/scalar.hpp"

namespace crparallax {

/// Expansion point (z1, z2, v) with v real. The conj(z) slots are seeded with
/// the conjugate base values so that z and conj(z) can be treated as
/// independent series variables.
template <CoefficientField S>
struct BasePoint {
    S z1{};
    S z2{};
    S v{};

    BasePoint() = default;
    BasePoint(S z1_, S z2_, S v_) : z1(std::move(z1_)), z2(std::move(z2_)), v(std::move(v_))
    {
        if constexpr (is_exact_v<S>) {
            if (!v.is_real()) {
                throw CrError(ErrorKind::NotReal, "base point v must be real");
            }
        } else {
            for (const Complex& c : {z1, z2, v}) {
                if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                    throw std::invalid_argument("base point entries must be finite");
                }
            }
            if (v.imag() != 0.0) {
                throw CrError(ErrorKind::NotReal, "base point v must be real");
            }
        }
    }

    S seed(Axis axis) const
    {
        switch (axis) {
        case Axis::z1: return z1;
        case Axis::z2: return z2;
        case Axis::z1bar: return conjugate(z1);
        case Axis::z2bar: return conjugate(z2);
        case Axis::v: return v;
        }
        return S{};
    }

    friend bool operator==(const BasePoint& a, const BasePoint& b)
    {
        return a.z1 == b.z1 && a.z2 == b.z2 && a.v == b.v;
    }

    std::string str() const
    {
        return "z1=" + to_string(z1) + ",z2=" + to_string(z2) + ",v=" + to_string(v);
    }
};

template <CoefficientField S>
BasePoint<Complex> to_floating(const BasePoint<S>& p)
{
    return {to_complex(p.z1), to_complex(p.z2), to_complex(p.v)};
}

/// Truncated Taylor expansion in the offsets t = (z1, z2, conj z1, conj z2, v) - base.
///
/// Coefficients are stored densely in graded-lex order up to `order`; the
/// constant coefficient is the value at the base point. Germs are immutable
/// once built and cheap to share by value-copy semantics.
template <CoefficientField S>
class Germ {
public:
    Germ() = default;
    Germ(BasePoint<S> base, int order, std::vector<S> coeffs)
        : base_(std::move(base)), order_(order), coeffs_(std::move(coeffs))
    {
        if (order < 0 || order > kMaxOrder) {
            throw std::invalid_argument("germ order out of range: " + std::to_string(order));
        }
        if (coeffs_.size() != monomial_count(order)) {
            throw std::invalid_argument("coefficient count does not match the order");
        }
    }

    /// Zero germ of the given order.
    Germ(BasePoint<S> base, int order) : Germ(std::move(base), order, std::vector<S>(monomial_count(order))) {}

    const BasePoint<S>& base() const { return base_; }
    int order() const { return order_; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const S> coeffs() const { return coeffs_; }
    const S& operator[](std::size_t idx) const { return coeffs_[idx]; }
    const S& coeff(const MultiIndex& m) const { return coeffs_.at(layout().index_of(m)); }
    const S& value() const { return coeffs_.front(); }

    double sup_norm() const
    {
        double m = 0.0;
        for (const S& c : coeffs_) {
            m = std::max(m, magnitude(c));
        }
        return m;
    }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const S& c) { return crparallax::is_zero(c); });
    }

    /// True when every non-constant coefficient vanishes.
    bool is_constant() const
    {
        return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const S& c) { return crparallax::is_zero(c); });
    }

    bool is_one() const
    {
        if (!(coeffs_.front() == from_int<S>(1))) {
            return false;
        }
        return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const S& c) { return crparallax::is_zero(c); });
    }

    /// Mutable access for builders; germs handed out by the library are not modified afterwards.
    std::vector<S>& mutable_coeffs() { return coeffs_; }

private:
    BasePoint<S> base_{};
    int order_ = 0;
    std::vector<S> coeffs_{S{}};
};

namespace detail {

template <CoefficientField S>
void require_same_base(const Germ<S>& a, const Germ<S>& b)
{
    if (!(a.base() == b.base())) {
        throw CrError(ErrorKind::BaseMismatch, "germs expanded at " + a.base().str() + " and " + b.base().str());
    }
}

} // namespace detail

template <CoefficientField S>
Germ<S> make_germ(const BasePoint<S>& base, int order, const std::function<S(const MultiIndex&)>& generator)
{
    Germ<S> g(base, order);
    auto& c = g.mutable_coeffs();
    const auto& lay = layout();
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = generator(lay.exponents(i));
    }
    return g;
}

template <CoefficientField S>
Germ<S> constant_germ(const BasePoint<S>& base, int order, const S& value)
{
    Germ<S> g(base, order);
    g.mutable_coeffs()[0] = value;
    return g;
}

/// The coordinate function for `axis`: base seed plus the offset variable.
template <CoefficientField S>
Germ<S> variable_germ(const BasePoint<S>& base, int order, Axis axis)
{
    Germ<S> g = constant_germ(base, order, base.seed(axis));
    if (order >= 1) {
        g.mutable_coeffs()[layout().index_of(unit_index(axis))] = from_int<S>(1);
    }
    return g;
}

template <CoefficientField S>
Germ<S> truncate(const Germ<S>& a, int order)
{
    if (order >= a.order()) {
        return a;
    }
    std::vector<S> c(a.coeffs().begin(), a.coeffs().begin() + static_cast<std::ptrdiff_t>(monomial_count(order)));
    return Germ<S>(a.base(), order, std::move(c));
}

template <CoefficientField S>
Germ<S> operator-(const Germ<S>& a)
{
    Germ<S> r = a;
    for (S& c : r.mutable_coeffs()) {
        c = -c;
    }
    return r;
}

template <CoefficientField S>
Germ<S>& operator+=(Germ<S>& a, const Germ<S>& b)
{
    detail::require_same_base(a, b);
    if (b.order() < a.order()) {
        a = truncate(a, b.order());
    }
    auto& c = a.mutable_coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] += b[i];
    }
    return a;
}

template <CoefficientField S>
Germ<S>& operator-=(Germ<S>& a, const Germ<S>& b)
{
    detail::require_same_base(a, b);
    if (b.order() < a.order()) {
        a = truncate(a, b.order());
    }
    auto& c = a.mutable_coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] -= b[i];
    }
    return a;
}

template <CoefficientField S>
Germ<S> operator+(Germ<S> a, const Germ<S>& b)
{
    return a += b;
}

template <CoefficientField S>
Germ<S> operator-(Germ<S> a, const Germ<S>& b)
{
    return a -= b;
}

template <CoefficientField S>
Germ<S> operator+(Germ<S> a, const S& s)
{
    a.mutable_coeffs()[0] += s;
    return a;
}

template <CoefficientField S>
Germ<S> operator+(const S& s, Germ<S> a)
{
    return std::move(a) + s;
}

template <CoefficientField S>
Germ<S> operator-(Germ<S> a, const S& s)
{
    a.mutable_coeffs()[0] -= s;
    return a;
}

template <CoefficientField S>
Germ<S> operator-(const S& s, const Germ<S>& a)
{
    return -a + s;
}

template <CoefficientField S>
Germ<S> operator*(Germ<S> a, const S& s)
{
    if (crparallax::is_zero(s)) {
        return Germ<S>(a.base(), a.order());
    }
    for (S& c : a.mutable_coeffs()) {
        if (!crparallax::is_zero(c)) {
            c *= s;
        }
    }
    return a;
}

template <CoefficientField S>
Germ<S> operator*(const S& s, Germ<S> a)
{
    return std::move(a) * s;
}

template <CoefficientField S>
Germ<S> operator*(const Germ<S>& a, const Germ<S>& b)
{
    detail::require_same_base(a, b);
    const int n = std::min(a.order(), b.order());
    Germ<S> r(a.base(), n);
    auto& out = r.mutable_coeffs();
    const auto& lay = layout();
    const std::size_t count = monomial_count(n);
    for (std::size_t i = 0; i < count; ++i) {
        if (crparallax::is_zero(a[i])) {
            continue;
        }
        const auto row = lay.sum_row(i);
        const std::size_t width = monomial_count(n - lay.degree_of(i));
        for (std::size_t j = 0; j < width; ++j) {
            if (!crparallax::is_zero(b[j])) {
                add_product(out[row[j]], a[i], b[j]);
            }
        }
    }
    return r;
}

template <CoefficientField S>
Germ<S>& operator*=(Germ<S>& a, const Germ<S>& b)
{
    a = a * b;
    return a;
}

/// Default guard for floating inversion: 1e-12 * (1 + |b|_inf).
template <CoefficientField S>
double division_tolerance(const Germ<S>& b, double rel = 1e-12)
{
    return rel * (1.0 + b.sup_norm());
}

/// 1/b, solved degree by degree: once the coefficients of r up to degree d are
/// known, their products with the non-constant part of b are scattered into
/// the accumulator, so each higher coefficient needs a single division.
template <CoefficientField S>
Germ<S> reciprocal(const Germ<S>& b, double rel_tol = 1e-12)
{
    const S& b0 = b.value();
    bool degenerate = false;
    if constexpr (is_exact_v<S>) {
        degenerate = crparallax::is_zero(b0);
    } else {
        degenerate = magnitude(b0) <= division_tolerance(b, rel_tol);
    }
    if (degenerate) {
        throw CrError(ErrorKind::DivisionByZeroGerm,
                      "constant term " + to_string(b0) + " of the denominator vanishes at " + b.base().str());
    }
    const int n = b.order();
    const auto& lay = layout();
    const S inv0 = from_int<S>(1) / b0;
    Germ<S> r(b.base(), n);
    auto& out = r.mutable_coeffs();
    std::vector<S> acc(out.size());
    const std::size_t count = out.size();
    for (std::size_t m = 0; m < count; ++m) {
        S rhs = (m == 0 ? from_int<S>(1) : S{}) - acc[m];
        out[m] = rhs * inv0;
        if (crparallax::is_zero(out[m])) {
            continue;
        }
        const auto row = lay.sum_row(m);
        const std::size_t width = monomial_count(n - lay.degree_of(m));
        for (std::size_t q = 1; q < width; ++q) {
            if (!crparallax::is_zero(b[q])) {
                add_product(acc[row[q]], out[m], b[q]);
            }
        }
    }
    return r;
}

template <CoefficientField S>
Germ<S> operator/(const Germ<S>& a, const Germ<S>& b)
{
    detail::require_same_base(a, b);
    const int n = std::min(a.order(), b.order());
    return truncate(a, n) * reciprocal(truncate(b, n));
}

template <CoefficientField S>
Germ<S> operator/(Germ<S> a, const S& s)
{
    if (crparallax::is_zero(s)) {
        throw CrError(ErrorKind::DivisionByZeroGerm, "division by the zero scalar");
    }
    return std::move(a) * (from_int<S>(1) / s);
}

/// Formal partial derivative along `axis`; the order drops by one.
template <CoefficientField S>
Germ<S> partial(const Germ<S>& a, Axis axis)
{
    if (a.order() == 0) {
        throw CrError(ErrorKind::OrderExhausted, "cannot differentiate a germ of order 0 along " +
                                                     std::string(to_string(axis)));
    }
    const int n = a.order() - 1;
    const auto& lay = layout();
    const int ax = static_cast<int>(axis);
    Germ<S> r(a.base(), n);
    auto& out = r.mutable_coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto up = static_cast<std::size_t>(lay.raised(i, axis));
        const S& c = a[up];
        if (!crparallax::is_zero(c)) {
            out[i] = c * from_int<S>(lay.exponents(up)[ax]);
        }
    }
    return r;
}

/// Germ of the complex-conjugate function: swaps z with conj(z) exponents and
/// conjugates every coefficient.
template <CoefficientField S>
Germ<S> involute(const Germ<S>& a)
{
    const auto& lay = layout();
    Germ<S> r(a.base(), a.order());
    auto& out = r.mutable_coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[lay.involuted(i)] = conjugate(a[i]);
    }
    return r;
}

/// Coefficient-wise equality over the common order, without rounding.
template <CoefficientField S>
bool exactly_equal(const Germ<S>& a, const Germ<S>& b)
{
    const std::size_t n = monomial_count(std::min(a.order(), b.order()));
    for (std::size_t i = 0; i < n; ++i) {
        if (!(a[i] == b[i])) {
            return false;
        }
    }
    return true;
}

/// Largest coefficient magnitude of a - b over their common order.
template <CoefficientField S>
double distance(const Germ<S>& a, const Germ<S>& b)
{
    const int n = std::min(a.order(), b.order());
    double m = 0.0;
    for (std::size_t i = 0; i < monomial_count(n); ++i) {
        m = std::max(m, magnitude(S(a[i] - b[i])));
    }
    return m;
}

} // namespace crparallax
