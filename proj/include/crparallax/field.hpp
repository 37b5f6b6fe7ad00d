#pragma once

#include <array>

#include "crparallax/germ.hpp"

namespace crparallax {

/// Complexified vector field sum_i X_i d/dt_i with germ coefficients in the
/// basis d/dz1, d/dz2, d/dconj(z1), d/dconj(z2), d/dv.
template <CoefficientField S>
struct FieldGerm {
    std::array<Germ<S>, kVariables> c;

    const Germ<S>& operator[](Axis a) const { return c[static_cast<int>(a)]; }
    Germ<S>& operator[](Axis a) { return c[static_cast<int>(a)]; }

    int order() const
    {
        int n = c[0].order();
        for (const auto& g : c) {
            n = std::min(n, g.order());
        }
        return n;
    }

    const BasePoint<S>& base() const { return c[0].base(); }

    double sup_norm() const
    {
        double m = 0.0;
        for (const auto& g : c) {
            m = std::max(m, g.sup_norm());
        }
        return m;
    }

    bool is_zero() const
    {
        return std::all_of(c.begin(), c.end(), [](const Germ<S>& g) { return g.is_zero(); });
    }
};

/// Zero field of the given order.
template <CoefficientField S>
FieldGerm<S> zero_field(const BasePoint<S>& base, int order)
{
    FieldGerm<S> x;
    for (auto& g : x.c) {
        g = Germ<S>(base, order);
    }
    return x;
}

/// The coordinate field d/dt_axis.
template <CoefficientField S>
FieldGerm<S> coordinate_field(const BasePoint<S>& base, int order, Axis axis)
{
    FieldGerm<S> x = zero_field(base, order);
    x[axis] = constant_germ(base, order, from_int<S>(1));
    return x;
}

/// X(f) = sum_i X_i * df/dt_i; the order is min(order X, order f - 1).
template <CoefficientField S>
Germ<S> apply_field(const FieldGerm<S>& x, const Germ<S>& f)
{
    if (f.order() == 0) {
        throw CrError(ErrorKind::OrderExhausted, "cannot apply a vector field to a germ of order 0");
    }
    const int n = std::min(x.order(), f.order() - 1);
    Germ<S> out(f.base(), n);
    for (Axis a : kAxes) {
        const Germ<S>& coeff = x[a];
        if (coeff.is_zero()) {
            continue;
        }
        detail::require_same_base(coeff, f);
        Germ<S> d = partial(f, a);
        if (coeff.is_one()) {
            out += d;
        } else {
            out += coeff * d;
        }
    }
    return truncate(out, n);
}

/// Lie bracket [X, Y]_i = X(Y_i) - Y(X_i).
template <CoefficientField S>
FieldGerm<S> bracket(const FieldGerm<S>& x, const FieldGerm<S>& y)
{
    const int n = std::min(x.order(), y.order()) - 1;
    if (n < 0) {
        throw CrError(ErrorKind::OrderExhausted, "bracket of fields of order 0");
    }
    FieldGerm<S> r;
    for (Axis a : kAxes) {
        const Germ<S>& ya = y[a];
        const Germ<S>& xa = x[a];
        Germ<S> term(x.base(), n);
        if (!ya.is_constant()) {
            term += apply_field(x, ya);
        }
        if (!xa.is_constant()) {
            term -= apply_field(y, xa);
        }
        r[a] = truncate(term, n);
    }
    return r;
}

/// Conjugate field: coefficient of d/dconj(t) is the involute of the coefficient of d/dt.
template <CoefficientField S>
FieldGerm<S> conjugate_field(const FieldGerm<S>& x)
{
    FieldGerm<S> r;
    for (Axis a : kAxes) {
        r[conjugate_axis(a)] = involute(x[a]);
    }
    return r;
}

template <CoefficientField S>
FieldGerm<S> operator+(const FieldGerm<S>& x, const FieldGerm<S>& y)
{
    FieldGerm<S> r;
    for (int i = 0; i < kVariables; ++i) {
        r.c[i] = x.c[i] + y.c[i];
    }
    return r;
}

template <CoefficientField S>
FieldGerm<S> operator-(const FieldGerm<S>& x, const FieldGerm<S>& y)
{
    FieldGerm<S> r;
    for (int i = 0; i < kVariables; ++i) {
        r.c[i] = x.c[i] - y.c[i];
    }
    return r;
}

template <CoefficientField S>
FieldGerm<S> operator-(const FieldGerm<S>& x)
{
    FieldGerm<S> r;
    for (int i = 0; i < kVariables; ++i) {
        r.c[i] = -x.c[i];
    }
    return r;
}

template <CoefficientField S>
FieldGerm<S> operator*(const Germ<S>& f, const FieldGerm<S>& x)
{
    FieldGerm<S> r;
    for (int i = 0; i < kVariables; ++i) {
        r.c[i] = x.c[i].is_zero() ? truncate(x.c[i], std::min(f.order(), x.c[i].order())) : f * x.c[i];
    }
    return r;
}

template <CoefficientField S>
FieldGerm<S> operator*(const S& s, const FieldGerm<S>& x)
{
    FieldGerm<S> r;
    for (int i = 0; i < kVariables; ++i) {
        r.c[i] = x.c[i] * s;
    }
    return r;
}

template <CoefficientField S>
FieldGerm<S> truncate(const FieldGerm<S>& x, int order)
{
    FieldGerm<S> r;
    for (int i = 0; i < kVariables; ++i) {
        r.c[i] = truncate(x.c[i], order);
    }
    return r;
}

/// The contact form dv - A1 dz1 - A2 dz2 - conj(A1) dconj(z1) - conj(A2) dconj(z2).
template <CoefficientField S>
struct ContactForm {
    Germ<S> a1;
    Germ<S> a2;
    Germ<S> a1bar;
    Germ<S> a2bar;

    Germ<S> operator()(const FieldGerm<S>& x) const
    {
        return x[Axis::v] - a1 * x[Axis::z1] - a2 * x[Axis::z2] - a1bar * x[Axis::z1bar] - a2bar * x[Axis::z2bar];
    }
};

} // namespace crparallax
