#pragma once

#include <map>
#include <optional>
#include <string>

#include "crparallax/field.hpp"
#include "crparallax/surface.hpp"

namespace crparallax {

/// Numerical thresholds. All are relative to a local magnitude; exact mode
/// replaces the frame and flatness tests by exact zero tests.
struct Tolerances {
    double div = 1e-12;
    double pivot = 1e-9;
    double rank = 1e-8;
    double second = 1e-9;
    double flat = 1e-6;
    double identity = 1e-7;
    double realness = 1e-10;
};

struct AdmissibilityFlags {
    int levi_rank = 0;
    bool two_nondegenerate = false;
    bool pivot_ok = false;
    bool realness_ok = false;
    std::map<std::string, double> residuals;
    /// First failed hypothesis, if any, with a human-readable reason.
    std::optional<ErrorKind> failure;
    std::string reason;

    bool admissible() const { return !failure.has_value(); }
};

struct FrameOptions {
    bool require_admissible = true;
    bool allow_nonreal = false;
};

/// Lowest F-order at which the frame (k, l, P and the first derivative of k) exists.
inline constexpr int kMinFrameOrder = 3;

/// The adapted frame at a point. Germ orders, for F of order n: A and L at
/// n-1; the Levi entries, k, l, T and K at n-2; P at n-3.
template <CoefficientField S>
struct FramePacket {
    int order = 0;
    BasePoint<S> base;
    Germ<S> F;
    Germ<S> A1, A2;
    ContactForm<S> sigma;
    FieldGerm<S> L1, L2, L1bar, L2bar, K, Kbar, T;
    /// levi[i][j] = sigma(i [L_{i+1}, conj L_{j+1}]) at the base point.
    std::array<std::array<S, 2>, 2> levi{};
    Germ<S> l11, l21, l12, l22;
    /// Present only when the pivot is usable.
    bool has_kernel = false;
    Germ<S> k, l, P;
    Germ<S> lbar1_k;
    AdmissibilityFlags admissible;
};

namespace detail {

template <CoefficientField S>
FieldGerm<S> holomorphic_field(const BasePoint<S>& base, int order, Axis axis, const Germ<S>& a)
{
    FieldGerm<S> x = zero_field(base, order);
    x[axis] = constant_germ(base, order, from_int<S>(1));
    x[Axis::v] = a;
    return x;
}

template <CoefficientField S>
double levi_norm(const std::array<std::array<S, 2>, 2>& m)
{
    double s = 0.0;
    for (const auto& row : m) {
        for (const auto& e : row) {
            s += std::norm(to_complex(e));
        }
    }
    return std::sqrt(s);
}

inline double rel(double num, double scale) { return num / std::max(scale, 1e-300); }

inline void fail_once(AdmissibilityFlags& flags, ErrorKind kind, std::string reason)
{
    if (!flags.failure) {
        flags.failure = kind;
        flags.reason = std::move(reason);
    }
}

} // namespace detail

/// Replaces k (and therefore K, conj K, conj L1(k)) in an existing frame.
/// Used for negative controls: a corrupted k must break the bracket relations.
template <CoefficientField S>
FramePacket<S> rebuild_kernel(FramePacket<S> frame, const Germ<S>& k)
{
    frame.k = k;
    frame.K = k * frame.L1 + frame.L2;
    frame.Kbar = conjugate_field(frame.K);
    frame.lbar1_k = apply_field(frame.L1bar, k);
    frame.has_kernel = true;
    return frame;
}

/// Builds A^j, L_j, the Levi entries, k, K, T, l and P at `base` from F of order `order`.
///
/// Every quantity is obtained from brackets of vector-field germs. With
/// `require_admissible` a failed hypothesis raises the matching CrError;
/// otherwise the packet is returned with the failure recorded in its flags and
/// with the kernel data present whenever the pivot allows it.
template <CoefficientField S>
FramePacket<S> build_frame(const SurfaceSpec& spec, const BasePoint<S>& base, int order, const Tolerances& tol = {},
                           const FrameOptions& options = {})
{
    if (order < kMinFrameOrder || order > kMaxOrder) {
        throw CrError(ErrorKind::OrderExhausted, "the frame needs an F order in [" + std::to_string(kMinFrameOrder) +
                                                     ", " + std::to_string(kMaxOrder) + "], got " +
                                                     std::to_string(order));
    }
    constexpr bool exact = is_exact_v<S>;
    FramePacket<S> fr;
    fr.order = order;
    fr.base = base;
    fr.F = eval_germ(spec, base, order);
    auto& flags = fr.admissible;

    const double real_gap = detail::rel(distance(involute(fr.F), fr.F), 1.0 + fr.F.sup_norm());
    flags.residuals["realness"] = real_gap;
    flags.realness_ok = exact ? exactly_equal(involute(fr.F), fr.F) : real_gap <= tol.realness;
    if (!flags.realness_ok && !options.allow_nonreal) {
        throw CrError(ErrorKind::NotReal, "graphing function is not real at " + base.str() +
                                              " (relative residual " + std::to_string(real_gap) + ")");
    }

    const S i = imaginary_unit<S>();
    const Germ<S> denom = from_int<S>(1) + partial(fr.F, Axis::v) * i;
    const Germ<S> inv = reciprocal(denom, tol.div);
    fr.A1 = partial(fr.F, Axis::z1) * inv * (-i);
    fr.A2 = partial(fr.F, Axis::z2) * inv * (-i);
    fr.sigma = {fr.A1, fr.A2, involute(fr.A1), involute(fr.A2)};

    fr.L1 = detail::holomorphic_field(base, order - 1, Axis::z1, fr.A1);
    fr.L2 = detail::holomorphic_field(base, order - 1, Axis::z2, fr.A2);
    fr.L1bar = conjugate_field(fr.L1);
    fr.L2bar = conjugate_field(fr.L2);

    auto levi_germ = [&](const FieldGerm<S>& x, const FieldGerm<S>& ybar) { return fr.sigma(i * bracket(x, ybar)); };
    fr.l11 = levi_germ(fr.L1, fr.L1bar);
    fr.l21 = levi_germ(fr.L2, fr.L1bar);
    fr.l12 = levi_germ(fr.L1, fr.L2bar);
    fr.l22 = levi_germ(fr.L2, fr.L2bar);
    fr.levi = {{{fr.l11.value(), fr.l12.value()}, {fr.l21.value(), fr.l22.value()}}};
    fr.T = i * bracket(fr.L1, fr.L1bar);
    fr.l = fr.l11;

    const S det = fr.levi[0][0] * fr.levi[1][1] - fr.levi[0][1] * fr.levi[1][0];
    const double norm = detail::levi_norm(fr.levi);
    const double det_rel = detail::rel(magnitude(det), norm * norm + tol.div);
    flags.residuals["levi_norm"] = norm;
    flags.residuals["rank_det"] = det_rel;
    if constexpr (exact) {
        flags.levi_rank = norm == 0.0 ? 0 : (is_zero(det) ? 1 : 2);
    } else {
        flags.levi_rank = norm <= tol.rank ? 0 : (det_rel < tol.rank ? 1 : 2);
    }
    if (flags.levi_rank != 1) {
        detail::fail_once(flags, ErrorKind::NotRankOne,
                             "Levi form has rank " + std::to_string(flags.levi_rank) + " at " + base.str());
    }

    const double l11_mag = magnitude(fr.levi[0][0]);
    flags.residuals["pivot"] = l11_mag;
    flags.pivot_ok = exact ? !is_zero(fr.levi[0][0]) : l11_mag > tol.pivot * std::max(1.0, norm);
    if (!flags.pivot_ok) {
        detail::fail_once(flags, ErrorKind::PivotDegenerate,
                             "Levi entry l11 vanishes at " + base.str() +
                                 "; relabel the coordinates with the z1<->z2 swap option");
    }

    if (flags.pivot_ok) {
        fr = rebuild_kernel(std::move(fr), -(fr.l21 / fr.l11));
        fr.P = fr.sigma(bracket(fr.L1, fr.T)) / fr.l;

        const S kv = fr.k.value();
        // (k, 1) spans the kernel: k l1j + l2j = 0 for j = 1, 2.
        const S e1 = kv * fr.levi[0][0] + fr.levi[1][0];
        const S e2 = kv * fr.levi[0][1] + fr.levi[1][1];
        flags.residuals["elim_1"] = detail::rel(magnitude(e1), std::max(magnitude(fr.levi[1][0]), norm));
        flags.residuals["elim_2"] = detail::rel(magnitude(e2), std::max(magnitude(fr.levi[1][1]), norm));

        const double lk = magnitude(fr.lbar1_k.value());
        flags.residuals["two_nondegeneracy"] = lk;
        flags.two_nondegenerate =
            exact ? !is_zero(fr.lbar1_k.value()) : lk > tol.second * std::max(1.0, magnitude(kv));
        if (!flags.two_nondegenerate) {
            detail::fail_once(flags, ErrorKind::NotTwoNondegenerate,
                                 "conj(L1)(k) vanishes at " + base.str() + " (|conj(L1) k| = " + std::to_string(lk) +
                                     ")");
        }
    }

    if (options.require_admissible && flags.failure) {
        throw CrError(*flags.failure, flags.reason);
    }
    return fr;
}

/// The explicit rational expression for k in partials of F, transcribed term
/// by term. Only a cross-check for the bracket-derived k.
template <CoefficientField S>
Germ<S> k_closed_form(const Germ<S>& F)
{
    const S i = imaginary_unit<S>();
    auto d = [&](Axis a) { return partial(F, a); };
    auto dd = [&](Axis a, Axis b) { return partial(partial(F, a), b); };
    const Axis z1 = Axis::z1, z2 = Axis::z2, z1b = Axis::z1bar, v = Axis::v;
    const Germ<S> Fv = d(v), Fz1 = d(z1), Fz2 = d(z2), Fz1b = d(z1b);
    const Germ<S> Fvv = dd(v, v);

    const Germ<S> num = dd(z2, z1b) + dd(z2, z1b) * Fv * Fv - i * Fz1b * dd(z2, v) - Fz1b * Fv * dd(v, z2) +
                        i * Fz2 * Fz1b * Fvv - Fz2 * Fv * dd(v, z1b);
    const Germ<S> den = dd(z1, z1b) + dd(z1, z1b) * Fv * Fv - i * Fz1b * dd(z1, v) - Fz1b * Fv * dd(z1, v) +
                        i * Fz1 * dd(z1b, v) + Fz1 * Fz1b * Fvv - Fz1 * Fv * dd(v, z1b);
    return -(num / den);
}

} // namespace crparallax
