#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crparallax/frame.hpp"
#include "crparallax/parallel.hpp"

namespace crparallax {

enum class Quantity { k, P, H, W, J, HRelation, WRelation, JRelation };

/// F-order needed for each derived quantity at the base point.
constexpr int required_order(Quantity q)
{
    switch (q) {
    case Quantity::k: return 3;
    case Quantity::P: return 3;
    case Quantity::H: return 5;
    case Quantity::W: return 5;
    case Quantity::J: return 6;
    case Quantity::HRelation: return 6;
    case Quantity::WRelation: return 6;
    case Quantity::JRelation: return 7;
    }
    return kMaxOrder;
}

std::string_view to_string(Quantity q);

/// Lazily evaluated derivatives of k and P along the frame, shared by the
/// invariant formulas and the identity suites. Not thread-safe; build one per point.
///
/// Notation: u = conj(L1)(k), a = conj(L1)(u)/u, m = L1(conj k).
template <CoefficientField S>
class FrameCalculus {
public:
    explicit FrameCalculus(FramePacket<S> frame) : fr_(std::move(frame))
    {
        if (!fr_.has_kernel) {
            throw CrError(ErrorKind::PivotDegenerate, "frame has no kernel field; the pivot l11 vanishes");
        }
    }

    const FramePacket<S>& frame() const { return fr_; }
    int order() const { return fr_.order; }

    void require(Quantity q) const
    {
        if (fr_.order < required_order(q)) {
            throw CrError(ErrorKind::OrderExhausted, std::string(to_string(q)) + " needs F order >= " +
                                                         std::to_string(required_order(q)) + ", have " +
                                                         std::to_string(fr_.order));
        }
    }

    const Germ<S>& kbar() { return memo("kbar", [&] { return involute(fr_.k); }); }
    const Germ<S>& Pbar() { return memo("Pbar", [&] { return involute(fr_.P); }); }
    const Germ<S>& u() { return fr_.lbar1_k; }
    const Germ<S>& Lbar1(const char* key, const Germ<S>& g)
    {
        return memo(std::string("Lbar1 ") + key, [&] { return apply_field(fr_.L1bar, g); });
    }
    const Germ<S>& u1() { return Lbar1("u", u()); }
    const Germ<S>& u2() { return Lbar1("u1", u1()); }
    const Germ<S>& a() { return memo("a", [&] { return u1() / u(); }); }
    const Germ<S>& m() { return memo("m", [&] { return apply_field(fr_.L1, kbar()); }); }
    /// conj(L1)(conj k) = involute of L1(k).
    const Germ<S>& lbar1_kbar() { return memo("Lbar1 kbar", [&] { return apply_field(fr_.L1bar, kbar()); }); }

    const Germ<S>& H()
    {
        require(Quantity::H);
        return memo("H", [&] {
            const Germ<S>& p = Pbar();
            const Germ<S>& aa = a();
            return aa * aa * rational<S>(2, 9) + aa * p * rational<S>(1, 18) - p * p * rational<S>(1, 9) +
                   Lbar1("Pbar", p) * rational<S>(1, 6) - (u2() / u()) * rational<S>(1, 6);
        });
    }

    const Germ<S>& Jbar()
    {
        require(Quantity::J);
        return memo("Jbar", [&] {
            const Germ<S>& h = H();
            return (a() * from_int<S>(2) + Pbar()) * h * rational<S>(2, 3) - Lbar1("H", h);
        });
    }

    const Germ<S>& J() { return memo("J", [&] { return involute(Jbar()); }); }

    const Germ<S>& W()
    {
        require(Quantity::W);
        return memo("W", [&] {
            const Germ<S>& uu = u();
            const Germ<S>& mm = m();
            const Germ<S> Ku = apply_field(fr_.K, uu);
            const Germ<S> Ku1 = apply_field(fr_.K, u1());
            const Germ<S> inv = reciprocal(uu);
            const Germ<S> inv2 = inv * inv;
            const S i = imaginary_unit<S>();
            return apply_field(fr_.L1, uu) * inv * rational<S>(2, 3) + apply_field(fr_.L1, mm) / mm * rational<S>(2, 3) +
                   u1() * Ku * inv2 * inv * rational<S>(1, 3) - Ku1 * inv2 * rational<S>(1, 3) +
                   apply_field(fr_.T, fr_.k) * inv * (i * rational<S>(1, 3));
        });
    }

    const Germ<S>& Wbar() { return memo("Wbar", [&] { return involute(W()); }); }

    /// The long expanded J in L1-derivatives of conj k and P; a cross-check for J().
    const Germ<S>& J_expanded()
    {
        require(Quantity::J);
        return memo("J_expanded", [&] {
            const Germ<S>& mm = m();
            const Germ<S>& P = fr_.P;
            const Germ<S> m1 = apply_field(fr_.L1, mm);
            const Germ<S> m2 = apply_field(fr_.L1, m1);
            const Germ<S> m3 = apply_field(fr_.L1, m2);
            const Germ<S> LP = apply_field(fr_.L1, P);
            const Germ<S> LLP = apply_field(fr_.L1, LP);
            const Germ<S> inv = reciprocal(truncate(mm, m3.order()));
            const Germ<S> r = m1 * inv;
            return r * r * P * rational<S>(5, 18) + P * LP * rational<S>(1, 3) - r * P * P * rational<S>(1, 9) +
                   r * r * r * rational<S>(20, 27) - r * m2 * inv * rational<S>(5, 6) + r * LP * rational<S>(1, 6) -
                   m2 * inv * P * rational<S>(1, 6) - P * P * P * rational<S>(2, 27) - LLP * rational<S>(1, 6) +
                   m3 * inv * rational<S>(1, 6);
        });
    }

    /// Local magnitude max(1, |a|, |conj P|)^3 at the base point.
    double scale()
    {
        const double s = std::max({1.0, magnitude(a().value()), magnitude(Pbar().value())});
        return s * s * s;
    }

private:
    template <class Make>
    const Germ<S>& memo(const std::string& key, Make&& make)
    {
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, make()).first;
        }
        return it->second;
    }

    FramePacket<S> fr_;
    std::map<std::string, Germ<S>> cache_;
};

template <CoefficientField S>
Germ<S> compute_H(FrameCalculus<S>& calc)
{
    return calc.H();
}

template <CoefficientField S>
Germ<S> compute_W(FrameCalculus<S>& calc)
{
    return calc.W();
}

template <CoefficientField S>
struct JValues {
    S J;
    S J_expanded;
    double relative_difference = 0.0;
};

template <CoefficientField S>
JValues<S> compute_J(FrameCalculus<S>& calc)
{
    const S j = calc.J().value();
    const S je = calc.J_expanded().value();
    const double gap = magnitude(S(j - je));
    return {j, je, gap / std::max({magnitude(j), magnitude(je), calc.scale()})};
}

// ---------------------------------------------------------------------------
// Normalized group parameters

enum class Branch { J, W };

std::string_view to_string(Branch b);

/// Base-point values feeding the normalizations (floating point).
struct NormalizationInputs {
    Complex u;          // conj(L1)(k)
    Complex a;          // conj(L1)(u)/u
    Complex Pbar;
    Complex H;
    Complex J, Jbar;
    Complex Lbar1_Jbar;
    std::optional<Complex> Kbar_Jbar;
    Complex W, Wbar;
    Complex Lbar1_W;
    std::optional<Complex> Kbar_W;
    Complex L1_kbar;    // L1(conj k)
    Complex Lbar1_kbar; // conj(L1)(conj k)
};

struct NormalizedGroupParams {
    Branch branch = Branch::J;
    Complex c{1.0, 0.0};
    Complex e{0.0, 0.0};
    Complex f, b, d;
    std::string root_branch;
    /// BranchJ: relative residual of the coefficient combination that fixed e; needs conj(K)(conj J).
    std::optional<double> consistency_residual;
    /// BranchW: conj(epsilon) solved with the measured conj(K)(W) instead of its simplified form.
    std::optional<Complex> epsilon_bar_careful;
    Complex epsilon_bar{0.0, 0.0};
};

Complex normalized_f(Complex c, Complex u);
Complex normalized_b(Complex c, Complex e, Complex a, Complex Pbar);
Complex normalized_d(Complex c, Complex e, Complex H);

NormalizedGroupParams normalize_params(const NormalizationInputs& in, Branch branch, double tol_flat = 0.0);

template <CoefficientField S>
NormalizationInputs normalization_inputs(FrameCalculus<S>& calc)
{
    NormalizationInputs in;
    const auto& fr = calc.frame();
    in.u = to_complex(calc.u().value());
    in.a = to_complex(calc.a().value());
    in.Pbar = to_complex(calc.Pbar().value());
    in.H = to_complex(calc.H().value());
    in.W = to_complex(calc.W().value());
    in.Wbar = std::conj(in.W);
    in.Lbar1_W = to_complex(apply_field(fr.L1bar, calc.W()).value());
    in.L1_kbar = to_complex(calc.m().value());
    in.Lbar1_kbar = to_complex(calc.lbar1_kbar().value());
    if (calc.order() >= required_order(Quantity::J)) {
        in.Jbar = to_complex(calc.Jbar().value());
        in.J = std::conj(in.Jbar);
        in.Lbar1_Jbar = to_complex(apply_field(fr.L1bar, calc.Jbar()).value());
        in.Kbar_W = to_complex(apply_field(fr.Kbar, calc.W()).value());
    }
    if (calc.order() >= required_order(Quantity::JRelation)) {
        in.Kbar_Jbar = to_complex(apply_field(fr.Kbar, calc.Jbar()).value());
    }
    return in;
}

// ---------------------------------------------------------------------------
// Classification

enum class Verdict { FlatLightConeTube, BranchJ, BranchW, Undetermined, Inadmissible };

std::string_view to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Undetermined;
    std::string reason;
};

/// Per-point inputs to the classifier.
struct PointSignature {
    bool admissible = false;
    std::optional<ErrorKind> failure;
    std::string reason;
    bool J_vanishes = false;
    bool W_vanishes = false;
};

/// Unanimity over the samples: one inadmissible point makes the verdict
/// Inadmissible; mixed vanishing patterns make it Undetermined.
Classification classify_signatures(const std::vector<PointSignature>& points);

/// J and W vanishing tests at a point: exact zero in exact mode, otherwise |x| < tol_flat * scale.
template <CoefficientField S>
PointSignature signature_of(FrameCalculus<S>& calc, const Tolerances& tol)
{
    PointSignature sig;
    sig.admissible = calc.frame().admissible.admissible();
    const double scale = calc.scale();
    const S& j = calc.J().value();
    const S& w = calc.W().value();
    if constexpr (is_exact_v<S>) {
        sig.J_vanishes = is_zero(j);
        sig.W_vanishes = is_zero(w);
    } else {
        sig.J_vanishes = magnitude(j) < tol.flat * scale;
        sig.W_vanishes = magnitude(w) < tol.flat * scale;
    }
    return sig;
}

/// Builds the frame at every sample (in parallel) and classifies.
template <CoefficientField S>
Classification classify(const SurfaceSpec& spec, const std::vector<BasePoint<S>>& samples, int order,
                        const Tolerances& tol = {}, int workers = 1)
{
    if (samples.empty()) {
        throw std::invalid_argument("classification needs at least one sample");
    }
    const auto sigs = parallel_map<PointSignature>(samples.size(), workers, [&](std::size_t idx) {
        PointSignature sig;
        try {
            FrameCalculus<S> calc(build_frame(spec, samples[idx], order, tol));
            sig = signature_of(calc, tol);
        } catch (const CrError& err) {
            if (err.kind() == ErrorKind::OrderExhausted) {
                throw;
            }
            sig.failure = err.kind();
            sig.reason = err.what();
        }
        return sig;
    });
    return classify_signatures(sigs);
}

} // namespace crparallax
