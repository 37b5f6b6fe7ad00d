#include "crparallax/invariants.hpp"

#include <cmath>

namespace crparallax {

std::string_view to_string(Quantity q)
{
    switch (q) {
    case Quantity::k: return "k";
    case Quantity::P: return "P";
    case Quantity::H: return "H";
    case Quantity::W: return "W";
    case Quantity::J: return "J";
    case Quantity::HRelation: return "H relation";
    case Quantity::WRelation: return "W relation";
    case Quantity::JRelation: return "J relation";
    }
    return "?";
}

std::string_view to_string(Branch b)
{
    return b == Branch::J ? "J" : "W";
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::FlatLightConeTube: return "FLAT_LIGHT_CONE_TUBE";
    case Verdict::BranchJ: return "BRANCH_J";
    case Verdict::BranchW: return "BRANCH_W";
    case Verdict::Undetermined: return "UNDETERMINED";
    case Verdict::Inadmissible: return "INADMISSIBLE";
    }
    return "?";
}

namespace {

constexpr Complex kI{0.0, 1.0};

double max_abs(std::initializer_list<Complex> zs)
{
    double m = 0.0;
    for (const Complex& z : zs) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

} // namespace

Complex normalized_f(Complex c, Complex u)
{
    return c / std::conj(c) * u;
}

Complex normalized_b(Complex c, Complex e, Complex a, Complex Pbar)
{
    return -kI * std::conj(c) * e + kI * (c / 3.0) * (a - Pbar);
}

Complex normalized_d(Complex c, Complex e, Complex H)
{
    return -(kI / 2.0) * e * e * std::conj(c) / c + kI * (c / std::conj(c)) * H;
}

NormalizedGroupParams normalize_params(const NormalizationInputs& in, Branch branch, double tol_flat)
{
    NormalizedGroupParams out;
    out.branch = branch;
    if (branch == Branch::J) {
        if (std::abs(in.J) <= tol_flat || in.J == Complex{}) {
            throw CrError(ErrorKind::BranchUnavailable, "J vanishes at the base point");
        }
        out.c = std::polar(std::cbrt(std::abs(in.J)), std::arg(in.J) / 3.0);
        out.root_branch = "principal cube root: arg c = arg J / 3 with arg J in (-pi, pi]";
        const Complex c = out.c;
        const Complex cb = std::conj(c);
        out.e = (1.0 / 3.0) * (c / cb) * (-in.Lbar1_Jbar / in.Jbar + 2.0 * in.a + in.Pbar);
        if (in.Kbar_Jbar) {
            const Complex t1 = 2.0 * out.e / c;
            const Complex t2 = -2.0 * std::conj(out.e) * (c / (cb * cb)) / in.L1_kbar *
                               (in.Lbar1_kbar + (1.0 / 3.0) * *in.Kbar_Jbar / in.Jbar);
            const Complex t3 = (2.0 / 3.0) / cb * (in.Lbar1_Jbar / in.Jbar - 2.0 * in.a - in.Pbar);
            const double scale = max_abs({t1, t2, t3});
            out.consistency_residual = scale == 0.0 ? 0.0 : std::abs(t1 + t2 + t3) / scale;
        }
    } else {
        if (std::abs(in.W) <= tol_flat || in.W == Complex{}) {
            throw CrError(ErrorKind::BranchUnavailable, "W vanishes at the base point");
        }
        out.c = in.W;
        out.root_branch = "none (c = W)";
        const Complex w = in.W;
        const Complex wb = in.Wbar;
        const Complex rest = in.Lbar1_W / (w * wb) + (1.0 / 3.0) * in.a / w - (1.0 / 3.0) * in.Pbar / wb;
        out.epsilon_bar = -0.5 * rest;
        out.e = out.c * std::conj(out.epsilon_bar);
        if (in.Kbar_W && std::abs(*in.Kbar_W) > 0.0) {
            out.epsilon_bar_careful = rest * wb * in.L1_kbar / *in.Kbar_W;
        }
    }
    out.f = normalized_f(out.c, in.u);
    out.b = normalized_b(out.c, out.e, in.a, in.Pbar);
    out.d = normalized_d(out.c, out.e, in.H);
    return out;
}

Classification classify_signatures(const std::vector<PointSignature>& points)
{
    Classification out;
    if (points.empty()) {
        out.verdict = Verdict::Undetermined;
        out.reason = "no samples";
        return out;
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].admissible) {
            out.verdict = Verdict::Inadmissible;
            out.reason = "sample " + std::to_string(i) + ": " + points[i].reason;
            return out;
        }
    }
    auto all = [&](auto pred) { return std::all_of(points.begin(), points.end(), pred); };
    if (all([](const PointSignature& p) { return p.J_vanishes && p.W_vanishes; })) {
        out.verdict = Verdict::FlatLightConeTube;
        out.reason = "J and W vanish at every sample";
    } else if (all([](const PointSignature& p) { return !p.J_vanishes; })) {
        out.verdict = Verdict::BranchJ;
        out.reason = "J is nonzero at every sample";
    } else if (all([](const PointSignature& p) { return p.J_vanishes && !p.W_vanishes; })) {
        out.verdict = Verdict::BranchW;
        out.reason = "J vanishes and W is nonzero at every sample";
    } else {
        out.verdict = Verdict::Undetermined;
        out.reason = "J and W vanish at some samples but not at others";
    }
    return out;
}

} // namespace crparallax
