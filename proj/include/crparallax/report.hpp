#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "crparallax/verify.hpp"

namespace crparallax {

inline constexpr const char* kToolVersion = "0.1.0";

/// Relative gap above which a cross-check is reported as a discrepancy.
inline constexpr double kCrossCheckTolerance = 1e-8;

struct AnalysisSettings {
    int order = 8;
    Tolerances tol;
    bool allow_nonreal = false;
    /// Identity suites to run at each admissible point.
    std::optional<Suite> suite;
};

/// Everything computed at one point: its JSON record plus the pieces the
/// aggregate report needs.
struct PointOutcome {
    nlohmann::json record;
    PointSignature signature;
    std::vector<IdentityResult> identities;
    std::optional<double> k_gap;
    std::optional<double> j_gap;
};

nlohmann::json scalar_json(const Complex& z);
nlohmann::json scalar_json(const GaussianRational& z);
nlohmann::json admissibility_json(const AdmissibilityFlags& flags);
nlohmann::json identity_json(const IdentityResult& r);
nlohmann::json params_json(const NormalizedGroupParams& p);

template <CoefficientField S>
nlohmann::json point_json(const BasePoint<S>& p)
{
    return {{"z1", scalar_json(p.z1)}, {"z2", scalar_json(p.z2)}, {"v", scalar_json(p.v)}};
}

namespace detail {

inline double relative_gap(const Complex& a, const Complex& b)
{
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

template <CoefficientField S>
void record_values(FrameCalculus<S>& calc, PointOutcome& out)
{
    const auto& fr = calc.frame();
    auto& values = out.record["values"];
    values["k"] = scalar_json(fr.k.value());
    values["l"] = scalar_json(fr.l.value());
    values["P"] = scalar_json(fr.P.value());
    values["lbar1_k"] = scalar_json(fr.lbar1_k.value());
    values["scale"] = calc.scale();
    if (calc.order() >= required_order(Quantity::H)) {
        values["H"] = scalar_json(calc.H().value());
        values["W"] = scalar_json(calc.W().value());
    }

    auto& cross = out.record["cross_checks"];
    const S kc = k_closed_form(fr.F).value();
    out.k_gap = relative_gap(to_complex(kc), to_complex(fr.k.value()));
    cross["k_closed_form"] = {{"value", scalar_json(kc)}, {"relative_difference", *out.k_gap}};

    if (calc.order() < required_order(Quantity::J)) {
        return;
    }
    const JValues<S> j = compute_J(calc);
    values["J"] = scalar_json(j.J);
    values["J_expanded"] = scalar_json(j.J_expanded);
    out.j_gap = j.relative_difference;
    cross["J_expanded"] = {{"relative_difference", j.relative_difference}};
}

} // namespace detail

/// Builds the frame at `base` and evaluates the invariants, flatness tests,
/// normalizations and (optionally) identity suites. Inadmissible points and
/// per-point evaluation failures are recorded, not thrown; only
/// OrderExhausted propagates because it concerns the whole request.
template <CoefficientField S>
PointOutcome analyze_point(const SurfaceSpec& spec, const BasePoint<S>& base, const AnalysisSettings& settings)
{
    PointOutcome out;
    out.record["point"] = point_json(base);
    out.record["label"] = base.str();
    auto mark_failed = [&](ErrorKind kind, const std::string& reason) {
        out.signature.admissible = false;
        out.signature.failure = kind;
        out.signature.reason = reason;
    };
    try {
        FramePacket<S> frame =
            build_frame(spec, base, settings.order, settings.tol, FrameOptions{false, settings.allow_nonreal});
        out.record["admissible"] = admissibility_json(frame.admissible);
        if (!frame.admissible.admissible()) {
            mark_failed(*frame.admissible.failure, frame.admissible.reason);
            return out;
        }
        FrameCalculus<S> calc(std::move(frame));
        out.signature.admissible = true;
        detail::record_values(calc, out);
        if (calc.order() >= required_order(Quantity::J)) {
            out.signature = signature_of(calc, settings.tol);
            out.record["flatness"] = {{"J_vanishes", out.signature.J_vanishes},
                                      {"W_vanishes", out.signature.W_vanishes}};
            if (!out.signature.J_vanishes || !out.signature.W_vanishes) {
                const Branch branch = out.signature.J_vanishes ? Branch::W : Branch::J;
                try {
                    const auto params = normalize_params(normalization_inputs(calc), branch, settings.tol.flat);
                    out.record["branch_params"] = params_json(params);
                } catch (const CrError& err) {
                    out.record["branch_params"] = {{"error", err.what()}};
                }
            }
        }
        if (settings.suite) {
            out.identities = run_point_suites(calc, *settings.suite, settings.tol);
            auto& ids = out.record["identities"];
            ids = nlohmann::json::array();
            for (const auto& r : out.identities) {
                ids.push_back(identity_json(r));
            }
        }
    } catch (const CrError& err) {
        if (err.kind() == ErrorKind::OrderExhausted) {
            throw;
        }
        std::string reason = err.what();
        const std::string prefix = std::string(to_string(err.kind())) + ": ";
        if (reason.starts_with(prefix)) {
            reason.erase(0, prefix.size());
        }
        const nlohmann::json failure{{"admissible", false}, {"failure", to_string(err.kind())}, {"reason", reason}};
        if (out.record.contains("admissible")) {
            // The frame was fine; a later quotient (a, W, J) hit a vanishing denominator.
            out.record["evaluation_error"] = failure;
            out.record["admissible"]["admissible"] = false;
            out.record["admissible"]["failure"] = failure["failure"];
            out.record["admissible"]["reason"] = reason;
        } else {
            out.record["admissible"] = failure;
        }
        mark_failed(err.kind(), reason);
    }
    return out;
}

} // namespace crparallax
