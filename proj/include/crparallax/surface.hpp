#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crparallax/expr.hpp"
#include "crparallax/germ.hpp"

namespace crparallax {

/// A graphing function u = F(z1, z2, conj z1, conj z2, v) with its provenance.
struct SurfaceSpec {
    std::string name;
    ExprPtr expr;
    std::string source_text;
    bool realness_checked = false;
};

/// Parses surface-file contents: an optional first line `# name: <string>`, then the expression.
SurfaceSpec parse_surface_text(std::string_view text, std::string fallback_name = "custom");

SurfaceSpec load_surface_file(const std::string& path);

std::string describe_span(const SourceSpan& span, std::string_view source);

namespace detail {

template <CoefficientField S>
Germ<S> eval_node(const ExprPtr& e, const BasePoint<S>& base, int order, bool conjugated, std::string_view source)
{
    return std::visit(
        [&](const auto& n) -> Germ<S> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarNode>) {
                switch (n.var) {
                case Variable::z1: return variable_germ(base, order, conjugated ? Axis::z1bar : Axis::z1);
                case Variable::z2: return variable_germ(base, order, conjugated ? Axis::z2bar : Axis::z2);
                case Variable::v: return variable_germ(base, order, Axis::v);
                }
                return Germ<S>(base, order);
            } else if constexpr (std::is_same_v<T, ConstNode>) {
                const S c = from_gaussian<S>(conjugated ? conjugate(n.value) : n.value);
                return constant_germ(base, order, c);
            } else if constexpr (std::is_same_v<T, ConjNode>) {
                // conj of a polarized expression is the same expression in the swapped variables.
                return eval_node(n.child, base, order, !conjugated, source);
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return -eval_node(n.child, base, order, conjugated, source);
            } else if constexpr (std::is_same_v<T, PowNode>) {
                Germ<S> acc = constant_germ(base, order, from_int<S>(1));
                Germ<S> sq = eval_node(n.child, base, order, conjugated, source);
                for (unsigned k = n.exponent; k > 0; k >>= 1) {
                    if (k & 1U) {
                        acc = acc.is_one() ? sq : acc * sq;
                    }
                    if (k > 1) {
                        sq = sq * sq;
                    }
                }
                return acc;
            } else {
                auto lhs = eval_node(n.lhs, base, order, conjugated, source);
                auto rhs = eval_node(n.rhs, base, order, conjugated, source);
                switch (n.op) {
                case BinaryOp::Add: return lhs + rhs;
                case BinaryOp::Sub: return lhs - rhs;
                case BinaryOp::Mul: return lhs * rhs;
                case BinaryOp::Div:
                    try {
                        return lhs / rhs;
                    } catch (const CrError& err) {
                        if (err.kind() != ErrorKind::DivisionByZeroGerm) {
                            throw;
                        }
                        throw CrError(ErrorKind::DivisionByZeroGerm,
                                      "denominator " + describe_span(n.rhs->span, source) + " vanishes at " +
                                          base.str());
                    }
                }
                return lhs;
            }
        },
        e->node);
}

} // namespace detail

/// Germ of the expression at `base`, treating z and conj(z) as independent variables.
/// `source` is only used to name the offending subexpression in error messages.
template <CoefficientField S>
Germ<S> eval_germ(const ExprPtr& expr, const BasePoint<S>& base, int order, std::string_view source = {})
{
    return detail::eval_node(expr, base, order, false, source);
}

template <CoefficientField S>
Germ<S> eval_germ(const SurfaceSpec& spec, const BasePoint<S>& base, int order)
{
    return eval_germ(spec.expr, base, order, spec.source_text);
}

struct RealnessReport {
    bool real = true;
    double max_residual = 0.0;
    std::optional<std::size_t> witness;
};

/// Checks involute(F) == F at each probe: relative tolerance in floating mode, exact in exact mode.
template <CoefficientField S>
RealnessReport check_realness(const SurfaceSpec& spec, const std::vector<BasePoint<S>>& probes, int order = 4,
                              double rel_tol = 1e-10)
{
    RealnessReport report;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const Germ<S> f = eval_germ(spec, probes[p], order);
        const Germ<S> g = involute(f);
        const double scaled = distance(g, f) / (1.0 + f.sup_norm());
        bool ok = false;
        if constexpr (is_exact_v<S>) {
            ok = exactly_equal(g, f);
        } else {
            ok = scaled <= rel_tol;
        }
        report.max_residual = std::max(report.max_residual, scaled);
        if (!ok && report.real) {
            report.real = false;
            report.witness = p;
        }
    }
    return report;
}

} // namespace crparallax
