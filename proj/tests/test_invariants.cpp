#include "doctest.h"

#include <chrono>

#include "crparallax/invariants.hpp"
#include "support.hpp"

using namespace crparallax;

namespace {

using Q = GaussianRational;

const char* kLightCone =
    "(z1*conj(z1) + (1/2)*z1^2*conj(z2) + (1/2)*conj(z1)^2*z2) / (1 - z2*conj(z2))";
const char* kConeQuartic = "re(z1)^4 / re(z2)^3";

Q q(long num, long den, long inum = 0, long iden = 1) { return {mpq_class(num, den), mpq_class(inum, iden)}; }

template <CoefficientField S>
FrameCalculus<S> calculus(const char* text, const BasePoint<S>& base, int order)
{
    return FrameCalculus<S>(build_frame(parse_surface_text(text), base, order));
}

} // namespace

TEST_CASE("required orders")
{
    CHECK(required_order(Quantity::H) == 5);
    CHECK(required_order(Quantity::J) == 6);
    CHECK(required_order(Quantity::JRelation) == 7);
    auto calc = calculus(kConeQuartic, BasePoint<Q>{Q(1), Q(1), Q(0)}, 5);
    CHECK_NOTHROW((void)calc.H());
    try {
        (void)calc.J();
        FAIL("expected OrderExhausted");
    } catch (const CrError& e) {
        CHECK(e.kind() == ErrorKind::OrderExhausted);
    }
}

TEST_CASE("cone tube invariants match the symbolic oracle")
{
    SUBCASE("at (1, 1, 0)")
    {
        auto calc = calculus(kConeQuartic, BasePoint<Q>{Q(1), Q(1), Q(0)}, 6);
        CHECK(calc.H().value() == q(-7, 36));
        CHECK(calc.W().value().is_zero());
        CHECK(calc.Jbar().value() == q(-35, 108));
        CHECK(calc.J().value() == q(-35, 108));
        CHECK(calc.J_expanded().value() == calc.J().value());
    }
    SUBCASE("off the real slice")
    {
        auto calc = calculus(kConeQuartic, BasePoint<Q>{q(6, 5, 1, 3), q(9, 10, -1, 4), q(1, 7)}, 6);
        CHECK(calc.H().value() == q(-175, 1296));
        CHECK(calc.W().value().is_zero());
        CHECK(calc.Jbar().value() == q(-4375, 23328));
    }
}

TEST_CASE("the model is flat at an exact point")
{
    auto calc = calculus(kLightCone, BasePoint<Q>{q(1, 5, 1, 7), q(1, 10, -1, 9), Q(0)}, 6);
    CHECK(calc.H().value().is_zero());
    CHECK(calc.W().value().is_zero());
    CHECK(calc.J().value().is_zero());
    CHECK(calc.J_expanded().value().is_zero());
    auto sig = signature_of(calc, Tolerances{});
    CHECK(sig.J_vanishes);
    CHECK(sig.W_vanishes);
}

TEST_CASE("floating model flatness and J cross-check")
{
    const BasePoint<Complex> base{{0.21, -0.13}, {-0.08, 0.27}, {0.19, 0.0}};
    auto calc = calculus(kLightCone, base, 8);
    const double s = calc.scale();
    CHECK(std::abs(calc.J().value()) < 1e-6 * s);
    CHECK(std::abs(calc.W().value()) < 1e-6 * s);
    CHECK(compute_J(calc).relative_difference < 1e-8);
}

TEST_CASE("normalizations")
{
    SUBCASE("f reduces to conj(L1)(k) when c = 1")
    {
        CHECK(normalized_f({1.0, 0.0}, {0.3, -0.4}) == Complex(0.3, -0.4));
    }
    SUBCASE("flat model has no branch")
    {
        auto calc = calculus(kLightCone, BasePoint<Complex>{{0.1, 0.05}, {0.2, -0.1}, {0.0, 0.0}}, 7);
        auto in = normalization_inputs(calc);
        in.J = {};
        in.W = {};
        CHECK_THROWS_AS((void)normalize_params(in, Branch::J), CrError);
        CHECK_THROWS_AS((void)normalize_params(in, Branch::W), CrError);
    }
    SUBCASE("cone tube, branch J")
    {
        auto calc = calculus(kConeQuartic, BasePoint<Complex>{{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}, 7);
        auto p = normalize_params(normalization_inputs(calc), Branch::J);
        const Complex J = to_complex(calc.J().value());
        CHECK(std::abs(p.c * p.c * p.c - J) < 1e-12);
        for (Complex z : {p.f, p.b, p.d, p.e}) {
            CHECK(std::isfinite(z.real()));
            CHECK(std::isfinite(z.imag()));
        }
        REQUIRE(p.consistency_residual.has_value());
        CHECK(*p.consistency_residual < 1e-7);
        CHECK_THROWS_AS((void)normalize_params(normalization_inputs(calc), Branch::W), CrError);
    }
    SUBCASE("branch W solves its defining equation")
    {
        NormalizationInputs in{};
        in.u = {0.5, 0.1};
        in.a = {0.2, -0.3};
        in.Pbar = {1.1, 0.4};
        in.H = {0.05, 0.0};
        in.W = {0.7, -0.2};
        in.Wbar = std::conj(in.W);
        in.Lbar1_W = {0.3, 0.9};
        auto p = normalize_params(in, Branch::W);
        const Complex w = in.W, wb = in.Wbar;
        const Complex eq = -2.0 * p.epsilon_bar - in.Lbar1_W / (w * wb) - in.a / (3.0 * w) + in.Pbar / (3.0 * wb);
        CHECK(std::abs(eq) < 1e-14);
        CHECK(p.c == in.W);
        CHECK(std::abs(p.e - p.c * std::conj(p.epsilon_bar)) < 1e-15);
    }
}

TEST_CASE("classification of signatures")
{
    PointSignature flat{true, std::nullopt, "", true, true};
    PointSignature j{true, std::nullopt, "", false, true};
    PointSignature w{true, std::nullopt, "", true, false};
    PointSignature bad{false, ErrorKind::NotRankOne, "rank 2", false, false};
    CHECK(classify_signatures({flat, flat}).verdict == Verdict::FlatLightConeTube);
    CHECK(classify_signatures({j, j}).verdict == Verdict::BranchJ);
    CHECK(classify_signatures({w}).verdict == Verdict::BranchW);
    CHECK(classify_signatures({flat, j}).verdict == Verdict::Undetermined);
    CHECK(classify_signatures({flat, bad}).verdict == Verdict::Inadmissible);
}

TEST_CASE("classify end to end")
{
    auto spec = parse_surface_text(kLightCone);
    std::vector<BasePoint<Complex>> pts{{{0.1, 0.2}, {-0.2, 0.1}, {0.05, 0.0}}, {{-0.25, 0.0}, {0.1, 0.1}, {-0.2, 0.0}}};
    CHECK(classify(spec, pts, 8, {}, 2).verdict == Verdict::FlatLightConeTube);
    auto sphere = parse_surface_text("z1*conj(z1) + z2*conj(z2)");
    auto c = classify(sphere, pts, 8);
    CHECK(c.verdict == Verdict::Inadmissible);
    CHECK(c.reason.find("NotRankOne") != std::string::npos);
}

TEST_CASE("exact order-8 flatness runs in reasonable time")
{
    const auto start = std::chrono::steady_clock::now();
    auto calc = calculus(kLightCone, BasePoint<Q>{q(1, 5, 1, 7), q(1, 10, -1, 9), q(1, 4)}, 8);
    CHECK(calc.J().value().is_zero());
    CHECK(calc.W().value().is_zero());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    MESSAGE("exact order-8 J and W: " << secs << " s");
}
