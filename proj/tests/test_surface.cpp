#include "doctest.h"

#include "crparallax/surface.hpp"
#include "support.hpp"

using namespace crparallax;

namespace {

const char* kLightCone =
    "(z1*conj(z1) + (1/2)*z1^2*conj(z2) + (1/2)*conj(z1)^2*z2) / (1 - z2*conj(z2))";

SurfaceSpec spec_of(const std::string& text)
{
    return parse_surface_text(text);
}

} // namespace

TEST_CASE("parser builds the expected trees")
{
    auto e = parse("z1*conj(z1)");
    const auto* mul = std::get_if<BinaryNode>(&e->node);
    REQUIRE(mul != nullptr);
    CHECK(mul->op == BinaryOp::Mul);
    CHECK(structurally_equal(mul->lhs, ast::var(Variable::z1)));
    CHECK(structurally_equal(mul->rhs, ast::conj(ast::var(Variable::z1))));

    auto model = parse(kLightCone);
    const auto* div = std::get_if<BinaryNode>(&model->node);
    REQUIRE(div != nullptr);
    CHECK(div->op == BinaryOp::Div);

    // precedence: ^ binds tighter than unary minus, which binds tighter than * and /.
    CHECK(structurally_equal(parse("-z1^2"), ast::neg(ast::pow(ast::var(Variable::z1), 2))));
    CHECK(structurally_equal(parse("z1 - z2 - v"),
                             ast::binary(BinaryOp::Sub,
                                         ast::binary(BinaryOp::Sub, ast::var(Variable::z1), ast::var(Variable::z2)),
                                         ast::var(Variable::v))));
}

TEST_CASE("literal subtrees fold into Gaussian rationals")
{
    CHECK(structurally_equal(parse("1/2"), ast::constant(GaussianRational::fraction(1, 2))));
    CHECK(structurally_equal(parse("(3 + 4*i)/5"),
                             ast::constant(GaussianRational(mpq_class(3, 5), mpq_class(4, 5)))));
    CHECK(structurally_equal(parse("-2^2"), ast::constant(GaussianRational(-4))));
    // a literal zero denominator stays a division so evaluation can report it.
    CHECK(std::holds_alternative<BinaryNode>(parse("1/0")->node));
}

TEST_CASE("parse errors carry position and expectations")
{
    try {
        (void)parse("z1 +* z2");
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.line() == 1);
        CHECK(err.column() == 5);
        CHECK(err.found() == "'*'");
        CHECK(!err.expected().empty());
    }
    CHECK_THROWS_AS((void)parse("z3 + 1"), ParseError);
    CHECK_THROWS_AS((void)parse("exp(z1)"), ParseError);
    CHECK_THROWS_AS((void)parse("0.5*z1"), ParseError);
    CHECK_THROWS_AS((void)parse("z1^"), ParseError);
    CHECK_THROWS_AS((void)parse("(z1"), ParseError);
    CHECK_THROWS_AS((void)parse(""), ParseError);
    try {
        (void)parse("z1 +\n  w");
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.line() == 2);
        CHECK(err.column() == 3);
    }
}

TEST_CASE("printing round-trips")
{
    for (const char* text : {kLightCone, "re(z1)^4 / re(z2)^3", "im(z1*conj(z2)) - (2/3 - 5*i)*v^2",
                             "-(1/7)*conj(z1 + i*z2)", "-z1 - -z2"}) {
        auto e = parse(text);
        CHECK(structurally_equal(parse(to_string(e)), e));
    }
}

TEST_CASE("evaluation of |z1|^2")
{
    const BasePoint<Complex> base{{1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}};
    auto g = eval_germ(parse("z1*conj(z1)"), base, 1);
    CHECK(g.value() == Complex(2.0));
    CHECK(g.coeff(unit_index(Axis::z1)) == Complex(1.0, -1.0));
    CHECK(g.coeff(unit_index(Axis::z1bar)) == Complex(1.0, 1.0));
}

TEST_CASE("model expression at the origin")
{
    auto g = eval_germ(parse(kLightCone), BasePoint<GaussianRational>{}, 3);
    CHECK(g.value().is_zero());
    for (Axis a : kAxes) {
        CHECK(g.coeff(unit_index(a)).is_zero());
    }
    CHECK(g.coeff({1, 0, 1, 0, 0}) == GaussianRational(1));
}

TEST_CASE("division by a vanishing denominator names the subexpression")
{
    const BasePoint<Complex> base{{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
    auto spec = spec_of("1/(1 - z2*conj(z2))");
    try {
        (void)eval_germ(spec, base, 2);
        FAIL("expected DivisionByZeroGerm");
    } catch (const CrError& err) {
        CHECK(err.kind() == ErrorKind::DivisionByZeroGerm);
        CHECK(std::string(err.what()).find("1 - z2*conj(z2)") != std::string::npos);
    }
}

TEST_CASE_TEMPLATE("realness", S, Complex, GaussianRational)
{
    std::mt19937_64 rng(5);
    std::vector<BasePoint<S>> probes;
    for (int k = 0; k < 3; ++k) {
        probes.push_back(testing_support::random_base<S>(rng));
    }
    probes.push_back(BasePoint<S>{rational<S>(1, 5), rational<S>(1, 7), rational<S>(1, 3)});
    CHECK(check_realness(spec_of(std::string("# name: model\n") + kLightCone), std::vector<BasePoint<S>>{probes.back()}).real);
    CHECK(check_realness(spec_of("re(z1^2*conj(z2))"), probes).real);
    CHECK(check_realness(spec_of("im(z1)*v^2 + z2*conj(z2)"), probes).real);
    auto bad = check_realness(spec_of("z1"), probes);
    CHECK_FALSE(bad.real);
    CHECK(bad.witness == std::size_t{0});
}

TEST_CASE_TEMPLATE("evaluation is a ring homomorphism", S, Complex, GaussianRational)
{
    std::mt19937_64 rng(9);
    auto a = parse("z1*conj(z2) + (2/3)*v");
    auto b = parse("1/(2 + z2*conj(z1)) - i*z1^2");
    for (int k = 0; k < 3; ++k) {
        const auto base = testing_support::random_base<S>(rng);
        const int n = is_exact_v<S> ? 3 : 5;
        auto ga = eval_germ(a, base, n);
        auto gb = eval_germ(b, base, n);
        CHECK(distance(eval_germ(ast::binary(BinaryOp::Add, a, b), base, n), ga + gb) <= 1e-13);
        CHECK(distance(eval_germ(ast::binary(BinaryOp::Mul, a, b), base, n), ga * gb) <= 1e-13);
        CHECK(distance(eval_germ(ast::conj(a), base, n), involute(ga)) <= 1e-13);
    }
}

TEST_CASE("surface files and relabelling")
{
    auto spec = spec_of("# name: shifted\nz1*conj(z1)\n");
    CHECK(spec.name == "shifted");
    CHECK(spec.source_text == "z1*conj(z1)");
    CHECK(structurally_equal(swap_z(spec.expr), parse("z2*conj(z2)")));
    CHECK(spec_of("z2").name == "custom");
}
