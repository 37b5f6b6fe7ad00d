#include "doctest.h"

#include "crparallax/catalog.hpp"
#include "crparallax/sampling.hpp"

using namespace crparallax;

TEST_CASE("catalog contents")
{
    auto entries = catalog_entries();
    REQUIRE(entries.size() == 6);
    for (const auto& e : entries) {
        CHECK_NOTHROW((void)parse_surface_text(e.text));
    }
    CHECK(find_catalog_entry("cone-quartic")->text == "re(z1)^4 / re(z2)^3");
    CHECK(find_catalog_entry("cone-quartic")->region_note.find("x2 != 0") != std::string::npos);
    CHECK_FALSE(find_catalog_entry("nonesuch").has_value());
}

TEST_CASE("random tubes are reproducible and seed dependent")
{
    CHECK(random_tube_text(3) == random_tube_text(3));
    CHECK(random_tube_text(3) != random_tube_text(4));
    auto spec = resolve_surface("random-tube", 3);
    CHECK(spec.name == "random-tube");
}

TEST_CASE("seeded sampling")
{
    SamplingRequest req{4, 42, 0.3, {}};
    PointSampler a(req), b(req);
    for (int n = 0; n < 4; ++n) {
        auto p = a.next_floating();
        auto q = b.next_floating();
        CHECK(p == q);
        CHECK(std::abs(p.z1) <= 0.3);
        CHECK(std::abs(p.v.real()) <= 0.3);
    }
    PointSampler e(req);
    auto x = e.next_exact();
    CHECK(x.v.is_real());
    CHECK(mpz_class(x.z1.real().get_den()) <= 1000);
    CHECK(std::abs(x.z1.to_complex()) <= 0.3 + 1e-12);
}

TEST_CASE("point parsing")
{
    auto p = parse_point<Complex>("z1=0.1-0.2i, z2=1/2+i, v=-0.25");
    CHECK(p.z1 == Complex(0.1, -0.2));
    CHECK(p.z2 == Complex(0.5, 1.0));
    CHECK(p.v == Complex(-0.25, 0.0));

    auto q = parse_point<GaussianRational>("z1=1/5+1/7i,z2=-i,v=1/3");
    CHECK(q.z1 == GaussianRational(mpq_class(1, 5), mpq_class(1, 7)));
    CHECK(q.z2 == GaussianRational(0, -1));

    auto origin = parse_point<GaussianRational>("z1=0,z2=0,v=0");
    CHECK(origin == BasePoint<GaussianRational>{});

    try {
        (void)parse_point<GaussianRational>("z1=0.5");
        FAIL("expected ExactModeViolation");
    } catch (const CrError& e) {
        CHECK(e.kind() == ErrorKind::ExactModeViolation);
    }
    CHECK_THROWS_AS((void)parse_point<Complex>("w=1"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_point<Complex>("v=1+i"), CrError);
    CHECK_THROWS_AS((void)parse_point<Complex>("z1=abc"), std::invalid_argument);
}
