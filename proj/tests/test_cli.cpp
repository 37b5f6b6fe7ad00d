#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "crparallax/cli.hpp"

using crparallax::cli::run;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

json call_json(std::vector<std::string> args)
{
    args.push_back("--json");
    args.push_back("-");
    const auto r = call(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

double abs_of(const json& s) { return std::hypot(s["re"].get<double>(), s["im"].get<double>()); }

} // namespace

TEST_CASE("analyze at the origin of the model")
{
    const auto report = call_json({"analyze", "--surface", "lightcone", "--point", "z1=0,z2=0,v=0"});
    REQUIRE(report["points"].size() == 1);
    const auto& p = report["points"][0];
    CHECK(p["admissible"]["admissible"].get<bool>());
    CHECK(p["admissible"]["rank"] == 1);
    CHECK(abs_of(p["values"]["k"]) == 0.0);
    CHECK(abs_of(p["values"]["J"]) < 1e-6);
    CHECK(abs_of(p["values"]["W"]) < 1e-6);
    CHECK(report["verdict"] == "FLAT_LIGHT_CONE_TUBE");
    for (const char* key : {"version", "surface", "points", "verdict", "discrepancies"}) {
        CHECK(report.contains(key));
    }
}

TEST_CASE("exit codes")
{
    auto sphere = call({"analyze", "--surface", "spherelike", "--point", "z1=0,z2=0,v=0"});
    CHECK(sphere.code == 2);
    CHECK(sphere.err.find("NotRankOne") != std::string::npos);

    auto pole = call({"analyze", "--surface", "lightcone", "--point", "z1=0,z2=1,v=0"});
    CHECK(pole.code == 2);
    CHECK(pole.err.find("1 - z2*conj(z2)") != std::string::npos);

    CHECK(call({"analyze", "--surface", "lightcone", "--point", "z1=zz"}).code == 3);
    CHECK(call({"analyze", "--surface", "lightcone", "--order", "5"}).code == 4);
    CHECK(call({"analyze", "--surface", "lightcone", "--exact", "--point", "z1=0.5"}).code == 5);

    const std::string path = "test_cli_broken.surf";
    std::ofstream(path) << "# name: broken\nz1*conj(z1) + (\n";
    CHECK(call({"analyze", "--surface", path}).code == 3);
    std::remove(path.c_str());

    std::ofstream("test_cli_complex.surf") << "i*z1*conj(z1)\n";
    CHECK(call({"analyze", "--surface", "test_cli_complex.surf", "--point", "z1=1/10"}).code == 2);
    std::remove("test_cli_complex.surf");

    CHECK(call({"analyze", "--surface", "no-such-surface"}).code == 1);
    CHECK(call({"frobnicate"}).code != 0);
}

TEST_CASE("classify verdicts")
{
    auto flat = call({"classify", "--surface", "lightcone", "--samples", "20", "--seed", "7", "--box", "0.3"});
    CHECK(flat.code == 0);
    CHECK(flat.out.rfind("FLAT_LIGHT_CONE_TUBE\n", 0) == 0);

    auto sheared = call({"classify", "--surface", "lightcone-sheared", "--samples", "20"});
    CHECK(sheared.out.rfind("FLAT_LIGHT_CONE_TUBE\n", 0) == 0);

    for (const char* seed : {"7", "8"}) {
        auto cone = call({"classify", "--surface", "cone-quartic", "--samples", "10", "--seed", seed, "--box", "0.2",
                          "--center", "z1=1,z2=1"});
        CHECK(cone.out.rfind("BRANCH_J\n", 0) == 0);
    }

    auto degenerate = call({"classify", "--surface", "cylinderlike", "--samples", "2"});
    CHECK(degenerate.code == 2);
    CHECK(degenerate.out.rfind("INADMISSIBLE\n", 0) == 0);
}

TEST_CASE("verify")
{
    CHECK(call({"verify", "--surface", "lightcone", "--suite", "all", "--samples", "5"}).code == 0);
    CHECK(call({"verify", "--suite", "model-algebra"}).code == 0);
    CHECK(call({"verify", "--surface", "random-tube", "--seed", "3", "--suite", "jacobi"}).code == 0);
    CHECK(call({"verify", "--suite", "brackets"}).code == 1);
    CHECK(call({"verify", "--surface", "lightcone", "--suite", "nonsense"}).code == 1);
}

TEST_CASE("catalog")
{
    auto list = call({"catalog", "list"});
    CHECK(list.code == 0);
    for (const char* name : {"lightcone", "lightcone-sheared", "spherelike", "cylinderlike", "cone-quartic", "random-tube"}) {
        CHECK(list.out.find(name) != std::string::npos);
    }
    auto cone = call({"catalog", "show", "cone-quartic"});
    CHECK(cone.out.rfind("re(z1)^4 / re(z2)^3\n", 0) == 0);
    CHECK(cone.out.find("x2 != 0") != std::string::npos);
    CHECK(call({"catalog", "show", "nope"}).code == 1);
}

TEST_CASE("reports are byte-identical across worker counts")
{
    std::vector<std::string> base{"analyze", "--surface", "cone-quartic", "--samples", "6", "--box", "0.2", "--json", "-"};
    auto a = base, b = base;
    a.insert(a.end(), {"--workers", "1"});
    b.insert(b.end(), {"--workers", "4"});
    const auto ra = call(a), rb = call(b);
    CHECK(ra.code == 0);
    CHECK(ra.out == rb.out);

    auto exact = call({"analyze", "--surface", "lightcone", "--exact", "--samples", "2", "--json", "-"});
    CHECK(exact.out == call({"analyze", "--surface", "lightcone", "--exact", "--samples", "2", "--json", "-"}).out);
    const auto doc = json::parse(exact.out);
    CHECK(doc["points"][0]["values"]["J"]["re"] == "0");
}

TEST_CASE("swap-z relabels the surface")
{
    const auto r = call({"analyze", "--surface", "lightcone", "--swap-z", "--point", "z1=0,z2=0,v=0", "--json", "-"});
    CHECK(r.code == 2);
    const auto report = json::parse(r.out);
    CHECK(report["surface"]["swap_z"].get<bool>());
    // With z1 and z2 exchanged, the Levi pivot l11 vanishes at the origin.
    CHECK(report["points"][0]["admissible"]["failure"] == "PivotDegenerate");
}
