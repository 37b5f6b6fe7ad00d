// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "crparallax/catalog.hpp"
#include "crparallax/cli.hpp"
#include "crparallax/parallel.hpp"
#include "crparallax/report.hpp"
#include "crparallax/sampling.hpp"

using namespace crparallax;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json run_json(std::vector<std::string> args, int* code = nullptr)
{
    args.insert(args.end(), {"--json", "-"});
    std::ostringstream out, err;
    const int rc = cli::run(args, out, err);
    if (code) {
        *code = rc;
    }
    if (out.str().empty()) {
        throw std::runtime_error("no report from: " + err.str());
    }
    return json::parse(out.str());
}

template <CoefficientField S>
std::vector<BasePoint<S>> draws(int n, std::uint64_t seed, double box, BasePoint<GaussianRational> center = {})
{
    PointSampler sampler(SamplingRequest{n, seed, box, std::move(center)});
    std::vector<BasePoint<S>> pts;
    for (int i = 0; i < n; ++i) {
        pts.push_back(next_point<S>(sampler));
    }
    return pts;
}

Outcome model_flatness()
{
    const auto t0 = std::chrono::steady_clock::now();
    const SurfaceSpec spec = resolve_surface("lightcone");
    const auto pts = draws<Complex>(20, 7, 0.3);
    const Tolerances tol;
    struct Row {
        bool ok = false;
        double j = 0.0, w = 0.0;
        std::string why;
    };
    const auto rows = parallel_map<Row>(pts.size(), default_workers(), [&](std::size_t i) {
        Row row;
        try {
            FrameCalculus<Complex> calc(build_frame(spec, pts[i], 8, tol));
            const auto& flags = calc.frame().admissible;
            const bool rank_ok = flags.levi_rank == 1 && flags.residuals.at("rank_det") < 1e-8;
            const bool second_ok = std::abs(calc.frame().lbar1_k.value()) > 1e-9;
            row.j = std::abs(calc.J().value()) / calc.scale();
            row.w = std::abs(calc.W().value()) / calc.scale();
            row.ok = rank_ok && second_ok && row.j < 1e-6 && row.w < 1e-6;
            if (!row.ok) {
                row.why = pts[i].str();
            }
        } catch (const CrError& e) {
            row.why = e.what();
        }
        return row;
    });
    const double elapsed = seconds_since(t0);
    int ok = 0;
    double jmax = 0.0, wmax = 0.0;
    std::string why;
    for (const auto& r : rows) {
        ok += r.ok ? 1 : 0;
        jmax = std::max(jmax, r.j);
        wmax = std::max(wmax, r.w);
        if (!r.ok && why.empty()) {
            why = "; first failure " + r.why;
        }
    }
    return {ok == 20 && elapsed < 10.0, std::to_string(ok) + "/20 admissible and flat, max |J|/scale " + fmt(jmax) +
                                            ", max |W|/scale " + fmt(wmax) + ", " + fmt(elapsed) + " s" + why};
}

Outcome exact_certificate()
{
    const auto t0 = std::chrono::steady_clock::now();
    const SurfaceSpec spec = resolve_surface("lightcone");
    const auto pts = draws<GaussianRational>(5, 7, 0.3);
    const auto zeros = parallel_map<int>(pts.size(), default_workers(), [&](std::size_t i) {
        FrameCalculus<GaussianRational> calc(build_frame(spec, pts[i], 8));
        return (calc.J().value().is_zero() && calc.W().value().is_zero()) ? 1 : 0;
    });
    int ok = 0;
    for (int z : zeros) {
        ok += z;
    }
    const double elapsed = seconds_since(t0);
    return {ok == 5 && elapsed < 60.0,
            std::to_string(ok) + "/5 rational points with J = W = 0 exactly, " + fmt(elapsed) + " s"};
}

Outcome sheared_model()
{
    int code = 0;
    const json r = run_json({"classify", "--surface", "lightcone-sheared", "--samples", "20", "--seed", "7", "--box",
                             "0.3", "--order", "8"},
                            &code);
    const std::string verdict = r["verdict"];
    return {code == 0 && verdict == "FLAT_LIGHT_CONE_TUBE", "verdict " + verdict};
}

/// Identity names that must be present and pass on every surface.
const std::set<std::string> kRequired = {
    "[T,L1] + P T",
    "[T,conj L1] + conj(P) T",
    "[T,K] - L1(k) T - T(k) L1",
    "[T,conj K] - conj L1(conj k) T - T(conj k) conj L1",
    "[L1,conj L1] + i T",
    "[L1,K] - L1(k) L1",
    "[L1,conj K] - L1(conj k) conj L1",
    "[conj L1,K] - conj L1(k) L1",
    "[conj L1,conj K] - conj L1(conj k) conj L1",
    "[K,conj K]",
    "[L1,L2]",
    "K(conj k)",
    "K(P) + P L1(k) + L1(L1(k))",
    "K(conj P) + P conj L1(k) + conj L1(L1(k)) + i T(k)",
    "conj K(H) + 2 conj L1(conj k) H",
};

std::string suite_check(std::vector<std::string> args, double& worst)
{
    int code = 0;
    const json r = run_json(args, &code);
    std::set<std::string> seen;
    for (const auto& c : r["checks"]) {
        const std::string name = c["name"];
        if (!kRequired.count(name)) {
            continue;
        }
        seen.insert(name);
        worst = std::max(worst, c["max_residual"].get<double>());
        if (!c["passed"].get<bool>()) {
            return name + " failed on " + args[2];
        }
    }
    if (seen.size() != kRequired.size()) {
        return "missing identities on " + args[2];
    }
    if (code != 0) {
        return "verify exit " + std::to_string(code) + " on " + args[2];
    }
    return {};
}

Outcome identity_suites()
{
    double worst = 0.0;
    std::vector<std::vector<std::string>> runs = {
        {"verify", "--surface", "lightcone", "--suite", "all", "--samples", "5"},
        {"verify", "--surface", "cone-quartic", "--suite", "all", "--samples", "5", "--box", "0.2"},
        {"verify", "--surface", "cone-quartic", "--suite", "all", "--exact", "--point", "z1=1,z2=1,v=0"},
        {"verify", "--surface", "lightcone", "--suite", "all", "--exact", "--samples", "2"},
    };
    for (int seed = 1; seed <= 5; ++seed) {
        runs.push_back({"verify", "--surface", "random-tube", "--seed", std::to_string(seed), "--suite", "all",
                        "--samples", "5", "--box", "0.2"});
    }
    for (const auto& args : runs) {
        if (auto err = suite_check(args, worst); !err.empty()) {
            return {false, err};
        }
    }

    // Negative control 1: a k that is wrong at first order.
    const SurfaceSpec spec = resolve_surface("cone-quartic");
    const BasePoint<Complex> p{Complex(1.0), Complex(1.0), Complex(0.0)};
    auto frame = build_frame(spec, p, 8);
    const Germ<Complex> bad_k = frame.k + variable_germ(p, frame.k.order(), Axis::z1bar) * Complex(1e-3);
    FrameCalculus<Complex> corrupted(rebuild_kernel(std::move(frame), bad_k));
    int caught = 0;
    for (const auto& r : run_bracket_suite(corrupted)) {
        caught += r.passed ? 0 : 1;
    }
    // Negative control 2: a structure-constant table with one term deleted.
    const bool table_caught = !check_model_algebra(ModelStructureConstants::flat_model().without_term(0)).passed;

    return {caught > 0 && table_caught,
            std::to_string(runs.size()) + " surface runs pass (max residual " + fmt(worst) + "); corrupted k fails " +
                std::to_string(caught) + " bracket relations; corrupted table " +
                (table_caught ? "fails" : "passes")};
}

Outcome j_relation()
{
    int code = 0;
    const json r = run_json({"verify", "--surface", "cone-quartic", "--suite", "invariants", "--samples", "5", "--box",
                             "0.2", "--order", "8"},
                            &code);
    for (const auto& c : r["checks"]) {
        if (c["name"] == "(1/3) conj K(conj J) + conj L1(conj k) conj J") {
            const bool substantive = !c.contains("notes") && !c["informational"].get<bool>();
            const double res = c["max_residual"];
            const int pts = c["points"];
            return {substantive && pts == 5 && res < 1e-7 && c["failed"] == 0,
                    "max residual " + fmt(res) + " over " + std::to_string(pts) + " points, J nonzero at each"};
        }
    }
    return {false, "relation missing from report"};
}

Outcome nonflat_witness()
{
    const SurfaceSpec spec = resolve_surface("cone-quartic");
    FrameCalculus<Complex> fl(build_frame(spec, BasePoint<Complex>{Complex(1.0), Complex(1.0), Complex(0.0)}, 8));
    const double j = std::abs(fl.J().value()) / fl.scale();
    const double w = std::abs(fl.W().value()) / fl.scale();
    FrameCalculus<GaussianRational> ex(build_frame(spec, BasePoint<GaussianRational>{1, 1, 0}, 8));
    const GaussianRational J = ex.J().value();
    return {(j > 1e-3 || w > 1e-3) && !J.is_zero(),
            "|J|/scale " + fmt(j) + ", |W|/scale " + fmt(w) + "; exact J = " + J.str()};
}

Outcome cross_checks()
{
    const json r = run_json({"analyze", "--surface", "lightcone", "--samples", "20", "--seed", "7", "--box", "0.3"});
    double kmax = 0.0, jmax = 0.0;
    for (const auto& p : r["points"]) {
        kmax = std::max(kmax, p["cross_checks"]["k_closed_form"]["relative_difference"].get<double>());
        jmax = std::max(jmax, p["cross_checks"]["J_expanded"]["relative_difference"].get<double>());
    }
    std::set<std::string> recorded;
    for (const auto& d : r["discrepancies"]) {
        recorded.insert(d["formula"].get<std::string>());
    }
    const bool k_ok = kmax <= kCrossCheckTolerance || recorded.count("closed-form k in partials of F");
    const bool j_ok = jmax <= kCrossCheckTolerance || recorded.count("expanded J in L1-derivatives of conj k and P");
    const bool silent = (kmax > kCrossCheckTolerance) + (jmax > kCrossCheckTolerance) != recorded.size();
    return {k_ok && j_ok && !silent, "k gap " + fmt(kmax) + ", J gap " + fmt(jmax) + ", " +
                                         std::to_string(recorded.size()) + " discrepancy record(s)"};
}

Outcome model_algebra()
{
    const auto closes = check_model_algebra();
    const auto needed = check_term_necessity();
    const auto sym = check_conjugation_symmetry();
    return {closes.passed && needed.passed && sym.passed,
            closes.note + "; " + needed.note + "; conjugation " + (sym.passed ? "symmetric" : "asymmetric")};
}

Outcome w_probe()
{
    std::set<std::string> verdicts;
    int residuals = 0;
    double r1 = 0.0, r2 = 0.0;
    for (const char* seed : {"7", "11", "23"}) {
        const json r = run_json({"verify", "--surface", "cone-quartic", "--suite", "wprobe", "--samples", "5", "--box",
                                 "0.2", "--seed", seed});
        for (const auto& p : r["points"]) {
            for (const auto& id : p["identities"]) {
                ++residuals;
                const std::string name = id["name"];
                const double res = id["residual"];
                (name.find("T(conj k)") != std::string::npos ? r2 : r1) = res;
                verdicts.insert(name + ": " + id.value("note", std::string("?")));
            }
        }
    }
    std::string summary;
    for (const auto& v : verdicts) {
        summary += (summary.empty() ? "" : " | ") + v;
    }
    // Two relations, five points, three seeds; each relation keeps one verdict throughout.
    return {residuals == 30 && verdicts.size() == 2,
            std::to_string(residuals) + " residuals (last r1 " + fmt(r1) + ", r2 " + fmt(r2) + "); " + summary};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"model flatness, floating", model_flatness},
        {"model flatness, exact", exact_certificate},
        {"sheared model classifies flat", sheared_model},
        {"identity suites and negative controls", identity_suites},
        {"J relation on cone-quartic", j_relation},
        {"non-flat witness", nonflat_witness},
        {"cross-check discipline", cross_checks},
        {"model structure equations", model_algebra},
        {"conj K(W) probe", w_probe},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " -- "
                  << o.detail << "\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
