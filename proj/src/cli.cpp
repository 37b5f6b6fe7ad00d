#include "crparallax/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include "CLI11.hpp"

#include "crparallax/catalog.hpp"
#include "crparallax/parallel.hpp"
#include "crparallax/report.hpp"
#include "crparallax/sampling.hpp"

namespace crparallax::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string surface;
    std::vector<std::string> points;
    int samples = 20;
    std::uint64_t seed = 7;
    double box = 0.3;
    std::string center;
    int order = 8;
    bool exact = false;
    bool swap_z = false;
    std::string json_path;
    int workers = 1;
    Tolerances tol;
    bool allow_nonreal = false;
    std::string suite = "all";
    std::vector<std::string> catalog_args;
};

/// Raised for bad command-line values that CLI11 cannot catch itself.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PointParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double x, const char* format = "%.3g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x == 0.0 ? 0.0 : x);
    return buf;
}

// Human rendering works from the JSON document only.
std::string render_scalar(const json& s)
{
    if (s["re"].is_string()) {
        const std::string re = s["re"], im = s["im"];
        if (im == "0") {
            return re;
        }
        if (re == "0") {
            return im + "*i";
        }
        return re + (im[0] == '-' ? "" : "+") + im + "*i";
    }
    return num(s["re"].get<double>(), "%.6g") + num(s["im"].get<double>(), "%+.6g") + "i";
}

double scalar_abs(const json& s)
{
    if (s["re"].is_string()) {
        const double re = mpq_class(s["re"].get<std::string>()).get_d();
        const double im = mpq_class(s["im"].get<std::string>()).get_d();
        return std::hypot(re, im);
    }
    return std::hypot(s["re"].get<double>(), s["im"].get<double>());
}

BasePoint<GaussianRational> parse_center(const std::string& text, bool exact)
{
    try {
        if (exact) {
            return parse_point<GaussianRational>(text);
        }
        const auto p = parse_point<Complex>(text);
        auto q = [](const Complex& c) { return GaussianRational(mpq_class(c.real()), mpq_class(c.imag())); };
        return {q(p.z1), q(p.z2), q(p.v)};
    } catch (const std::invalid_argument& e) {
        throw PointParseError(e.what());
    }
}

SurfaceSpec load_spec(const Options& o)
{
    SurfaceSpec spec;
    try {
        spec = resolve_surface(o.surface, o.seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.swap_z) {
        // Reparse the relabelled expression so error spans point into the text we report.
        spec = parse_surface_text(to_string(swap_z(spec.expr)), spec.name + " (z1<->z2)");
    }
    return spec;
}

json tolerances_json(const Tolerances& t)
{
    return {{"div", t.div},     {"pivot", t.pivot},         {"rank", t.rank},          {"2nd", t.second},
            {"flat", t.flat},   {"identity", t.identity},   {"realness", t.realness}};
}

template <CoefficientField S>
struct Collected {
    std::vector<PointOutcome> outcomes;
    json sampling;
};

/// Explicit points are all kept. Sampled points are drawn in order until
/// `samples` admissible ones are found or 10x oversampling is used up.
template <CoefficientField S>
Collected<S> collect(const SurfaceSpec& spec, const Options& o, const AnalysisSettings& settings)
{
    Collected<S> c;
    auto analyze_all = [&](const std::vector<BasePoint<S>>& pts) {
        return parallel_map<PointOutcome>(pts.size(), o.workers,
                                          [&](std::size_t i) { return analyze_point(spec, pts[i], settings); });
    };
    if (!o.points.empty()) {
        std::vector<BasePoint<S>> pts;
        for (const auto& text : o.points) {
            try {
                pts.push_back(parse_point<S>(text));
            } catch (const std::invalid_argument& e) {
                throw PointParseError(e.what());
            } catch (const CrError& e) {
                if (e.kind() == ErrorKind::NotReal) {
                    throw PointParseError(e.what());
                }
                throw;
            }
        }
        c.outcomes = analyze_all(pts);
        c.sampling = nullptr;
        return c;
    }

    BasePoint<GaussianRational> center;
    if (!o.center.empty()) {
        center = parse_center(o.center, o.exact);
    } else if (auto entry = find_catalog_entry(o.surface, o.seed)) {
        center = entry->center;
    }
    PointSampler sampler(SamplingRequest{o.samples, o.seed, o.box, center});
    const int budget = 10 * o.samples;
    int draws = 0;
    std::map<std::string, int> rejections;
    while (static_cast<int>(c.outcomes.size()) < o.samples && draws < budget) {
        const int batch = std::min(o.samples - static_cast<int>(c.outcomes.size()), budget - draws);
        std::vector<BasePoint<S>> pts;
        for (int i = 0; i < batch; ++i) {
            pts.push_back(next_point<S>(sampler));
        }
        draws += batch;
        for (auto& r : analyze_all(pts)) {
            if (r.signature.admissible) {
                c.outcomes.push_back(std::move(r));
            } else {
                ++rejections[r.signature.failure ? std::string(to_string(*r.signature.failure)) : "unknown"];
            }
        }
    }
    const int kept = static_cast<int>(c.outcomes.size());
    c.sampling = {{"requested", o.samples}, {"seed", o.seed},   {"box", o.box},
                  {"center", point_json(center)}, {"draws", draws}, {"admissible", kept},
                  {"rejections", rejections}, {"partial", kept < o.samples}};
    return c;
}

json discrepancies(const std::vector<PointOutcome>& outs)
{
    json list = json::array();
    auto scan = [&](const char* formula, const char* reference, auto gap_of) {
        double worst = 0.0;
        json where = json::array();
        for (std::size_t i = 0; i < outs.size(); ++i) {
            if (const auto g = gap_of(outs[i])) {
                worst = std::max(worst, *g);
                if (*g > kCrossCheckTolerance) {
                    where.push_back(i);
                }
            }
        }
        if (!where.empty()) {
            list.push_back({{"formula", formula},
                            {"reference", reference},
                            {"max_relative_difference", worst},
                            {"tolerance", kCrossCheckTolerance},
                            {"points", where}});
        }
    };
    scan("closed-form k in partials of F", "k from the Levi-kernel elimination",
         [](const PointOutcome& p) { return p.k_gap; });
    scan("expanded J in L1-derivatives of conj k and P", "J from H",
         [](const PointOutcome& p) { return p.j_gap; });
    return list;
}

json base_report(const char* command, const SurfaceSpec* spec, const Options& o)
{
    json r;
    r["version"] = kToolVersion;
    r["command"] = command;
    if (spec) {
        r["surface"] = {{"name", spec->name}, {"text", spec->source_text}, {"swap_z", o.swap_z}};
    } else {
        r["surface"] = nullptr;
    }
    r["backend"] = o.exact ? "exact" : "floating";
    r["order"] = o.order;
    r["tolerances"] = tolerances_json(o.tol);
    return r;
}

template <CoefficientField S>
void fill_points(json& report, const Collected<S>& c)
{
    report["sampling"] = c.sampling;
    report["points"] = json::array();
    std::vector<PointSignature> sigs;
    for (std::size_t i = 0; i < c.outcomes.size(); ++i) {
        json rec = c.outcomes[i].record;
        rec["index"] = i;
        report["points"].push_back(std::move(rec));
        sigs.push_back(c.outcomes[i].signature);
    }
    report["discrepancies"] = discrepancies(c.outcomes);
    if (sigs.empty()) {
        report["verdict"] = to_string(Verdict::Inadmissible);
        report["verdict_reason"] = "no admissible point";
        return;
    }
    const Classification cls = classify_signatures(sigs);
    report["verdict"] = to_string(cls.verdict);
    report["verdict_reason"] = cls.reason;
}

/// Checks realness on up to three of the requested points before any analysis.
void realness_precheck(const SurfaceSpec& spec, const Options& o, std::ostream& err)
{
    std::vector<BasePoint<Complex>> probes;
    if (!o.points.empty()) {
        for (std::size_t i = 0; i < o.points.size() && i < 3; ++i) {
            try {
                probes.push_back(parse_point<Complex>(o.points[i]));
            } catch (const std::exception&) {
                // Reported properly once the points are parsed for real.
            }
        }
    } else {
        BasePoint<GaussianRational> center;
        if (auto entry = find_catalog_entry(o.surface, o.seed)) {
            center = entry->center;
        }
        if (!o.center.empty()) {
            center = parse_center(o.center, false);
        }
        PointSampler sampler(SamplingRequest{3, o.seed, o.box, center});
        for (int i = 0; i < 3; ++i) {
            probes.push_back(sampler.next_floating());
        }
    }
    for (const auto& p : probes) {
        RealnessReport rep;
        try {
            rep = check_realness(spec, std::vector<BasePoint<Complex>>{p}, 4, o.tol.realness);
        } catch (const CrError&) {
            continue;
        }
        if (!rep.real) {
            const std::string msg = "graphing function is not real at " + p.str() + " (relative residual " +
                                    num(rep.max_residual) + ")";
            if (o.allow_nonreal) {
                err << "warning: " << msg << "\n";
                return;
            }
            throw CrError(ErrorKind::NotReal, msg);
        }
    }
}

void write_json(const json& report, const Options& o, std::ostream& out)
{
    const std::string text = report.dump(2) + "\n";
    if (o.json_path == "-") {
        out << text;
    } else if (!o.json_path.empty()) {
        std::ofstream f(o.json_path, std::ios::binary);
        if (!f) {
            throw UsageError("cannot write " + o.json_path);
        }
        f << text;
    }
}

bool human(const Options& o) { return o.json_path != "-"; }

void render_points(const json& report, std::ostream& out)
{
    for (const auto& p : report["points"]) {
        out << "point " << p["index"].get<std::size_t>() << "  " << p["label"].get<std::string>() << "\n";
        const auto& adm = p["admissible"];
        if (!adm["admissible"].get<bool>()) {
            out << "  inadmissible (" << adm.value("failure", std::string("unknown"))
                << "): " << adm.value("reason", std::string("")) << "\n";
            continue;
        }
        const auto& v = p["values"];
        out << "  k = " << render_scalar(v["k"]) << "   l = " << render_scalar(v["l"])
            << "   P = " << render_scalar(v["P"]) << "\n";
        if (v.contains("J")) {
            const double scale = v["scale"];
            out << "  H = " << render_scalar(v["H"]) << "\n";
            out << "  J = " << render_scalar(v["J"]) << "   |J|/scale = " << num(scalar_abs(v["J"]) / scale) << "\n";
            out << "  W = " << render_scalar(v["W"]) << "   |W|/scale = " << num(scalar_abs(v["W"]) / scale) << "\n";
        }
        if (p.contains("identities")) {
            int passed = 0, failed = 0, info = 0;
            for (const auto& id : p["identities"]) {
                if (id["informational"].get<bool>()) {
                    ++info;
                } else if (id["passed"].get<bool>()) {
                    ++passed;
                } else {
                    ++failed;
                }
            }
            out << "  identities: " << passed << " passed, " << failed << " failed, " << info << " informational\n";
        }
    }
}

void render_summary(const json& report, std::ostream& out)
{
    if (!report["sampling"].is_null()) {
        const auto& s = report["sampling"];
        out << "sampling: " << s["admissible"].get<int>() << " admissible of " << s["draws"].get<int>()
            << " draws (requested " << s["requested"].get<int>() << ")\n";
        for (const auto& [kind, count] : s["rejections"].items()) {
            out << "  rejected " << count.get<int>() << " x " << kind << "\n";
        }
    }
    for (const auto& d : report["discrepancies"]) {
        out << "discrepancy: " << d["formula"].get<std::string>() << " differs from "
            << d["reference"].get<std::string>() << " (max relative difference "
            << num(d["max_relative_difference"].get<double>()) << " at " << d["points"].size() << " points)\n";
    }
    out << "verdict: " << report["verdict"].get<std::string>() << " (" << report["verdict_reason"].get<std::string>()
        << ")\n";
}

int first_failure_exit(const json& report, std::ostream& err)
{
    for (const auto& p : report["points"]) {
        if (!p["admissible"]["admissible"].get<bool>()) {
            err << "error: inadmissible at every point; first failure " << p["admissible"].value("failure", "")
                << ": " << p["admissible"].value("reason", "") << "\n";
            return kExitInadmissible;
        }
    }
    err << "error: no admissible point among " << report["sampling"]["draws"].get<int>() << " draws\n";
    return kExitInadmissible;
}

bool any_admissible(const json& report)
{
    for (const auto& p : report["points"]) {
        if (p["admissible"]["admissible"].get<bool>()) {
            return true;
        }
    }
    return false;
}

template <CoefficientField S>
int cmd_analyze(const Options& o, bool classify_only, std::ostream& out, std::ostream& err)
{
    if (o.order < required_order(Quantity::J)) {
        throw CrError(ErrorKind::OrderExhausted, "J needs F order >= " + std::to_string(required_order(Quantity::J)) +
                                                     ", requested " + std::to_string(o.order));
    }
    const SurfaceSpec spec = load_spec(o);
    realness_precheck(spec, o, err);
    AnalysisSettings settings{o.order, o.tol, o.allow_nonreal, std::nullopt};
    if (!classify_only) {
        settings.suite = Suite::All;
    }
    const auto collected = collect<S>(spec, o, settings);
    json report = base_report(classify_only ? "classify" : "analyze", &spec, o);
    fill_points(report, collected);
    write_json(report, o, out);
    if (human(o)) {
        if (classify_only) {
            out << report["verdict"].get<std::string>() << "\n";
        } else {
            out << "surface " << spec.name << " (" << report["backend"].get<std::string>() << ", order " << o.order
                << ")\n  F = " << spec.source_text << "\n";
            render_points(report, out);
        }
        render_summary(report, out);
    }
    return any_admissible(report) ? kExitOk : first_failure_exit(report, err);
}

struct CheckSummary {
    std::string name;
    int points = 0;
    int failed = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool informational = false;
    bool exact = false;
    std::vector<std::string> notes;
};

json check_json(const CheckSummary& c)
{
    json j{{"name", c.name},
           {"points", c.points},
           {"failed", c.failed},
           {"max_residual", c.max_residual},
           {"tolerance", c.tolerance},
           {"informational", c.informational},
           {"exact", c.exact},
           {"passed", c.informational || c.failed == 0}};
    if (!c.notes.empty()) {
        j["notes"] = c.notes;
    }
    return j;
}

std::vector<CheckSummary> summarize(const std::vector<PointOutcome>& outs)
{
    std::vector<CheckSummary> list;
    std::map<std::string, std::size_t> slot;
    for (const auto& o : outs) {
        for (const auto& r : o.identities) {
            auto [it, fresh] = slot.emplace(r.name, list.size());
            if (fresh) {
                list.push_back({r.name, 0, 0, 0.0, r.tolerance, r.informational, r.exact, {}});
            }
            auto& c = list[it->second];
            ++c.points;
            c.failed += r.passed ? 0 : 1;
            c.max_residual = std::max(c.max_residual, r.residual);
            if (!r.note.empty() && std::find(c.notes.begin(), c.notes.end(), r.note) == c.notes.end()) {
                c.notes.push_back(r.note);
            }
        }
    }
    return list;
}

void render_check(const json& c, std::ostream& out)
{
    const char* tag = c["informational"].get<bool>() ? "INFO" : (c["passed"].get<bool>() ? "PASS" : "FAIL");
    out << tag << "  " << c["name"].get<std::string>() << "  max residual "
        << num(c["max_residual"].get<double>()) << " over " << c["points"].get<int>() << " point(s)";
    if (c.contains("notes")) {
        out << "  [";
        for (std::size_t i = 0; i < c["notes"].size(); ++i) {
            out << (i ? "; " : "") << c["notes"][i].get<std::string>();
        }
        out << "]";
    }
    out << "\n";
}

template <CoefficientField S>
int cmd_verify(const Options& o, std::ostream& out, std::ostream& err)
{
    const Suite suite = parse_suite(o.suite);
    const bool model = suite == Suite::ModelAlgebra || suite == Suite::All;
    const bool points = suite != Suite::ModelAlgebra;
    if (points && o.surface.empty()) {
        throw UsageError("--surface is required for suite " + o.suite);
    }

    std::optional<SurfaceSpec> spec;
    json report;
    bool ok = true;
    int exit_code = kExitOk;
    if (points) {
        spec = load_spec(o);
        realness_precheck(*spec, o, err);
        const Suite point_suite = suite == Suite::All ? Suite::All : suite;
        const auto collected = collect<S>(*spec, o, AnalysisSettings{o.order, o.tol, o.allow_nonreal, point_suite});
        report = base_report("verify", &*spec, o);
        fill_points(report, collected);
        report["checks"] = json::array();
        for (const auto& c : summarize(collected.outcomes)) {
            report["checks"].push_back(check_json(c));
            ok = ok && (c.informational || c.failed == 0);
        }
        if (!any_admissible(report)) {
            ok = false;
            exit_code = first_failure_exit(report, err);
        } else {
            for (const auto& p : report["points"]) {
                ok = ok && p["admissible"]["admissible"].get<bool>();
            }
        }
    } else {
        report = base_report("verify", nullptr, o);
    }
    report["suite"] = to_string(suite);

    if (model) {
        report["model_algebra"] = json::array();
        for (const auto& r : {check_model_algebra(), check_term_necessity(), check_conjugation_symmetry()}) {
            CheckSummary c{r.name, 1, r.passed ? 0 : 1, r.residual, r.tolerance, false, true, {}};
            if (!r.note.empty()) {
                c.notes.push_back(r.note);
            }
            report["model_algebra"].push_back(check_json(c));
            ok = ok && r.passed;
        }
    }
    report["passed"] = ok;

    write_json(report, o, out);
    if (human(o)) {
        if (spec) {
            out << "surface " << spec->name << " (" << report["backend"].get<std::string>() << ", order " << o.order
                << ")\n";
            for (const auto& c : report["checks"]) {
                render_check(c, out);
            }
        }
        if (model) {
            out << "model algebra (exact)\n";
            for (const auto& c : report["model_algebra"]) {
                render_check(c, out);
            }
        }
        if (report.contains("discrepancies")) {
            for (const auto& d : report["discrepancies"]) {
                out << "discrepancy: " << d["formula"].get<std::string>() << " (max relative difference "
                    << num(d["max_relative_difference"].get<double>()) << ")\n";
            }
        }
        out << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
    }
    if (exit_code != kExitOk) {
        return exit_code;
    }
    return ok ? kExitOk : kExitFailed;
}

int cmd_catalog(const Options& o, std::ostream& out)
{
    const auto& args = o.catalog_args;
    if (args.empty() || args[0] == "list") {
        for (const auto& e : catalog_entries(o.seed)) {
            out << e.name << std::string(e.name.size() < 20 ? 20 - e.name.size() : 1, ' ') << e.description << "\n";
        }
        return kExitOk;
    }
    if (args[0] != "show" || args.size() != 2) {
        throw UsageError("usage: catalog list | catalog show <name>");
    }
    const auto entry = find_catalog_entry(args[1], o.seed);
    if (!entry) {
        throw UsageError("no catalog surface named '" + args[1] + "'");
    }
    out << entry->text << "\n";
    out << "# " << entry->description << "\n";
    if (!entry->region_note.empty()) {
        out << "# admissible region: " << entry->region_note << "\n";
    }
    out << "# default center: " << entry->center.str() << "\n";
    return kExitOk;
}

void add_analysis_options(CLI::App* cmd, Options& o)
{
    cmd->add_option("--surface", o.surface, "catalog name or path to a surface file");
    cmd->add_option("--point", o.points, "base point z1=a+bi,z2=c+di,v=e (repeatable)");
    cmd->add_option("--samples", o.samples, "number of sampled points")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "sampling seed (also the random-tube seed)");
    cmd->add_option("--box", o.box, "sampling radius around the center")->check(CLI::PositiveNumber);
    cmd->add_option("--center", o.center, "sampling center, same syntax as --point");
    cmd->add_option("--order", o.order, "truncation order of F")->check(CLI::Range(2, kMaxOrder));
    cmd->add_flag("--exact", o.exact, "exact Gaussian-rational arithmetic");
    cmd->add_flag("--swap-z", o.swap_z, "relabel z1 <-> z2 in the surface (points use the new labels)");
    cmd->add_option("--json", o.json_path, "write the JSON report to a path, or '-' for stdout");
    cmd->add_option("--workers", o.workers, "parallel point workers")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-div", o.tol.div, "division-by-zero threshold");
    cmd->add_option("--tol-pivot", o.tol.pivot, "pivot threshold for l11");
    cmd->add_option("--tol-rank", o.tol.rank, "Levi rank threshold");
    cmd->add_option("--tol-2nd", o.tol.second, "2-nondegeneracy threshold");
    cmd->add_option("--tol-flat", o.tol.flat, "flatness threshold relative to the local scale");
    cmd->add_option("--tol-identity", o.tol.identity, "identity residual threshold");
    cmd->add_option("--tol-realness", o.tol.realness, "realness residual threshold");
    cmd->add_flag("--allow-nonreal", o.allow_nonreal, "warn instead of failing when F is not real");
}

template <class Fn>
int dispatch(bool exact, Fn&& fn)
{
    return exact ? fn(GaussianRational{}) : fn(Complex{});
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    o.workers = default_workers();

    CLI::App app{"Adapted CR frames, invariants and flatness tests for Levi rank-1 hypersurfaces in C^3"};
    app.name("crparallax");
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    auto* analyze = app.add_subcommand("analyze", "per-point frame, invariants and identity report");
    auto* classify = app.add_subcommand("classify", "flat / branch J / branch W verdict over samples");
    auto* verify = app.add_subcommand("verify", "run identity suites");
    auto* catalog = app.add_subcommand("catalog", "list or show built-in surfaces");
    for (auto* cmd : {analyze, classify, verify}) {
        add_analysis_options(cmd, o);
    }
    analyze->callback([&] {
        if (o.surface.empty()) {
            throw CLI::RequiredError("--surface");
        }
    });
    classify->callback([&] {
        if (o.surface.empty()) {
            throw CLI::RequiredError("--surface");
        }
    });
    verify->add_option("--suite", o.suite, "brackets|jacobi|invariants|wprobe|model-algebra|all");
    catalog->add_option("action", o.catalog_args, "list | show <name>");
    catalog->add_option("--seed", o.seed, "random-tube seed");

    std::vector<std::string> argv_store{"crparallax"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*catalog) {
            return cmd_catalog(o, out);
        }
        if (*verify) {
            return dispatch(o.exact, [&](auto s) { return cmd_verify<decltype(s)>(o, out, err); });
        }
        const bool classify_only = static_cast<bool>(*classify);
        return dispatch(o.exact, [&](auto s) { return cmd_analyze<decltype(s)>(o, classify_only, out, err); });
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const PointParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CrError& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::OrderExhausted: return kExitOrder;
        case ErrorKind::ExactModeViolation: return kExitExactMode;
        case ErrorKind::NotReal: return kExitInadmissible;
        default: return kExitFailed;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailed;
    }
}

} // namespace crparallax::cli
