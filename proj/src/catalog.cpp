#include "crparallax/catalog.hpp"

#include <array>
#include <filesystem>
#include <random>

namespace crparallax {

namespace {

const char* kLightCone = "(z1*conj(z1) + (1/2)*z1^2*conj(z2) + (1/2)*conj(z1)^2*z2) / (1 - z2*conj(z2))";

std::string rational_literal(long num, long den)
{
    mpq_class q(num, den);
    q.canonicalize();
    return "(" + q.get_str() + ")";
}

/// min |g''(t)| >= 1 on [1/2, 2] for g'' = 2 g2 + 6 g3 t + 12 g4 t^2.
bool second_derivative_bounded(const mpq_class& g2, const mpq_class& g3, const mpq_class& g4)
{
    auto g = [&](const mpq_class& t) { return mpq_class(2 * g2 + 6 * g3 * t + 12 * g4 * t * t); };
    const mpq_class lo(1, 2), hi(2);
    std::vector<mpq_class> probes{lo, hi};
    if (sgn(g4) != 0) {
        const mpq_class vertex = -g3 / (4 * g4);
        if (vertex > lo && vertex < hi) {
            probes.push_back(vertex);
        }
    }
    // A quadratic attains its extremes on an interval at the ends or the vertex, and
    // has constant sign there iff the values at those points share a sign.
    const int sign = sgn(g(lo));
    for (const auto& t : probes) {
        const mpq_class v = g(t);
        if (sgn(v) != sign || abs(v) < 1) {
            return false;
        }
    }
    return true;
}

} // namespace

std::string random_tube_text(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::array<long, 5> num{};
    std::array<long, 5> den{};
    for (;;) {
        for (int i = 0; i < 5; ++i) {
            num[i] = static_cast<long>(rng() % 19) - 9;
            den[i] = static_cast<long>(rng() % 9) + 1;
        }
        // The Levi form is proportional to g''(x1/x2). Keep |g''| >= 1 on t in [1/2, 2],
        // which covers the default sampling window around (1, 1): near a root of g''
        // the frame is so ill-conditioned that floating residuals lose most digits.
        const mpq_class g2(num[2], den[2]), g3(num[3], den[3]), g4(num[4], den[4]);
        if (second_derivative_bounded(g2, g3, g4)) {
            break;
        }
    }
    std::string text = "re(z2)*(" + rational_literal(num[0], den[0]);
    for (int i = 1; i < 5; ++i) {
        text += " + " + rational_literal(num[i], den[i]) + "*(re(z1)/re(z2))";
        if (i > 1) {
            text += "^" + std::to_string(i);
        }
    }
    return text + ")";
}

std::vector<CatalogEntry> catalog_entries(std::uint64_t tube_seed)
{
    const BasePoint<GaussianRational> origin{};
    const BasePoint<GaussianRational> one_one{GaussianRational(1), GaussianRational(1), GaussianRational(0)};
    return {
        {"lightcone", kLightCone, "tube over the future light cone (flat model)", "|z2| < 1", origin},
        {"lightcone-sheared", std::string(kLightCone) + " + re((1/10)*z1*z2)",
         "image of the model under the holomorphic shear w -> w + z1*z2/10", "|z2| < 1", origin},
        {"spherelike", "z1*conj(z1) + z2*conj(z2)", "Levi-nondegenerate control (rank 2)", "none (never rank 1)",
         origin},
        {"cylinderlike", "z1*conj(z1)", "Levi rank 1 but not 2-nondegenerate", "none (k vanishes identically)",
         origin},
        {"cone-quartic", "re(z1)^4 / re(z2)^3", "tube over the developable cone u x2^3 = x1^4", "x2 != 0", one_one},
        {"random-tube", random_tube_text(tube_seed),
         "seeded tube x2 g(x1/x2) over a developable cone, seed " + std::to_string(tube_seed),
         "x2 != 0; |g''(x1/x2)| >= 1 for x1/x2 in [1/2, 2]", one_one},
    };
}

std::optional<CatalogEntry> find_catalog_entry(const std::string& name, std::uint64_t tube_seed)
{
    for (auto& e : catalog_entries(tube_seed)) {
        if (e.name == name) {
            return e;
        }
    }
    return std::nullopt;
}

SurfaceSpec resolve_surface(const std::string& name_or_path, std::uint64_t tube_seed)
{
    if (auto entry = find_catalog_entry(name_or_path, tube_seed)) {
        SurfaceSpec spec = parse_surface_text(entry->text, entry->name);
        spec.name = entry->name;
        return spec;
    }
    if (std::filesystem::exists(name_or_path)) {
        return load_surface_file(name_or_path);
    }
    throw std::invalid_argument("'" + name_or_path + "' is neither a catalog surface nor a readable file");
}

} // namespace crparallax
