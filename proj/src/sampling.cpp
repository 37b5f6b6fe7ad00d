#include "crparallax/sampling.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crparallax {

double PointSampler::unit()
{
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

long PointSampler::grid(long half_width)
{
    return static_cast<long>(rng_() % static_cast<std::uint64_t>(2 * half_width + 1)) - half_width;
}

BasePoint<Complex> PointSampler::next_floating()
{
    const BasePoint<Complex> c = to_floating(req_.center);
    auto disc = [&](Complex center) {
        const double r = req_.box * std::sqrt(unit());
        const double theta = 2.0 * std::numbers::pi * unit();
        return center + std::polar(r, theta);
    };
    const Complex z1 = disc(c.z1);
    const Complex z2 = disc(c.z2);
    const double v = c.v.real() + req_.box * (2.0 * unit() - 1.0);
    return {z1, z2, {v, 0.0}};
}

BasePoint<GaussianRational> PointSampler::next_exact()
{
    const long w = std::max(1L, std::lround(req_.box * kExactGrid));
    auto disc = [&](const GaussianRational& center) {
        for (;;) {
            const long m = grid(w);
            const long n = grid(w);
            if (m * m + n * n <= w * w) {
                return center + GaussianRational(mpq_class(m, kExactGrid), mpq_class(n, kExactGrid));
            }
        }
    };
    GaussianRational z1 = disc(req_.center.z1);
    GaussianRational z2 = disc(req_.center.z2);
    GaussianRational v = req_.center.v + GaussianRational(mpq_class(grid(w), kExactGrid));
    return {std::move(z1), std::move(z2), std::move(v)};
}

namespace {

struct RealLiteral {
    mpq_class value;
    bool decimal = false;
};

RealLiteral parse_real(const std::string& s, const std::string& context)
{
    if (s.empty() || s == "+") {
        return {mpq_class(1)};
    }
    if (s == "-") {
        return {mpq_class(-1)};
    }
    auto bad = [&] { return std::invalid_argument("malformed number '" + s + "' in " + context); };
    const bool has_decimal = s.find_first_of(".eE") != std::string::npos;
    if (has_decimal) {
        std::size_t used = 0;
        double d = 0.0;
        try {
            d = std::stod(s, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != s.size() || !std::isfinite(d)) {
            throw bad();
        }
        return {mpq_class(d), true};
    }
    std::string body = s[0] == '+' ? s.substr(1) : s;
    for (char c : body) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-')) {
            throw bad();
        }
    }
    try {
        mpq_class q(body);
        if (q.get_den() == 0) {
            throw bad();
        }
        q.canonicalize();
        return {q};
    } catch (const std::invalid_argument&) {
        throw bad();
    }
}

struct ComplexLiteral {
    RealLiteral re;
    RealLiteral im;
};

ComplexLiteral parse_complex(std::string s, const std::string& context)
{
    ComplexLiteral out{{mpq_class(0)}, {mpq_class(0)}};
    if (s.empty()) {
        throw std::invalid_argument("missing value in " + context);
    }
    if (s.back() != 'i') {
        out.re = parse_real(s, context);
        return out;
    }
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t p = s.size(); p-- > 1;) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos) {
        out.im = parse_real(s, context);
    } else {
        out.re = parse_real(s.substr(0, split), context);
        out.im = parse_real(s.substr(split), context);
    }
    return out;
}

} // namespace

template <CoefficientField S>
BasePoint<S> parse_point(const std::string& text)
{
    std::string compact;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            compact += c;
        }
    }
    ComplexLiteral z1{{mpq_class(0)}, {mpq_class(0)}}, z2 = z1, v = z1;
    std::size_t start = 0;
    while (start < compact.size()) {
        std::size_t end = compact.find(',', start);
        if (end == std::string::npos) {
            end = compact.size();
        }
        const std::string item = compact.substr(start, end - start);
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("expected name=value in point '" + text + "'");
        }
        const std::string key = item.substr(0, eq);
        const ComplexLiteral value = parse_complex(item.substr(eq + 1), "point '" + text + "'");
        if (key == "z1") {
            z1 = value;
        } else if (key == "z2") {
            z2 = value;
        } else if (key == "v") {
            v = value;
        } else {
            throw std::invalid_argument("unknown coordinate '" + key + "' in point '" + text + "'");
        }
        start = end + 1;
    }
    if (sgn(v.im.value) != 0) {
        throw CrError(ErrorKind::NotReal, "v must be real in point '" + text + "'");
    }
    if constexpr (is_exact_v<S>) {
        for (const auto* c : {&z1, &z2, &v}) {
            if (c->re.decimal || c->im.decimal) {
                throw CrError(ErrorKind::ExactModeViolation,
                              "decimal coordinates are not allowed in exact mode: '" + text + "'; use fractions p/q");
            }
        }
        return {GaussianRational(z1.re.value, z1.im.value), GaussianRational(z2.re.value, z2.im.value),
                GaussianRational(v.re.value)};
    } else {
        auto cx = [](const ComplexLiteral& c) { return Complex(c.re.value.get_d(), c.im.value.get_d()); };
        return {cx(z1), cx(z2), cx(v)};
    }
}

template BasePoint<Complex> parse_point<Complex>(const std::string&);
template BasePoint<GaussianRational> parse_point<GaussianRational>(const std::string&);

} // namespace crparallax
