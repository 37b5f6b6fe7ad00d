#include "crparallax/verify.hpp"

#include <stdexcept>

namespace crparallax {

std::string_view to_string(Suite s)
{
    switch (s) {
    case Suite::Brackets: return "brackets";
    case Suite::Jacobi: return "jacobi";
    case Suite::Invariants: return "invariants";
    case Suite::WProbe: return "wprobe";
    case Suite::ModelAlgebra: return "model-algebra";
    case Suite::All: return "all";
    }
    return "?";
}

Suite parse_suite(std::string_view name)
{
    for (Suite s : {Suite::Brackets, Suite::Jacobi, Suite::Invariants, Suite::WProbe, Suite::ModelAlgebra, Suite::All}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

std::string_view to_string(Form f)
{
    static constexpr std::string_view names[] = {"rho", "kappa", "zeta", "conj(kappa)", "conj(zeta)",
                                                 "pi1", "pi2", "conj(pi1)", "conj(pi2)", "Lambda"};
    return names[static_cast<int>(f)];
}

Form conjugate_form(Form f)
{
    switch (f) {
    case Form::rho: return Form::rho;
    case Form::kappa: return Form::kappa_bar;
    case Form::zeta: return Form::zeta_bar;
    case Form::kappa_bar: return Form::kappa;
    case Form::zeta_bar: return Form::zeta;
    case Form::pi1: return Form::pi1_bar;
    case Form::pi2: return Form::pi2_bar;
    case Form::pi1_bar: return Form::pi1;
    case Form::pi2_bar: return Form::pi2;
    case Form::Lambda: return Form::Lambda;
    }
    return f;
}

namespace {

int idx(Form f) { return static_cast<int>(f); }

// Position of {a < b < c} among the 120 increasing triples.
int triple_index(int a, int b, int c)
{
    static const auto table = [] {
        std::array<int, kForms * kForms * kForms> t{};
        t.fill(-1);
        int n = 0;
        for (int x = 0; x < kForms; ++x) {
            for (int y = x + 1; y < kForms; ++y) {
                for (int z = y + 1; z < kForms; ++z) {
                    t[(x * kForms + y) * kForms + z] = n++;
                }
            }
        }
        return t;
    }();
    return table[(a * kForms + b) * kForms + c];
}

// Adds coeff * ω^a ^ ω^b ^ ω^c to the 3-form, sorting the factors.
void add_wedge(std::array<GaussianRational, 120>& form, int a, int b, int c, const GaussianRational& coeff)
{
    if (a == b || b == c || a == c) {
        return;
    }
    int v[3] = {a, b, c};
    int sign = 1;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j + 1 < 3 - i; ++j) {
            if (v[j] > v[j + 1]) {
                std::swap(v[j], v[j + 1]);
                sign = -sign;
            }
        }
    }
    if (sign > 0) {
        form[triple_index(v[0], v[1], v[2])] += coeff;
    } else {
        form[triple_index(v[0], v[1], v[2])] -= coeff;
    }
}

} // namespace

ModelStructureConstants::ModelStructureConstants(std::vector<StructureTerm> terms) : terms_(std::move(terms))
{
    for (const auto& t : terms_) {
        const int k = idx(t.target), i = idx(t.lhs), j = idx(t.rhs);
        if (i == j) {
            throw std::invalid_argument("a form wedged with itself vanishes");
        }
        c_[k][i][j] += t.coeff;
        c_[k][j][i] -= t.coeff;
    }
}

ModelStructureConstants ModelStructureConstants::flat_model()
{
    using F = Form;
    const GaussianRational one(1);
    const GaussianRational i = GaussianRational::unit();
    return ModelStructureConstants({
        {F::rho, F::pi1, F::rho, one},
        {F::rho, F::pi1_bar, F::rho, one},
        {F::rho, F::kappa, F::kappa_bar, i},

        {F::kappa, F::pi1, F::kappa, one},
        {F::kappa, F::pi2, F::rho, one},
        {F::kappa, F::zeta, F::kappa_bar, one},

        {F::zeta, F::pi2, F::kappa, i},
        {F::zeta, F::pi1, F::zeta, one},
        {F::zeta, F::pi1_bar, F::zeta, -one},

        {F::kappa_bar, F::pi1_bar, F::kappa_bar, one},
        {F::kappa_bar, F::pi2_bar, F::rho, one},
        {F::kappa_bar, F::kappa, F::zeta_bar, -one},

        {F::zeta_bar, F::pi2_bar, F::kappa_bar, -i},
        {F::zeta_bar, F::pi1_bar, F::zeta_bar, one},
        {F::zeta_bar, F::pi1, F::zeta_bar, -one},

        {F::pi1, F::kappa, F::pi2_bar, i},
        {F::pi1, F::zeta, F::zeta_bar, one},
        {F::pi1, F::Lambda, F::rho, one},

        {F::pi2, F::pi2, F::pi1_bar, one},
        {F::pi2, F::zeta, F::pi2_bar, one},
        {F::pi2, F::Lambda, F::kappa, one},

        // conj(pi1) and conj(pi2) follow by conjugating the two lines above.
        {F::pi1_bar, F::kappa_bar, F::pi2, -i},
        {F::pi1_bar, F::zeta_bar, F::zeta, one},
        {F::pi1_bar, F::Lambda, F::rho, one},

        {F::pi2_bar, F::pi2_bar, F::pi1, one},
        {F::pi2_bar, F::zeta_bar, F::pi2, one},
        {F::pi2_bar, F::Lambda, F::kappa_bar, one},

        {F::Lambda, F::pi2, F::pi2_bar, i},
        {F::Lambda, F::Lambda, F::pi1, one},
        {F::Lambda, F::Lambda, F::pi1_bar, one},
    });
}

ModelStructureConstants ModelStructureConstants::without_term(std::size_t index) const
{
    auto terms = terms_;
    terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(index));
    return ModelStructureConstants(std::move(terms));
}

std::vector<std::array<GaussianRational, 120>> ModelStructureConstants::d_squared() const
{
    std::vector<std::array<GaussianRational, 120>> out(kForms);
    for (int k = 0; k < kForms; ++k) {
        auto& form = out[k];
        for (int i = 0; i < kForms; ++i) {
            for (int j = i + 1; j < kForms; ++j) {
                const GaussianRational& cij = c_[k][i][j];
                if (cij.is_zero()) {
                    continue;
                }
                // d(ω^i ^ ω^j) = dω^i ^ ω^j - ω^i ^ dω^j
                for (int p = 0; p < kForms; ++p) {
                    for (int q = p + 1; q < kForms; ++q) {
                        if (!c_[i][p][q].is_zero()) {
                            add_wedge(form, p, q, j, cij * c_[i][p][q]);
                        }
                        if (!c_[j][p][q].is_zero()) {
                            add_wedge(form, i, p, q, -(cij * c_[j][p][q]));
                        }
                    }
                }
            }
        }
    }
    return out;
}

IdentityResult check_model_algebra(const ModelStructureConstants& table)
{
    IdentityResult r;
    r.name = "d(d omega) = 0 for the ten-form model";
    r.exact = true;
    r.tolerance = 0.0;
    r.scale = 1.0;
    int nonzero = 0;
    std::string first;
    const auto dd = table.d_squared();
    for (int k = 0; k < kForms; ++k) {
        for (const auto& c : dd[k]) {
            if (!c.is_zero()) {
                ++nonzero;
                r.magnitude = std::max(r.magnitude, magnitude(c));
                if (first.empty()) {
                    first = "first failure in d(d " + std::string(to_string(static_cast<Form>(k))) + ")";
                }
            }
        }
    }
    r.residual = r.magnitude;
    r.passed = nonzero == 0;
    r.note = r.passed ? "exact cancellation" : std::to_string(nonzero) + " nonzero 3-form coefficients; " + first;
    return r;
}

IdentityResult check_conjugation_symmetry(const ModelStructureConstants& table)
{
    IdentityResult r;
    r.name = "conjugation symmetry of the model table";
    r.exact = true;
    r.scale = 1.0;
    int mismatches = 0;
    for (int k = 0; k < kForms; ++k) {
        for (int i = 0; i < kForms; ++i) {
            for (int j = 0; j < kForms; ++j) {
                const int ck = idx(conjugate_form(static_cast<Form>(k)));
                const int ci = idx(conjugate_form(static_cast<Form>(i)));
                const int cj = idx(conjugate_form(static_cast<Form>(j)));
                if (!(table.c(ck, ci, cj) == conjugate(table.c(k, i, j)))) {
                    ++mismatches;
                }
            }
        }
    }
    r.residual = mismatches;
    r.passed = mismatches == 0;
    r.note = std::to_string(mismatches) + " mismatched constants";
    return r;
}

IdentityResult check_term_necessity(const ModelStructureConstants& table)
{
    IdentityResult r;
    r.name = "every single-term removal breaks d(d omega) = 0";
    r.exact = true;
    r.scale = 1.0;
    std::string survivors;
    int count = 0;
    for (std::size_t t = 0; t < table.terms().size(); ++t) {
        if (check_model_algebra(table.without_term(t)).passed) {
            ++count;
            survivors += (survivors.empty() ? "" : ", ") + std::to_string(t);
        }
    }
    r.residual = count;
    r.passed = count == 0;
    r.note = r.passed ? std::to_string(table.terms().size()) + " removals, all detected"
                      : "removable terms: " + survivors;
    return r;
}

} // namespace crparallax
