#include "crparallax/report.hpp"

namespace crparallax {

using nlohmann::json;

json scalar_json(const Complex& z)
{
    // Adding 0.0 folds -0.0 into 0.0 so equal values print identically.
    return {{"re", z.real() + 0.0}, {"im", z.imag() + 0.0}};
}

json scalar_json(const GaussianRational& z)
{
    return {{"re", z.real().get_str()}, {"im", z.imag().get_str()}};
}

json admissibility_json(const AdmissibilityFlags& flags)
{
    json j{{"admissible", flags.admissible()},
           {"rank", flags.levi_rank},
           {"two_nondeg", flags.two_nondegenerate},
           {"pivot", flags.pivot_ok},
           {"realness", flags.realness_ok},
           {"residuals", flags.residuals}};
    if (flags.failure) {
        j["failure"] = to_string(*flags.failure);
        j["reason"] = flags.reason;
    }
    return j;
}

json identity_json(const IdentityResult& r)
{
    json j{{"name", r.name},
           {"residual", r.residual},
           {"scale", r.scale},
           {"magnitude", r.magnitude},
           {"passed", r.passed},
           {"tolerance", r.tolerance},
           {"informational", r.informational},
           {"exact", r.exact}};
    if (!r.note.empty()) {
        j["note"] = r.note;
    }
    return j;
}

json params_json(const NormalizedGroupParams& p)
{
    json j{{"branch", to_string(p.branch)},
           {"c", scalar_json(p.c)},
           {"e", scalar_json(p.e)},
           {"f", scalar_json(p.f)},
           {"b", scalar_json(p.b)},
           {"d", scalar_json(p.d)},
           {"root_branch", p.root_branch}};
    if (p.branch == Branch::W) {
        j["epsilon_bar"] = scalar_json(p.epsilon_bar);
    }
    if (p.consistency_residual) {
        j["consistency_residual"] = *p.consistency_residual;
    }
    if (p.epsilon_bar_careful) {
        j["epsilon_bar_careful"] = scalar_json(*p.epsilon_bar_careful);
    }
    return j;
}

} // namespace crparallax
