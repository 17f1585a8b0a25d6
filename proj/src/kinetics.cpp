#include "sharpwave/kinetics.hpp"

#include <cmath>
#include <limits>

#include "sharpwave/errors.hpp"
#include "sharpwave/numerics.hpp"

namespace sharpwave {

std::string family_name(kinetics_family f) {
    switch (f) {
        case kinetics_family::fisher: return "fisher";
        case kinetics_family::nicholson_linear_death: return "nicholson_linear_death";
        case kinetics_family::nicholson_quadratic_death: return "nicholson_quadratic_death";
        case kinetics_family::mackey_glass: return "mackey_glass";
        case kinetics_family::custom_polynomial: return "custom_polynomial";
    }
    return "unknown";
}

kinetics_family family_from_name(const std::string& name) {
    if (name == "fisher") return kinetics_family::fisher;
    if (name == "nicholson_linear_death") return kinetics_family::nicholson_linear_death;
    if (name == "nicholson_quadratic_death") return kinetics_family::nicholson_quadratic_death;
    if (name == "mackey_glass") return kinetics_family::mackey_glass;
    if (name == "custom_polynomial") return kinetics_family::custom_polynomial;
    throw invalid_params("unknown kinetics family: " + name);
}

namespace {

double get_param(const std::map<std::string, double>& p, const std::string& k, double dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
}

double poly_eval(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
    return v;
}

double poly_deriv(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) v = v * u + c[i] * static_cast<double>(i);
    return v;
}

}  // namespace

double kinetics_spec::b(double u) const {
    const double p = get_param(params, "p", 1.0);
    switch (family) {
        case kinetics_family::fisher: return p * u;
        case kinetics_family::nicholson_linear_death:
        case kinetics_family::nicholson_quadratic_death:
            return p * u * std::exp(-get_param(params, "a", 1.0) * std::pow(u, get_param(params, "q", 1.0)));
        case kinetics_family::mackey_glass:
            return p * u / (1.0 + get_param(params, "a", 1.0) * std::pow(u, get_param(params, "q", 1.0)));
        case kinetics_family::custom_polynomial: return poly_eval(b_coef, u);
    }
    return 0.0;
}

double kinetics_spec::d(double u) const {
    switch (family) {
        case kinetics_family::fisher: {
            const double p = get_param(params, "p", 1.0);
            return p * u * u / get_param(params, "capacity", 1.0);
        }
        case kinetics_family::nicholson_linear_death:
            return get_param(params, "delta", 1.0) * u;
        case kinetics_family::nicholson_quadratic_death:
            return get_param(params, "delta", 1.0) * u * u;
        case kinetics_family::mackey_glass: return get_param(params, "delta", 1.0) * u;
        case kinetics_family::custom_polynomial: return poly_eval(d_coef, u);
    }
    return 0.0;
}

double kinetics_spec::db(double u) const {
    const double p = get_param(params, "p", 1.0);
    switch (family) {
        case kinetics_family::fisher: return p;
        case kinetics_family::nicholson_linear_death:
        case kinetics_family::nicholson_quadratic_death: {
            const double a = get_param(params, "a", 1.0), q = get_param(params, "q", 1.0);
            const double uq = std::pow(u, q);
            return p * std::exp(-a * uq) * (1.0 - a * q * uq);
        }
        case kinetics_family::mackey_glass: {
            const double a = get_param(params, "a", 1.0), q = get_param(params, "q", 1.0);
            const double uq = std::pow(u, q);
            const double den = 1.0 + a * uq;
            return p * (1.0 + a * (1.0 - q) * uq) / (den * den);
        }
        case kinetics_family::custom_polynomial: return poly_deriv(b_coef, u);
    }
    return 0.0;
}

double kinetics_spec::dd(double u) const {
    switch (family) {
        case kinetics_family::fisher: {
            const double p = get_param(params, "p", 1.0);
            return 2.0 * p * u / get_param(params, "capacity", 1.0);
        }
        case kinetics_family::nicholson_linear_death:
            return get_param(params, "delta", 1.0);
        case kinetics_family::nicholson_quadratic_death:
            return 2.0 * get_param(params, "delta", 1.0) * u;
        case kinetics_family::mackey_glass: return get_param(params, "delta", 1.0);
        case kinetics_family::custom_polynomial: return poly_deriv(d_coef, u);
    }
    return 0.0;
}

namespace {

// Bracketed root of b - d: shrink u_lo until inside the growth region, grow
// u_hi until past the equilibrium, then bisect to machine precision.
double solve_equilibrium(const kinetics_spec& spec) {
    auto F = [&](double u) { return spec.b(u) - spec.d(u); };
    double u_lo = 1.0;
    int tries = 0;
    while (F(u_lo) <= 0.0) {
        u_lo *= 0.5;
        if (++tries > 60) throw no_positive_equilibrium("b - d has no positive region near 0");
    }
    double u_hi = std::max(1.0, 2.0 * u_lo);
    tries = 0;
    while (F(u_hi) > 0.0) {
        u_hi *= 2.0;
        if (++tries > 60) throw no_positive_equilibrium("b - d never changes sign (no K found)");
    }
    if (F(u_hi) == 0.0) return u_hi;
    return bisect_root(F, u_lo, u_hi, 1e-16, 300);
}

void validate_positive(const std::map<std::string, double>& params) {
    for (const auto& [k, v] : params)
        if (!(v > 0.0)) throw invalid_params("kinetics parameter '" + k + "' must be > 0");
}

}  // namespace

kinetics_spec make_kinetics(kinetics_family family, const std::map<std::string, double>& params) {
    if (family == kinetics_family::custom_polynomial)
        throw invalid_params("custom_polynomial requires coefficient lists, use make_custom_kinetics");
    validate_positive(params);
    kinetics_spec spec;
    spec.family = family;
    spec.params = params;
    // materialize defaults so downstream reporting shows every value used
    auto need = [&](const char* k, double dflt) {
        if (!spec.params.count(k)) spec.params[k] = dflt;
    };
    need("p", 1.0);
    switch (family) {
        case kinetics_family::fisher: need("capacity", 1.0); break;
        case kinetics_family::nicholson_linear_death:
        case kinetics_family::nicholson_quadratic_death:
        case kinetics_family::mackey_glass:
            need("a", 1.0);
            need("q", 1.0);
            need("delta", 1.0);
            break;
        default: break;
    }
    spec.K = solve_equilibrium(spec);
    return spec;
}

kinetics_spec make_custom_kinetics(std::vector<double> b_coef, std::vector<double> d_coef) {
    if (b_coef.empty() || d_coef.empty())
        throw invalid_params("custom_polynomial: empty coefficient list");
    if (b_coef[0] != 0.0 || d_coef[0] != 0.0)
        throw invalid_params("custom_polynomial: b(0) and d(0) must be 0 (zero constant term)");
    kinetics_spec spec;
    spec.family = kinetics_family::custom_polynomial;
    spec.b_coef = std::move(b_coef);
    spec.d_coef = std::move(d_coef);
    spec.K = solve_equilibrium(spec);
    return spec;
}

hypothesis_report verify_hypotheses(const kinetics_spec& spec, int n_samples) {
    if (n_samples < 16) throw invalid_params("verify_hypotheses: n_samples must be >= 16");
    hypothesis_report rep;
    rep.n_samples = n_samples;
    rep.b_zero_at_zero = spec.b(0.0) == 0.0;
    rep.d_zero_at_zero = spec.d(0.0) == 0.0;
    rep.growth_dominates_at_zero = spec.db(0.0) > spec.dd(0.0) && spec.dd(0.0) >= 0.0;
    rep.decay_dominates_at_K = spec.dd(spec.K) >= spec.db(spec.K) && spec.db(spec.K) >= 0.0;

    double worst = 0.0;
    bool b_mono = true, d_mono = true, above = true;
    for (int i = 0; i <= n_samples; ++i) {
        const double s = spec.K * i / n_samples;
        const double dbv = spec.db(s), ddv = spec.dd(s);
        if (dbv < 0.0) {
            b_mono = false;
            worst = std::max(worst, -dbv);
        }
        if (ddv < 0.0) {
            d_mono = false;
            worst = std::max(worst, -ddv);
        }
        if (i > 0 && i < n_samples) {
            const double gap = spec.b(s) - spec.d(s);
            if (gap <= 0.0) {
                above = false;
                worst = std::max(worst, -gap);
            }
        }
    }
    rep.b_nondecreasing = b_mono;
    rep.d_nondecreasing = d_mono;
    rep.b_above_d = above;
    rep.worst_violation = worst;
    return rep;
}

double lambda_root(const kinetics_spec& spec, double c, double r) {
    if (!(c > 0.0)) throw invalid_params("lambda_root: c must be > 0");
    if (r < 0.0) throw invalid_params("lambda_root: r must be >= 0");
    const double bp = spec.db(0.0), dp = spec.dd(0.0);
    if (bp <= dp) throw no_root("lambda_root: requires b'(0) > d'(0)");
    if (r == 0.0) return (bp - dp) / c;
    // f(0) = d'(0) - b'(0) < 0 and f(b'(0)/c) >= b'(0)(1 - e^{-..}) >= 0
    auto f = [&](double lam) { return lam * c + dp - bp * std::exp(-lam * c * r); };
    return bisect_root(f, 0.0, bp / c, 1e-17, 300);
}

}  // namespace sharpwave
