#pragma once

#include <map>
#include <string>
#include <vector>

namespace sharpwave {

enum class kinetics_family {
    fisher,                    // b = p u,               d = p u^2 / capacity
    nicholson_linear_death,    // b = p u exp(-a u^q),   d = delta u
    nicholson_quadratic_death, // b = p u exp(-a u^q),   d = delta u^2
    mackey_glass,              // b = p u / (1 + a u^q), d = delta u
    custom_polynomial,         // b, d from coefficient lists (constant term zero)
};

std::string family_name(kinetics_family f);
kinetics_family family_from_name(const std::string& name);

// Monostable kinetics on [0, K]: b(0)=d(0)=0, b>d on (0,K), b(K)=d(K).
// Evaluators are exact analytic formulas; K comes from bracketed
// root-finding at construction.
struct kinetics_spec {
    kinetics_family family = kinetics_family::fisher;
    std::map<std::string, double> params;
    std::vector<double> b_coef, d_coef;  // custom_polynomial only, ascending powers
    double K = 0.0;

    double b(double u) const;
    double d(double u) const;
    double db(double u) const;
    double dd(double u) const;
};

kinetics_spec make_kinetics(kinetics_family family, const std::map<std::string, double>& params);
kinetics_spec make_custom_kinetics(std::vector<double> b_coef, std::vector<double> d_coef);

// Clause-by-clause check of the monostability hypotheses on a sample grid.
struct hypothesis_report {
    bool b_zero_at_zero = false;
    bool d_zero_at_zero = false;
    bool growth_dominates_at_zero = false;  // b'(0) > d'(0) >= 0
    bool decay_dominates_at_K = false;      // d'(K) >= b'(K) >= 0
    bool b_nondecreasing = false;           // b' >= 0 on [0, K]
    bool d_nondecreasing = false;           // d' >= 0 on [0, K]
    bool b_above_d = false;                 // b > d on (0, K)
    int n_samples = 0;
    double worst_violation = 0.0;

    bool pass() const {
        return b_zero_at_zero && d_zero_at_zero && growth_dominates_at_zero &&
               decay_dominates_at_K && b_nondecreasing && d_nondecreasing && b_above_d;
    }
};

hypothesis_report verify_hypotheses(const kinetics_spec& spec, int n_samples);

// Unique positive root of lambda*c + d'(0) = b'(0) exp(-lambda*c*r).
// r = 0 reduces to the closed form (b'(0) - d'(0)) / c.
double lambda_root(const kinetics_spec& spec, double c, double r);

}  // namespace sharpwave
