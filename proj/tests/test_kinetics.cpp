#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sharpwave/errors.hpp"
#include "sharpwave/kinetics.hpp"

using namespace sharpwave;

TEST_CASE("fisher equilibrium is the capacity") {
    const auto kin = make_kinetics(kinetics_family::fisher, {{"p", 1.0}, {"capacity", 1.0}});
    CHECK(kin.K == doctest::Approx(1.0).epsilon(1e-13));
    const auto kin2 = make_kinetics(kinetics_family::fisher, {{"p", 0.7}, {"capacity", 2.0}});
    CHECK(kin2.K == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("nicholson with linear death: K = ln 2 at p = 2") {
    const auto kin = make_kinetics(kinetics_family::nicholson_linear_death,
                                   {{"p", 2.0}, {"a", 1.0}, {"q", 1.0}, {"delta", 1.0}});
    CHECK(kin.K == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(kin.b(kin.K) == doctest::Approx(kin.d(kin.K)).epsilon(1e-12));
}

TEST_CASE("nicholson with quadratic death: K solves u e^u = p/(a delta)") {
    // p=2, a=1, q=1, delta=1: 2 u e^{-u} = u^2 so u e^u = 2, the Lambert point
    const auto kin = make_kinetics(kinetics_family::nicholson_quadratic_death,
                                   {{"p", 2.0}, {"a", 1.0}, {"q", 1.0}, {"delta", 1.0}});
    CHECK(kin.K == doctest::Approx(0.8526055020137254).epsilon(1e-12));
}

TEST_CASE("mackey_glass equilibrium") {
    // 2u/(1+u^2) = u  =>  u = 1
    const auto kin = make_kinetics(kinetics_family::mackey_glass,
                                   {{"p", 2.0}, {"a", 1.0}, {"q", 2.0}, {"delta", 1.0}});
    CHECK(kin.K == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("custom polynomial kinetics evaluate and find K") {
    const auto kin = make_custom_kinetics({0.0, 1.0}, {0.0, 0.0, 1.0});
    CHECK(kin.K == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(kin.b(0.5) == doctest::Approx(0.5));
    CHECK(kin.d(0.5) == doctest::Approx(0.25));
    CHECK(kin.db(0.3) == doctest::Approx(1.0));
    CHECK(kin.dd(0.3) == doctest::Approx(0.6));
}

TEST_CASE("evaluator values and derivatives at the ends") {
    const auto fisher = make_kinetics(kinetics_family::fisher, {{"p", 1.0}, {"capacity", 1.0}});
    CHECK(fisher.b(0.0) == 0.0);
    CHECK(fisher.d(0.0) == 0.0);
    CHECK(fisher.db(0.0) == doctest::Approx(1.0));
    CHECK(fisher.dd(0.0) == doctest::Approx(0.0));
    const auto nich = make_kinetics(kinetics_family::nicholson_linear_death,
                                    {{"p", 2.0}, {"a", 1.0}, {"q", 1.0}, {"delta", 1.0}});
    CHECK(nich.db(0.0) == doctest::Approx(2.0));
    CHECK(nich.dd(0.0) == doctest::Approx(1.0));
    // b' at u: 2 e^{-u} (1 - u)
    CHECK(nich.db(0.5) == doctest::Approx(2.0 * std::exp(-0.5) * 0.5).epsilon(1e-12));
}

TEST_CASE("family name round-trip and rejection") {
    for (auto fam : {kinetics_family::fisher, kinetics_family::nicholson_linear_death,
                     kinetics_family::nicholson_quadratic_death, kinetics_family::mackey_glass,
                     kinetics_family::custom_polynomial})
        CHECK(family_from_name(family_name(fam)) == fam);
    CHECK_THROWS_AS(family_from_name("logistic"), invalid_params);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(make_kinetics(kinetics_family::fisher, {{"p", -1.0}}), invalid_params);
    CHECK_THROWS_AS(make_kinetics(kinetics_family::fisher, {{"capacity", 0.0}}), invalid_params);
    CHECK_THROWS_AS(make_custom_kinetics({1.0, 1.0}, {0.0, 1.0}), invalid_params);
    CHECK_THROWS_AS(make_custom_kinetics({}, {0.0, 1.0}), invalid_params);
    // b - d = 0.5 u never crosses zero again: no positive equilibrium
    CHECK_THROWS_AS(make_custom_kinetics({0.0, 1.0}, {0.0, 0.5}), no_positive_equilibrium);
}

TEST_CASE("hypotheses hold for the stock monostable families") {
    for (const auto& kin :
         {make_kinetics(kinetics_family::fisher, {{"p", 1.0}, {"capacity", 1.0}}),
          make_kinetics(kinetics_family::nicholson_linear_death,
                        {{"p", 2.0}, {"a", 1.0}, {"q", 1.0}, {"delta", 1.0}}),
          make_kinetics(kinetics_family::mackey_glass,
                        {{"p", 2.0}, {"a", 1.0}, {"q", 2.0}, {"delta", 1.0}})}) {
        const auto rep = verify_hypotheses(kin, 2001);
        CHECK(rep.pass());
        CHECK(rep.n_samples == 2001);
        CHECK(rep.worst_violation <= 0.0);
    }
}

TEST_CASE("hypotheses fail clause-by-clause when birth is not monotone") {
    // mackey_glass q=2 with K above the hump of b: b' changes sign inside (0, K)
    const auto kin = make_kinetics(kinetics_family::mackey_glass,
                                   {{"p", 4.0}, {"a", 1.0}, {"q", 2.0}, {"delta", 1.0}});
    CHECK(kin.K == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    const auto rep = verify_hypotheses(kin, 2001);
    CHECK_FALSE(rep.b_nondecreasing);
    CHECK(rep.b_zero_at_zero);
    CHECK(rep.d_zero_at_zero);
    CHECK(rep.b_above_d);
    CHECK_FALSE(rep.pass());
    CHECK(rep.worst_violation > 0.0);
}

TEST_CASE("lambda_root: closed form at r = 0") {
    const auto fisher = make_kinetics(kinetics_family::fisher, {{"p", 1.0}, {"capacity", 1.0}});
    // exact, no bisection: lambda = (b'(0) - d'(0))/c
    CHECK(lambda_root(fisher, 2.0, 0.0) == 0.5);
    CHECK(lambda_root(fisher, 0.25, 0.0) == 4.0);
}

TEST_CASE("lambda_root: Lambert value at c = r = 1") {
    // b'(0) = 1, d'(0) = 0: lambda = e^{-lambda}, the omega constant
    const auto fisher = make_kinetics(kinetics_family::fisher, {{"p", 1.0}, {"capacity", 1.0}});
    CHECK(lambda_root(fisher, 1.0, 1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-14));
}

TEST_CASE("lambda_root residual stays below 1e-12 over a (c, r) grid") {
    const auto nich = make_kinetics(kinetics_family::nicholson_linear_death,
                                    {{"p", 2.0}, {"a", 1.0}, {"q", 1.0}, {"delta", 1.0}});
    const double bp = nich.db(0.0), dp = nich.dd(0.0);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double c = 0.3 + 0.3 * i;
            const double r = 0.2 * j;
            const double lam = lambda_root(nich, c, r);
            CHECK(lam > 0.0);
            const double res = std::fabs(lam * c + dp - bp * std::exp(-lam * c * r));
            CHECK(res < 1e-12);
        }
}
