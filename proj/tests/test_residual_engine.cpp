#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/test_support.hpp"

#include "powser/equations.hpp"
#include "powser/expression.hpp"
#include "powser/pvi.hpp"

#include <random>

using namespace powser;
using namespace powser::testsupport;

namespace {

pvi::PviParams unit_params(Backend be) {
    const Scalar one = Scalar::one(be);
    return pvi::make_params(one, one, one, one);
}

std::map<std::string, SeriesK<1>> bind_y(const Series1& s) {
    std::map<std::string, SeriesK<1>> b;
    b.emplace("y", lift(s));
    return b;
}

}  // namespace

TEST_CASE("second derivative of x^2 is the constant 2") {
    const Backend be = Backend::exact;
    PolyDiffExpression<1> expr;
    Term<1> t;
    t.poly.emplace(std::array<int, 1>{0}, Scalar::one(be));
    t.factors.push_back({"y", {2}, 1});
    expr.terms.push_back(t);

    std::vector<Scalar> c{Scalar::zero(be), Scalar::zero(be), Scalar::one(be)};
    const auto rep = evaluate(expr, bind_y(Series1(c)));
    REQUIRE(rep.assertable());
    CHECK(rep.trusted[0] == 0);
    CHECK(rep.residual->at({0}).str() == "2");
    CHECK_FALSE(rep.exact_zero);
}

TEST_CASE("unbound unknowns are rejected") {
    PolyDiffExpression<1> expr;
    Term<1> t;
    t.poly.emplace(std::array<int, 1>{0}, Scalar::one(Backend::exact));
    t.factors.push_back({"z", {0}, 1});
    expr.terms.push_back(t);
    CHECK_THROWS_AS(evaluate(expr, bind_y(Series1::one(Backend::exact, 3))),
                    std::invalid_argument);
}

TEST_CASE("the shifted equation transcription has the documented shape") {
    const Backend be = Backend::exact;
    const auto params = unit_params(be);
    const auto expr =
        equations::pvi_shifted(params.alpha, params.beta, params.gamma, params.delta);
    CHECK(expr.terms.size() == 16);

    // the y^2 y'' term carries degree-5 coefficients -2,12,-26,24,-8 on x^5..x^1
    bool found = false;
    for (const auto& term : expr.terms) {
        if (term.factors.size() != 2) continue;
        if (term.factors[0].power == 2 && term.factors[0].deriv[0] == 0 &&
            term.factors[1].deriv[0] == 2) {
            found = true;
            CHECK(term.poly.at({5}).str() == "-2");
            CHECK(term.poly.at({4}).str() == "12");
            CHECK(term.poly.at({3}).str() == "-26");
            CHECK(term.poly.at({2}).str() == "24");
            CHECK(term.poly.at({1}).str() == "-8");
            CHECK(term.poly.count({0}) == 0);
        }
    }
    CHECK(found);

    // zero parameters eliminate every parameter term
    const Scalar z = Scalar::zero(be);
    CHECK(equations::pvi_shifted(z, z, z, z).terms.size() == 9);
}

TEST_CASE("constructed solutions have exactly zero residual through the trusted order") {
    const Backend be = Backend::exact;
    const auto params = unit_params(be);
    const pvi::PviSeed seed{Scalar::from_int(2, be), Scalar::one(be)};
    const auto series = pvi::solve(params, seed, 12);
    const auto rep = pvi::verify(series, params);
    REQUIRE(rep.assertable());
    CHECK(rep.trusted[0] == 10);
    CHECK(rep.exact_zero);
    CHECK(rep.max_abs.is_zero());
}

TEST_CASE("a tampered coefficient is detected from index 0 on") {
    const Backend be = Backend::exact;
    const auto params = unit_params(be);
    const pvi::PviSeed seed{Scalar::from_int(2, be), Scalar::one(be)};
    auto coeffs = pvi::solve(params, seed, 12).coeffs();
    coeffs[2] += Scalar::one(be);
    const auto rep = pvi::verify(Series1(coeffs), params);
    REQUIRE(rep.assertable());
    CHECK_FALSE(rep.exact_zero);
    CHECK_FALSE(rep.residual->at({0}).is_zero());
}

TEST_CASE("a seed-only series asserts nothing") {
    const Backend be = Backend::exact;
    const auto params = unit_params(be);
    std::vector<Scalar> c{Scalar::from_int(2, be), Scalar::one(be)};
    const auto rep = pvi::verify(Series1(c), params);
    CHECK_FALSE(rep.assertable());
    CHECK(rep.trusted[0] == -1);
    CHECK_FALSE(rep.residual.has_value());
}

TEST_CASE("evaluate is additive over terms") {
    const Backend be = Backend::exact;
    const auto params = unit_params(be);
    const auto expr =
        equations::pvi_shifted(params.alpha, params.beta, params.gamma, params.delta);
    std::mt19937 rng(41);
    const auto y = random_series(rng, be, 9);

    PolyDiffExpression<1> first, second;
    first.terms.assign(expr.terms.begin(), expr.terms.begin() + 8);
    second.terms.assign(expr.terms.begin() + 8, expr.terms.end());
    const auto whole = evaluate(expr, bind_y(y));
    const auto part1 = evaluate(first, bind_y(y));
    const auto part2 = evaluate(second, bind_y(y));
    REQUIRE(whole.assertable());
    const int shared = std::min({whole.trusted[0], part1.trusted[0], part2.trusted[0]});
    for (int i = 0; i <= shared; ++i)
        CHECK(whole.residual->at({i}) == part1.residual->at({i}) + part2.residual->at({i}));
}

TEST_CASE("trusted order grows with the input order") {
    const Backend be = Backend::exact;
    const auto params = unit_params(be);
    const pvi::PviSeed seed{Scalar::from_int(2, be), Scalar::one(be)};
    int prev = -2;
    for (int order : {4, 8, 12, 16}) {
        const auto rep = pvi::verify(pvi::solve(params, seed, order), params);
        REQUIRE(rep.assertable());
        CHECK(rep.trusted[0] > prev);
        prev = rep.trusted[0];
    }
}

TEST_CASE("zero velocity and constant pressure satisfy the flow equations") {
    const Backend be = Backend::exact;
    const Scalar rho = Scalar::one(be);
    const Scalar nu = Scalar::ratio(1, 10, be);
    const std::array<int, 4> caps{4, 4, 4, 3};
    SeriesK<4> zero(be, caps), P(be, caps);
    P.set({0, 0, 0, 0}, Scalar::from_int(7, be));

    std::map<std::string, SeriesK<4>> bindings;
    bindings.emplace("u", zero);
    bindings.emplace("v", zero);
    bindings.emplace("w", zero);
    bindings.emplace("P", P);
    for (int axis = 0; axis < 3; ++axis) {
        const auto rep = evaluate(equations::ns_momentum(axis, rho, nu), bindings);
        REQUIRE(rep.assertable());
        CHECK(rep.exact_zero);
    }
    const auto cont = evaluate(equations::ns_continuity(be), bindings);
    CHECK(cont.exact_zero);

    SUBCASE("uniform stream stays exact as well") {
        auto u = zero;
        u.set({0, 0, 0, 0}, Scalar::from_int(3, be));
        bindings.erase("u");
        bindings.emplace("u", std::move(u));
        for (int axis = 0; axis < 3; ++axis)
            CHECK(evaluate(equations::ns_momentum(axis, rho, nu), bindings).exact_zero);
        CHECK(evaluate(equations::ns_continuity(be), bindings).exact_zero);
    }
}

TEST_CASE("the vortex solution passes the generic expressions") {
    const Scalar rho = Scalar::one(Backend::exact);
    const Scalar nu = Scalar::ratio(1, 10, Backend::exact);

    SUBCASE("exact backend, moderate order") {
        auto tg = taylor_green(8, 2, rho, nu);
        std::map<std::string, SeriesK<4>> bindings;
        bindings.emplace("u", std::move(tg.u));
        bindings.emplace("v", std::move(tg.v));
        bindings.emplace("w", std::move(tg.w));
        bindings.emplace("P", std::move(tg.P));
        for (int axis = 0; axis < 3; ++axis) {
            const auto rep = evaluate(equations::ns_momentum(axis, rho, nu), bindings);
            REQUIRE(rep.assertable());
            CHECK(rep.exact_zero);
        }
        CHECK(evaluate(equations::ns_continuity(Backend::exact), bindings).exact_zero);
    }

    SUBCASE("float backend, order 10") {
        auto tg = taylor_green(10, 3, rho, nu);
        std::map<std::string, SeriesK<4>> bindings;
        bindings.emplace("u", to_float(tg.u));
        bindings.emplace("v", to_float(tg.v));
        bindings.emplace("w", to_float(tg.w));
        bindings.emplace("P", to_float(tg.P));
        const Scalar frho = Scalar::real(1.0), fnu = Scalar::real(0.1);
        for (int axis = 0; axis < 3; ++axis) {
            const auto rep = evaluate(equations::ns_momentum(axis, frho, fnu), bindings);
            REQUIRE(rep.assertable());
            CHECK(rep.exact_zero);  // within the float tolerance
        }
        CHECK(evaluate(equations::ns_continuity(Backend::float64), bindings).exact_zero);
    }
}

TEST_CASE("pointwise residual measures the truncation directly") {
    const Backend be = Backend::exact;
    const auto params = unit_params(be);
    const pvi::PviSeed seed{Scalar::from_int(2, be), Scalar::one(be)};
    const auto expr =
        equations::pvi_shifted(params.alpha, params.beta, params.gamma, params.delta);
    const double at5 = std::abs(pointwise_residual(expr, bind_y(pvi::solve(params, seed, 5)),
                                                   std::array<double, 1>{0.05}));
    const double at12 = std::abs(pointwise_residual(expr, bind_y(pvi::solve(params, seed, 12)),
                                                    std::array<double, 1>{0.05}));
    CHECK(at12 < at5);
    CHECK(at12 < 1e-8);
}
