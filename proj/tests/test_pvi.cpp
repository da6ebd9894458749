#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/test_support.hpp"

#include "powser/pvi.hpp"

#include <random>

using namespace powser;
using namespace powser::testsupport;

namespace {

const Backend kExact = Backend::exact;

pvi::PviParams unit_params() {
    const Scalar one = Scalar::one(kExact);
    return pvi::make_params(one, one, one, one);
}

pvi::PviSeed table_seed() { return {Scalar::from_int(2, kExact), Scalar::one(kExact)}; }

// Random seed with a0 away from the singular set {0, 1, -1}.
pvi::PviSeed random_seed(std::mt19937& rng) {
    for (;;) {
        const Scalar a0 = random_rational(rng, kExact);
        if (a0.is_zero()) continue;
        if (a0 == Scalar::one(kExact) || a0 == Scalar::from_int(-1, kExact)) continue;
        return {a0, random_rational(rng, kExact)};
    }
}

}  // namespace

TEST_CASE("member table pins the constant rows to single indices") {
    const auto params = unit_params();
    std::vector<Scalar> a{Scalar::from_int(2, kExact), Scalar::one(kExact)};
    CHECK(pvi::member_value(62, 3, a, params).str() == "2");
    CHECK(pvi::member_value(62, 2, a, params).is_zero());
    CHECK(pvi::member_value(62, 4, a, params).is_zero());
    CHECK(pvi::member_value(65, 0, a, params).str() == "-2");
    CHECK(pvi::member_value(65, 1, a, params).is_zero());
    // doubled beta doubles the row
    const auto params2 = pvi::make_params(Scalar::one(kExact), Scalar::from_int(3, kExact),
                                          Scalar::one(kExact), Scalar::one(kExact));
    CHECK(pvi::member_value(62, 3, a, params2).str() == "6");
}

TEST_CASE("members below their validity bound vanish by the empty-sum convention") {
    const auto params = unit_params();
    std::vector<Scalar> a(12, Scalar::one(kExact));
    CHECK(pvi::member_value(1, 3, a, params).is_zero());
    CHECK_FALSE(pvi::member_value(1, 4, a, params).is_zero());
    CHECK(pvi::member_value(6, 4, a, params).is_zero());
    CHECK(pvi::member_value(48, 0, a, params).is_zero());
}

TEST_CASE("member_value demands a sufficient prefix") {
    const auto params = unit_params();
    std::vector<Scalar> a{Scalar::from_int(2, kExact), Scalar::one(kExact)};
    CHECK_THROWS_AS(pvi::member_value(5, 0, a, params), std::invalid_argument);  // needs a_2
    CHECK_NOTHROW(pvi::member_value_starred(5, 0, a, params));                   // empty tail
    CHECK(pvi::member_value_starred(5, 0, a, params).is_zero());
}

TEST_CASE("the starred split preserves the full member") {
    const auto params = unit_params();
    std::mt19937 rng(43);
    const auto series = random_series(rng, kExact, 9);
    const auto& a = series.coeffs();
    for (int i = 0; i <= 6; ++i) {
        for (int id : {5, 16}) {
            const Scalar full = pvi::member_value(id, i, a, params);
            const Scalar starred = pvi::member_value_starred(id, i, a, params);
            const long w = 8L * (i + 2) * (i + 1);
            const Scalar lead =
                id == 5 ? Scalar::from_int(w, kExact) * a[0] * a[0] * a[0] *
                              a[static_cast<std::size_t>(i + 2)]
                        : Scalar::from_int(-w, kExact) * a[0] * a[static_cast<std::size_t>(i + 2)];
            CHECK(full == starred + lead);
        }
    }
}

TEST_CASE("the first two produced coefficients match the published values") {
    const auto params = unit_params();
    std::vector<Scalar> a{Scalar::from_int(2, kExact), Scalar::one(kExact)};
    const Scalar a2 = pvi::next_coefficient(0, a, params);
    CHECK(a2.str() == "5/48");
    a.push_back(a2);
    CHECK(pvi::next_coefficient(1, a, params).str() == "311/864");
}

TEST_CASE("solve reproduces the confirmed coefficient table bit-exactly") {
    const auto series = pvi::solve(unit_params(), table_seed(), 9);
    const char* expected[] = {"2",
                              "1",
                              "5/48",
                              "311/864",
                              "18725/20736",
                              "48313/34560",
                              "17430769/8957952",
                              "3838061/1451520",
                              "65037559477/18059231232",
                              "95777442903929/19503969730560"};
    for (int i = 0; i <= 9; ++i) CHECK(series.at(i).str() == expected[i]);
}

TEST_CASE("singular seeds are rejected") {
    const auto params = unit_params();
    for (long bad : {0L, 1L, -1L}) {
        const pvi::PviSeed seed{Scalar::from_int(bad, kExact), Scalar::one(kExact)};
        CHECK_THROWS_AS(pvi::solve(params, seed, 5), pvi::SingularSeed);
    }
}

TEST_CASE("solve is a prefix-stable pure function") {
    const auto params = unit_params();
    const auto seed = table_seed();
    const auto s1 = pvi::solve(params, seed, 1);
    CHECK(s1.order() == 1);
    CHECK(s1.at(0).str() == "2");
    CHECK(s1.at(1).str() == "1");

    const auto long_run = pvi::solve(params, seed, 12);
    const auto short_run = pvi::solve(params, seed, 9);
    for (int i = 0; i <= 9; ++i) CHECK(long_run.at(i) == short_run.at(i));

    const auto again = pvi::solve(params, seed, 12);
    for (int i = 0; i <= 12; ++i) CHECK(long_run.at(i) == again.at(i));
}

TEST_CASE("randomized seeds keep the residual exactly zero") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 8; ++trial) {
        const pvi::PviParams params =
            pvi::make_params(random_rational(rng, kExact), random_rational(rng, kExact),
                             random_rational(rng, kExact), random_rational(rng, kExact));
        const auto seed = random_seed(rng);
        const auto rep = pvi::verify(pvi::solve(params, seed, 12), params);
        REQUIRE(rep.assertable());
        CHECK(rep.trusted[0] == 10);
        CHECK(rep.exact_zero);
    }
}

TEST_CASE("both coefficient routes agree on and off the solution manifold") {
    const auto params = unit_params();
    const auto res = pvi::members_vs_engine(15, params, table_seed());
    CHECK(res.ok);

    // i_max = 0 compares just the first identity
    CHECK(pvi::members_vs_engine(0, params, table_seed()).ok);

    // off the solution manifold both routes give the same nonzero stream
    std::mt19937 rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        const auto series = random_series(rng, kExact, 10);
        CHECK(pvi::members_vs_engine_on(series, params, 8).ok);
        CHECK_FALSE(pvi::member_signed_sum(0, series.coeffs(), params).is_zero());
    }
}

TEST_CASE("a flipped member sign is caught immediately") {
    const auto params = unit_params();
    std::mt19937 rng(59);
    const auto series = random_series(rng, kExact, 10);
    const auto& a = series.coeffs();
    const auto rep = pvi::verify(series, params);
    REQUIRE(rep.assertable());
    for (int i = 0; i <= 4; ++i) {
        // flipping member 14 doubles its contribution relative to the truth
        Scalar tampered = pvi::member_signed_sum(i, a, params) -
                          Scalar::from_int(2, kExact) * pvi::member_value(14, i, a, params);
        if (i >= 2)  // member 14 is active from i = 2 on
            CHECK(tampered != rep.residual->at({i}));
        else
            CHECK(tampered == rep.residual->at({i}));
    }
}

TEST_CASE("the integration oracle tracks the series") {
    const auto params = unit_params();
    const auto seed = table_seed();

    SUBCASE("x_max = 0 gives zero error") {
        const auto series = pvi::solve(params, seed, 8);
        const auto table = pvi::oracle_compare(series, params, 0.0, 1e-4);
        REQUIRE(table.rows.size() == 1);
        CHECK(table.rows[0].abs_diff == 0.0);
    }

    SUBCASE("error decreases as the order rises") {
        const auto t5 = pvi::oracle_compare(pvi::solve(params, seed, 5), params, 0.1, 1e-4);
        const auto t20 = pvi::oracle_compare(pvi::solve(params, seed, 20), params, 0.1, 1e-4);
        CHECK(t20.max_abs_diff() < t5.max_abs_diff());
        CHECK(t20.max_abs_diff() <= 1e-8);
    }

    SUBCASE("truncation dominates at low order: slope near order+1") {
        const auto series = pvi::solve(params, seed, 5);
        std::vector<double> samples;
        for (int d = 0; d <= 20; ++d) samples.push_back(1e-3 * std::pow(10.0, d / 10.0));
        const auto table = pvi::oracle_compare(series, params, 0.1, 1e-5, samples);
        const double slope = pvi::fitted_slope(table, 1e-3, 0.1);
        CHECK(slope >= 4.0);  // order - 1
    }
}
