#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/test_support.hpp"

#include "powser/series1.hpp"
#include "powser/seriesk.hpp"

#include <random>

using namespace powser;
using namespace powser::testsupport;

namespace {

bool same_coeffs(const Series1& a, const Series1& b) {
    if (a.order() != b.order()) return false;
    for (int i = 0; i <= a.order(); ++i)
        if (a.at(i) != b.at(i)) return false;
    return true;
}

Series1 from_ints(Backend be, std::initializer_list<long> vals) {
    std::vector<Scalar> c;
    for (long v : vals) c.push_back(Scalar::from_int(v, be));
    return Series1(std::move(c));
}

}  // namespace

TEST_CASE("scalar arithmetic stays exact and canonical") {
    const Scalar a = Scalar::ratio(6, -8, Backend::exact);
    CHECK(a.str() == "-3/4");
    CHECK((Scalar::ratio(5, 48, Backend::exact) * Scalar::ratio(48, 5, Backend::exact)).str() ==
          "1");
    const Scalar b = Scalar::parse("5/48", Backend::exact);
    CHECK(b.rational().get_den() == 48);
    CHECK_THROWS_AS(Scalar::parse("0.5", Backend::exact), std::invalid_argument);
    CHECK(Scalar::parse("0.5", Backend::float64).value() == 0.5);
    CHECK(Scalar::parse("1/4", Backend::float64).value() == 0.25);
    CHECK_THROWS_AS(b / Scalar::zero(Backend::exact), std::domain_error);
}

TEST_CASE("mixing backends is an error, not a coercion") {
    const Scalar e = Scalar::one(Backend::exact);
    const Scalar f = Scalar::real(1.0);
    CHECK_THROWS_AS(e + f, BackendMismatch);
    CHECK_THROWS_AS((void)(e == f), BackendMismatch);
    CHECK_THROWS_AS(mul1(Series1::one(Backend::exact, 3), Series1::one(Backend::float64, 3)),
                    BackendMismatch);
}

TEST_CASE("mul1 basics") {
    const Backend be = Backend::exact;
    const auto one_plus_x = from_ints(be, {1, 1, 0});
    const auto sq = mul1(one_plus_x, one_plus_x);
    CHECK(sq.at(0).str() == "1");
    CHECK(sq.at(1).str() == "2");
    CHECK(sq.at(2).str() == "1");

    const auto a = from_ints(be, {3, -2, 5, 7});
    CHECK(same_coeffs(mul1(a, Series1::one(be, a.order())), a));
}

TEST_CASE("squaring then multiplying equals pow1 for y = 2 + x") {
    const Backend be = Backend::exact;
    auto y = Series1::zero(be, 9).coeffs();
    y[0] = Scalar::from_int(2, be);
    y[1] = Scalar::one(be);
    const Series1 s(y);
    const auto sq = mul1(s, s);
    CHECK(sq.at(0).str() == "4");
    CHECK(sq.at(1).str() == "4");
    CHECK(sq.at(2).str() == "1");
    CHECK(sq.at(3).is_zero());
    CHECK(same_coeffs(mul1(sq, s), pow1(s, 3)));
}

TEST_CASE("pow1 edge cases") {
    const Backend be = Backend::exact;
    const auto cube = pow1(from_ints(be, {1, 1}), 3);
    CHECK(cube.order() == 1);
    CHECK(cube.at(0).str() == "1");
    CHECK(cube.at(1).str() == "3");
    const auto full = pow1(from_ints(be, {1, 1, 0, 0}), 3);
    CHECK(full.at(2).str() == "3");
    CHECK(full.at(3).str() == "1");

    const auto a = from_ints(be, {5, 1, 2});
    const auto identity = pow1(a, 0);
    CHECK(identity.at(0).str() == "1");
    CHECK(identity.at(1).is_zero());

    // leading coefficient of a cube is a0^3
    std::mt19937 rng(7);
    const auto r = random_series(rng, be, 5);
    CHECK(pow1(r, 3).at(0) == r.at(0) * r.at(0) * r.at(0));
}

TEST_CASE("pow1 equals the schoolbook expansion oracle on orders <= 8") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int order = 1 + static_cast<int>(rng() % 8);
        const auto a = random_series(rng, Backend::exact, order);
        const auto cube = naive_power(a.coeffs(), 3);
        const auto got = pow1(a, 3);
        for (int i = 0; i <= order; ++i)
            CHECK(got.at(i) == cube[static_cast<std::size_t>(i)]);
        const auto prod = naive_full_product(a.coeffs(), a.coeffs());
        const auto got2 = mul1(a, a);
        for (int i = 0; i <= order; ++i)
            CHECK(got2.at(i) == prod[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("diff1 matches the reindexed factorial pattern") {
    const Backend be = Backend::exact;
    std::mt19937 rng(3);
    const auto a = random_series(rng, be, 8);
    const auto dd = diff1(a, 2);
    CHECK(dd.order() == 6);
    for (int s = 0; s <= 6; ++s)
        CHECK(dd.at(s) == Scalar::from_int(static_cast<long>(s + 2) * (s + 1), be) * a.at(s + 2));

    const auto c = Series1::constant(Scalar::from_int(5, be), 4);
    const auto dc = diff1(c, 1);
    CHECK(dc.order() == 3);
    for (int i = 0; i <= 3; ++i) CHECK(dc.at(i).is_zero());

    CHECK(same_coeffs(diff1(diff1(a, 1), 1), diff1(a, 2)));
    CHECK_THROWS_AS(diff1(from_ints(be, {1, 2}), 2), std::invalid_argument);
}

TEST_CASE("shift_monomial prepends zeros and raises the order") {
    const Backend be = Backend::exact;
    const auto a = from_ints(be, {3, 1});
    const auto s = shift_monomial(a, 4);
    CHECK(s.order() == 5);
    for (int i = 0; i < 4; ++i) CHECK(s.at(i).is_zero());
    CHECK(s.at(4).str() == "3");
    CHECK(s.at(5).str() == "1");
    CHECK(same_coeffs(shift_monomial(a, 0), a));

    // multiplying by the x^4 monomial series agrees after truncation
    auto x4 = Series1::zero(be, 6).coeffs();
    x4[4] = Scalar::one(be);
    const auto via_mul = mul1(Series1(x4), shift_monomial(Series1::one(be, 6), 0));
    const auto via_shift = shift_monomial(Series1::one(be, 2), 4);
    for (int i = 0; i <= 6; ++i) CHECK(via_mul.at(i) == via_shift.at(i));
}

TEST_CASE("reads past the declared order throw") {
    const auto a = from_ints(Backend::exact, {1, 2, 3});
    CHECK_THROWS_AS(a.at(3), std::out_of_range);
    CHECK_THROWS_AS(a.at(-1), std::out_of_range);
    SeriesK<2> s(Backend::exact, {2, 3});
    CHECK_THROWS_AS(s.at({3, 0}), std::out_of_range);
    CHECK_THROWS_AS(s.at({0, 4}), std::out_of_range);
}

TEST_CASE("declared orders follow the product/derivative/shift rules") {
    const Backend be = Backend::exact;
    std::mt19937 rng(5);
    const auto a = random_series(rng, be, 9);
    const auto b = random_series(rng, be, 6);
    CHECK(mul1(a, b).order() == 6);
    CHECK(diff1(a, 3).order() == 6);
    CHECK(shift_monomial(b, 2).order() == 8);
    CHECK(add1(a, b).order() == 6);

    SeriesK<3> s(be, {4, 5, 6}), t(be, {6, 5, 4});
    CHECK(mulk(s, t).caps() == std::array<int, 3>{4, 5, 4});
    CHECK(diffk(s, 1, 2).caps() == std::array<int, 3>{4, 3, 6});
    CHECK(shiftk(s, {1, 0, 2}).caps() == std::array<int, 3>{5, 5, 8});
}

TEST_CASE("mul1 and mulk are commutative and associative through shared orders") {
    std::mt19937 rng(17);
    const Backend be = Backend::exact;
    const auto a = random_series(rng, be, 7);
    const auto b = random_series(rng, be, 9);
    const auto c = random_series(rng, be, 8);
    CHECK(same_coeffs(mul1(a, b), mul1(b, a)));
    CHECK(same_coeffs(mul1(mul1(a, b), c), mul1(a, mul1(b, c))));

    const auto sa = random_seriesk<2>(rng, be, {3, 4});
    const auto sb = random_seriesk<2>(rng, be, {4, 3});
    const auto ab = mulk(sa, sb);
    const auto ba = mulk(sb, sa);
    ab.for_each_index([&](const std::array<int, 2>& ix) { CHECK(ab.at(ix) == ba.at(ix)); });
}

TEST_CASE("Leibniz rule holds through the shared valid order") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_series(rng, Backend::exact, 6 + static_cast<int>(rng() % 4));
        const auto b = random_series(rng, Backend::exact, 6 + static_cast<int>(rng() % 4));
        const auto lhs = diff1(mul1(a, b), 1);
        const auto rhs = add1(mul1(diff1(a, 1), b), mul1(a, diff1(b, 1)));
        CHECK(lhs.order() == rhs.order());
        CHECK(same_coeffs(lhs, rhs));
    }
}

TEST_CASE("2-index convolution agrees with Kronecker flattening") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_seriesk<2>(rng, Backend::exact, {3, 2});
        const auto b = random_seriesk<2>(rng, Backend::exact, {2, 3});
        const auto prod = mulk(a, b);
        // substitute y = x^base with base beyond any reachable x-degree
        const int base = 3 + 2 + 1;
        const auto flatten = [&](const SeriesK<2>& s) {
            std::vector<Scalar> c(
                static_cast<std::size_t>(s.caps()[0] + base * s.caps()[1]) + 1,
                Scalar::zero(Backend::exact));
            s.for_each_index([&](const std::array<int, 2>& ix) {
                c[static_cast<std::size_t>(ix[0] + base * ix[1])] += s.at(ix);
            });
            return c;
        };
        const auto full = naive_full_product(flatten(a), flatten(b));
        prod.for_each_index([&](const std::array<int, 2>& ix) {
            CHECK(prod.at(ix) == full[static_cast<std::size_t>(ix[0] + base * ix[1])]);
        });
    }
}

TEST_CASE("zero series convolve to zero") {
    const SeriesK<4> z(Backend::exact, {2, 2, 2, 2});
    const auto p = mulk(z, z);
    p.for_each_index([&](const std::array<int, 4>& ix) { CHECK(p.at(ix).is_zero()); });
}

TEST_CASE("float backend tracks the exact backend to 1e-12 relative") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int order = 4 + static_cast<int>(rng() % 9);  // up to 12
        const auto a = random_series(rng, Backend::exact, order);
        const auto b = random_series(rng, Backend::exact, order);
        const auto exact = mul1(pow1(a, 3), diff1(b, std::min(2, order)));
        const auto fl = mul1(pow1(to_float(a), 3), diff1(to_float(b), std::min(2, order)));
        for (int i = 0; i <= exact.order(); ++i) {
            const double e = exact.at(i).approx();
            if (std::abs(e) < 1e-6) continue;
            CHECK(std::abs(fl.at(i).value() - e) <= 1e-12 * std::abs(e));
        }
    }
}

TEST_CASE("multi-index derivative reindex and Horner evaluation") {
    const Backend be = Backend::exact;
    std::mt19937 rng(37);
    const auto s = random_seriesk<2>(rng, be, {4, 4});
    const auto dx = diffk(s, 0, 1);
    dx.for_each_index([&](const std::array<int, 2>& ix) {
        CHECK(dx.at(ix) == Scalar::from_int(ix[0] + 1, be) * s.at({ix[0] + 1, ix[1]}));
    });

    // evalk against direct monomial accumulation
    const std::array<double, 2> at{0.3, -0.7};
    double direct = 0.0;
    s.for_each_index([&](const std::array<int, 2>& ix) {
        direct += s.at(ix).approx() * std::pow(at[0], ix[0]) * std::pow(at[1], ix[1]);
    });
    CHECK(evalk(s, at) == doctest::Approx(direct).epsilon(1e-12));

    const auto x = Scalar::ratio(1, 3, be);
    const Series1 line = from_ints(be, {2, 6});
    CHECK(eval1(line, x).str() == "4");
}
