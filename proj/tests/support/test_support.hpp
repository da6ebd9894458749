#pragma once

#include "powser/navier_stokes.hpp"
#include "powser/series1.hpp"
#include "powser/seriesk.hpp"

#include <random>
#include <vector>

namespace powser::testsupport {

// Small random rationals keep exact runs fast while still exercising
// non-trivial gcd structure.
inline Scalar random_rational(std::mt19937& rng, Backend be, int num_range = 4,
                              int den_range = 4) {
    std::uniform_int_distribution<int> num(-num_range, num_range);
    std::uniform_int_distribution<int> den(1, den_range);
    return Scalar::ratio(num(rng), den(rng), be);
}

inline Series1 random_series(std::mt19937& rng, Backend be, int order) {
    std::vector<Scalar> c;
    c.reserve(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i <= order; ++i) c.push_back(random_rational(rng, be));
    return Series1(std::move(c));
}

template <int K>
SeriesK<K> random_seriesk(std::mt19937& rng, Backend be, const std::array<int, K>& caps) {
    SeriesK<K> s(be, caps);
    s.for_each_index([&](const std::array<int, K>& ix) { s.set(ix, random_rational(rng, be)); });
    return s;
}

inline Series1 to_float(const Series1& a) {
    std::vector<Scalar> c;
    c.reserve(static_cast<std::size_t>(a.order()) + 1);
    for (int i = 0; i <= a.order(); ++i) c.push_back(Scalar::real(a.at(i).approx()));
    return Series1(std::move(c));
}

template <int K>
SeriesK<K> to_float(const SeriesK<K>& a) {
    SeriesK<K> r(Backend::float64, a.caps(), a.axes());
    a.for_each_index(
        [&](const std::array<int, K>& ix) { r.set(ix, Scalar::real(a.at(ix).approx())); });
    return r;
}

// Schoolbook full-product oracle: expands to degree sum(orders), then the
// caller truncates. Deliberately a different code path from mul1.
inline std::vector<Scalar> naive_full_product(const std::vector<Scalar>& a,
                                              const std::vector<Scalar>& b) {
    const Backend be = a.front().backend();
    std::vector<Scalar> out(a.size() + b.size() - 1, Scalar::zero(be));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline std::vector<Scalar> naive_power(const std::vector<Scalar>& a, int n) {
    std::vector<Scalar> acc{Scalar::one(a.front().backend())};
    for (int k = 0; k < n; ++k) acc = naive_full_product(acc, a);
    return acc;
}

// Taylor-Green vortex: u = -cos(x) sin(y) e^{-2 nu t},
// v = sin(x) cos(y) e^{-2 nu t}, w = 0,
// P = -(rho/4)(cos(2x) + cos(2y)) e^{-4 nu t}. An exact closed-form
// incompressible solution; all Maclaurin coefficients are rational for
// rational nu and rho.
struct TaylorGreen {
    SeriesK<4> u, v, w, P;
};

inline TaylorGreen taylor_green(int spatial_order, int time_order, const Scalar& rho,
                                const Scalar& nu) {
    const Backend be = rho.backend();
    const auto caps = std::array<int, 4>{spatial_order, spatial_order, 2, time_order};
    SeriesK<4> u(be, caps), v(be, caps), w(be, caps), P(be, caps);

    const auto inv_factorial = [&](int n) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
        return Scalar::exact(mpq_class(1, f));
    };
    std::vector<Scalar> cosc, sinc, cos2c;
    for (int n = 0; n <= spatial_order; ++n) {
        const Scalar invf =
            be == Backend::exact ? inv_factorial(n) : Scalar::real(inv_factorial(n).approx());
        const int sgn = (n / 2) % 2 == 0 ? 1 : -1;
        cosc.push_back(n % 2 == 0 ? Scalar::from_int(sgn, be) * invf : Scalar::zero(be));
        sinc.push_back(n % 2 == 1 ? Scalar::from_int(sgn, be) * invf : Scalar::zero(be));
        Scalar two_n = Scalar::one(be);
        for (int q = 0; q < n; ++q) two_n *= Scalar::from_int(2, be);
        cos2c.push_back(n % 2 == 0 ? Scalar::from_int(sgn, be) * invf * two_n : Scalar::zero(be));
    }
    std::vector<Scalar> e2, e4;  // e^{-2 nu t}, e^{-4 nu t}
    {
        Scalar p2 = Scalar::one(be), p4 = Scalar::one(be);
        for (int l = 0; l <= time_order; ++l) {
            const Scalar invf =
                be == Backend::exact ? inv_factorial(l) : Scalar::real(inv_factorial(l).approx());
            e2.push_back(p2 * invf);
            e4.push_back(p4 * invf);
            p2 *= Scalar::from_int(-2, be) * nu;
            p4 *= Scalar::from_int(-4, be) * nu;
        }
    }
    const Scalar quarter_rho = rho / Scalar::from_int(4, be);
    for (int i = 0; i <= spatial_order; ++i)
        for (int j = 0; j <= spatial_order; ++j)
            for (int l = 0; l <= time_order; ++l) {
                u.set({i, j, 0, l}, -cosc[static_cast<std::size_t>(i)] *
                                        sinc[static_cast<std::size_t>(j)] *
                                        e2[static_cast<std::size_t>(l)]);
                v.set({i, j, 0, l}, sinc[static_cast<std::size_t>(i)] *
                                        cosc[static_cast<std::size_t>(j)] *
                                        e2[static_cast<std::size_t>(l)]);
                Scalar pc = Scalar::zero(be);
                if (j == 0) pc += cos2c[static_cast<std::size_t>(i)];
                if (i == 0) pc += cos2c[static_cast<std::size_t>(j)];
                P.set({i, j, 0, l}, -quarter_rho * pc * e4[static_cast<std::size_t>(l)]);
            }
    return {std::move(u), std::move(v), std::move(w), std::move(P)};
}

inline ns::FlowSeries taylor_green_flow(int spatial_order, int time_order, const Scalar& rho,
                                        const Scalar& nu) {
    auto tg = taylor_green(spatial_order, time_order, rho, nu);
    return ns::FlowSeries(std::move(tg.u), std::move(tg.v), std::move(tg.w), std::move(tg.P), rho,
                          nu);
}

}  // namespace powser::testsupport
