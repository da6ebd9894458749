#pragma once

#include "powser/seriesk.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace powser {

/// One additive term of a polynomial-differential expression: a polynomial
/// in the independent variables times a product of powers of partial
/// derivatives of named unknowns.
template <int K>
struct Term {
    struct Factor {
        std::string unknown;
        std::array<int, K> deriv{};  // derivative order per axis
        int power = 1;
    };
    std::map<std::array<int, K>, Scalar> poly;  // multidegree -> coefficient
    std::vector<Factor> factors;
};

template <int K>
struct PolyDiffExpression {
    std::vector<Term<K>> terms;
};

/// Residual of an expression on concrete series, plus the per-axis order
/// through which its coefficients are exact given the inputs' caps.
/// `residual` is absent when some binding is too short to assert anything
/// (e.g. a derivative exceeding the input order); `trusted` is all -1 then
/// and `exact_zero` holds vacuously.
template <int K>
struct ResidualReport {
    std::optional<SeriesK<K>> residual;
    std::array<int, K> trusted{};
    Scalar max_abs = Scalar::zero(Backend::exact);
    double tolerance = 0.0;  // float64 verdict threshold; 0 for exact
    bool exact_zero = false;

    bool assertable() const {
        for (int ax = 0; ax < K; ++ax)
            if (trusted[ax] < 0) return false;
        return true;
    }
};

namespace detail {

// Float64 verdict: |coefficient| within 1e-10 * (1 + largest input
// coefficient magnitude), conservative against rounding accumulated in
// long convolutions.
inline double float_tolerance(double max_input_mag) {
    return 1e-10 * (1.0 + max_input_mag);
}

template <int K>
void finish_report(ResidualReport<K>& rep, double max_input_mag) {
    const auto& res = *rep.residual;
    rep.trusted = res.caps();
    const Backend be = res.backend();
    if (be == Backend::float64) rep.tolerance = float_tolerance(max_input_mag);
    Scalar biggest = Scalar::zero(be);
    bool zero = true;
    res.for_each_index([&](const std::array<int, K>& ix) {
        Scalar mag = res.at(ix).abs();
        if (be == Backend::exact) {
            if (!mag.is_zero()) zero = false;
        } else if (mag.value() > rep.tolerance) {
            zero = false;
        }
        if (biggest < mag) biggest = mag;
    });
    rep.max_abs = std::move(biggest);
    rep.exact_zero = zero;
}

}  // namespace detail

template <int K>
ResidualReport<K> evaluate(const PolyDiffExpression<K>& expr,
                           const std::map<std::string, SeriesK<K>>& bindings) {
    if (bindings.empty()) throw std::invalid_argument("no series bound");
    const Backend be = bindings.begin()->second.backend();
    double max_input_mag = 0.0;
    std::array<int, K> big{};
    for (const auto& [name, s] : bindings) {
        if (s.backend() != be) throw BackendMismatch{};
        for (int ax = 0; ax < K; ++ax) big[ax] = std::max(big[ax], s.caps()[ax]);
        s.for_each_index([&](const std::array<int, K>& ix) {
            max_input_mag = std::max(max_input_mag, std::abs(s.at(ix).approx()));
        });
    }
    int max_poly_deg = 0;
    for (const auto& term : expr.terms)
        for (const auto& [deg, c] : term.poly) {
            (void)c;
            for (int ax = 0; ax < K; ++ax) max_poly_deg = std::max(max_poly_deg, deg[ax]);
        }
    // Factor-free terms are plain polynomials, exact at every order; give
    // them caps beyond anything the real terms can reach so they never
    // shrink the min-composed trust.
    for (int ax = 0; ax < K; ++ax) big[ax] += max_poly_deg + 2;

    ResidualReport<K> rep;
    rep.max_abs = Scalar::zero(be);
    std::optional<SeriesK<K>> total;
    const auto axes = bindings.begin()->second.axes();

    for (const auto& term : expr.terms) {
        if (term.poly.empty()) continue;
        std::optional<SeriesK<K>> prod;
        bool short_input = false;
        for (const auto& f : term.factors) {
            const auto it = bindings.find(f.unknown);
            if (it == bindings.end())
                throw std::invalid_argument("unbound unknown '" + f.unknown + "'");
            for (int ax = 0; ax < K; ++ax)
                if (it->second.caps()[ax] < f.deriv[ax]) short_input = true;
            if (short_input) break;
            SeriesK<K> ds = diffk(it->second, f.deriv);
            SeriesK<K> fp = ds;
            for (int p = 1; p < f.power; ++p) fp = mulk(fp, ds);
            prod = prod ? mulk(*prod, fp) : std::move(fp);
        }
        if (short_input) {
            // Nothing is assertable: the trustworthy region is empty.
            rep.residual.reset();
            for (int ax = 0; ax < K; ++ax) rep.trusted[ax] = -1;
            rep.exact_zero = true;
            if (be == Backend::float64)
                rep.tolerance = detail::float_tolerance(max_input_mag);
            return rep;
        }
        if (!prod) {
            auto one = SeriesK<K>(be, big, axes);
            one.set(std::array<int, K>{}, Scalar::one(be));
            prod = std::move(one);
        }
        std::optional<SeriesK<K>> term_series;
        for (const auto& [deg, coeff] : term.poly) {
            SeriesK<K> piece = scalek(shiftk(*prod, deg), coeff);
            term_series = term_series ? addk(*term_series, piece) : std::move(piece);
        }
        total = total ? addk(*total, *term_series) : std::move(*term_series);
    }

    if (!total) total = SeriesK<K>(be, big, axes);  // empty expression: identically zero
    rep.residual = std::move(*total);
    detail::finish_report(rep, max_input_mag);
    return rep;
}

/// Substitutes the truncated series into the expression and evaluates at a
/// point: the plain function-space residual of the truncation, with no
/// trust bookkeeping. This is the "does the residual shrink as the order
/// rises" measurement.
template <int K>
double pointwise_residual(const PolyDiffExpression<K>& expr,
                          const std::map<std::string, SeriesK<K>>& bindings,
                          const typename SeriesK<K>::DoublePoint& at) {
    double total = 0.0;
    for (const auto& term : expr.terms) {
        double fac = 1.0;
        for (const auto& f : term.factors) {
            const auto it = bindings.find(f.unknown);
            if (it == bindings.end())
                throw std::invalid_argument("unbound unknown '" + f.unknown + "'");
            const double v = evalk(diffk(it->second, f.deriv), at);
            for (int p = 0; p < f.power; ++p) fac *= v;
        }
        double poly = 0.0;
        for (const auto& [deg, coeff] : term.poly) {
            double mono = coeff.approx();
            for (int ax = 0; ax < K; ++ax)
                for (int d = 0; d < deg[ax]; ++d) mono *= at[ax];
            poly += mono;
        }
        total += poly * fac;
    }
    return total;
}

}  // namespace powser
