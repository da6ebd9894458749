#include "powser/pvi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace powser::pvi {

PviParams make_params(const Scalar& alpha, const Scalar& beta, const Scalar& gamma,
                      const Scalar& delta) {
    const Backend be = alpha.backend();
    if (beta.backend() != be || gamma.backend() != be || delta.backend() != be)
        throw BackendMismatch{};
    return PviParams{alpha, beta, gamma, delta};
}

Scalar MemberSpec::coefficient(const PviParams& p) const {
    const Backend be = p.backend();
    Scalar v = Scalar::from_int(c0, be);
    if (ca) v += Scalar::from_int(ca, be) * p.alpha;
    if (cb) v += Scalar::from_int(cb, be) * p.beta;
    if (cg) v += Scalar::from_int(cg, be) * p.gamma;
    if (cd) v += Scalar::from_int(cd, be) * p.delta;
    return v;
}

const std::array<MemberSpec, 65>& member_table() {
    using S = SumShape;
    static const std::array<MemberSpec, 65> table = {{
        {1, S::cube_ypp, 4, false, 2, 0, 0, 0, 0},
        {2, S::cube_ypp, 3, false, -12, 0, 0, 0, 0},
        {3, S::cube_ypp, 2, false, 26, 0, 0, 0, 0},
        {4, S::cube_ypp, 1, false, -24, 0, 0, 0, 0},
        {5, S::cube_ypp, 0, false, 8, 0, 0, 0, 0},
        {6, S::square_ypp, 5, false, -2, 0, 0, 0, 0},
        {7, S::square_ypp, 4, false, 12, 0, 0, 0, 0},
        {8, S::square_ypp, 3, false, -26, 0, 0, 0, 0},
        {9, S::square_ypp, 2, false, 24, 0, 0, 0, 0},
        {10, S::square_ypp, 1, false, -8, 0, 0, 0, 0},
        {11, S::lin_ypp, 5, false, 2, 0, 0, 0, 0},
        {12, S::lin_ypp, 4, false, -14, 0, 0, 0, 0},
        {13, S::lin_ypp, 3, false, 38, 0, 0, 0, 0},
        {14, S::lin_ypp, 2, false, -50, 0, 0, 0, 0},
        {15, S::lin_ypp, 1, false, 32, 0, 0, 0, 0},
        {16, S::lin_ypp, 0, false, -8, 0, 0, 0, 0},
        {17, S::square_p2, 4, false, 3, 0, 0, 0, 0},
        {18, S::square_p2, 3, false, -18, 0, 0, 0, 0},
        {19, S::square_p2, 2, false, 39, 0, 0, 0, 0},
        {20, S::square_p2, 1, false, -36, 0, 0, 0, 0},
        {21, S::square_p2, 0, false, 12, 0, 0, 0, 0},
        {22, S::lin_p2, 5, false, -2, 0, 0, 0, 0},
        {23, S::lin_p2, 4, false, 12, 0, 0, 0, 0},
        {24, S::lin_p2, 3, false, -26, 0, 0, 0, 0},
        {25, S::lin_p2, 2, false, 24, 0, 0, 0, 0},
        {26, S::lin_p2, 1, false, -8, 0, 0, 0, 0},
        {27, S::p2, 5, false, 1, 0, 0, 0, 0},
        {28, S::p2, 4, false, -7, 0, 0, 0, 0},
        {29, S::p2, 3, false, 19, 0, 0, 0, 0},
        {30, S::p2, 2, false, -25, 0, 0, 0, 0},
        {31, S::p2, 1, false, 16, 0, 0, 0, 0},
        {32, S::p2, 0, false, -4, 0, 0, 0, 0},
        {33, S::cube_p, 3, false, -4, 0, 0, 0, 0},
        {34, S::cube_p, 2, false, 18, 0, 0, 0, 0},
        {35, S::cube_p, 1, false, -26, 0, 0, 0, 0},
        {36, S::cube_p, 0, false, 12, 0, 0, 0, 0},
        {37, S::square_p, 4, false, -2, 0, 0, 0, 0},
        {38, S::square_p, 3, false, 14, 0, 0, 0, 0},
        {39, S::square_p, 2, false, -36, 0, 0, 0, 0},
        {40, S::square_p, 1, false, 40, 0, 0, 0, 0},
        {41, S::square_p, 0, false, -16, 0, 0, 0, 0},
        {42, S::lin_p, 4, false, 2, 0, 0, 0, 0},
        {43, S::lin_p, 3, false, -10, 0, 0, 0, 0},
        {44, S::lin_p, 2, false, 18, 0, 0, 0, 0},
        {45, S::lin_p, 1, false, -14, 0, 0, 0, 0},
        {46, S::lin_p, 0, false, 4, 0, 0, 0, 0},
        {47, S::sextic, 0, false, 0, 2, 0, 0, 0},
        {48, S::quintic, 1, false, 0, -4, 0, 0, 0},
        {49, S::quartic, 2, false, 0, 2, 0, 0, 2},
        {50, S::quartic, 1, false, 0, 4, 2, 2, -6},
        {51, S::quartic, 0, false, 0, -4, -2, -4, 4},
        {52, S::cubic, 2, false, 0, -4, -4, -4, -4},
        {53, S::cubic, 1, false, 0, 4, 4, 12, 12},
        {54, S::cubic, 0, false, 0, 0, 0, -8, -8},
        {55, S::square, 3, false, 0, 0, 2, 2, 0},
        {56, S::square, 2, false, 0, 2, 2, -8, 2},
        {57, S::square, 1, false, 0, -4, -8, 10, -6},
        {58, S::square, 0, false, 0, 2, 4, -4, 4},
        {59, S::linear, 3, false, 0, 0, -4, 0, 0},
        {60, S::linear, 2, false, 0, 0, 8, 0, 0},
        {61, S::linear, 1, false, 0, 0, -4, 0, 0},
        {62, S::unit, 3, true, 0, 0, 2, 0, 0},
        {63, S::unit, 2, true, 0, 0, -6, 0, 0},
        {64, S::unit, 1, true, 0, 0, 6, 0, 0},
        {65, S::unit, 0, true, 0, 0, -2, 0, 0},
    }};
    return table;
}

namespace {

// Highest coefficient index a shape touches at reduced index n.
int max_needed(SumShape s, int n) {
    switch (s) {
        case SumShape::cube_ypp:
        case SumShape::square_ypp:
        case SumShape::lin_ypp:
            return n + 2;
        case SumShape::square_p2:
        case SumShape::lin_p2:
        case SumShape::p2:
        case SumShape::cube_p:
        case SumShape::square_p:
        case SumShape::lin_p:
            return n + 1;
        default:
            return n;
    }
}

Scalar shape_sum(SumShape s, int n, int j_start, const std::vector<Scalar>& a, Backend be) {
    const auto in = [be](long v) { return Scalar::from_int(v, be); };
    Scalar acc = Scalar::zero(be);
    switch (s) {
        case SumShape::cube_ypp:
            for (int j = j_start; j <= n; ++j) {
                Scalar w = in(static_cast<long>(n - j + 2) * (n - j + 1)) * a[n - j + 2];
                Scalar conv = Scalar::zero(be);
                for (int k = 0; k <= j; ++k)
                    for (int r = 0; r <= k; ++r) conv += a[r] * a[k - r] * a[j - k];
                acc += w * conv;
            }
            break;
        case SumShape::square_ypp:
            for (int j = j_start; j <= n; ++j) {
                Scalar w = in(static_cast<long>(n - j + 2) * (n - j + 1)) * a[n - j + 2];
                Scalar conv = Scalar::zero(be);
                for (int k = 0; k <= j; ++k) conv += a[k] * a[j - k];
                acc += w * conv;
            }
            break;
        case SumShape::lin_ypp:
            for (int j = j_start; j <= n; ++j)
                acc += in(static_cast<long>(n - j + 2) * (n - j + 1)) * a[j] * a[n - j + 2];
            break;
        case SumShape::square_p2:
            for (int j = 0; j <= n; ++j) {
                Scalar conv = Scalar::zero(be);
                for (int k = 0; k <= j; ++k) conv += a[k] * a[j - k];
                Scalar inner = Scalar::zero(be);
                for (int r = 0; r <= n - j; ++r)
                    inner += in(static_cast<long>(r + 1) * (n - j - r + 1)) * a[r + 1] *
                             a[n - j - r + 1];
                acc += conv * inner;
            }
            break;
        case SumShape::lin_p2:
            for (int j = 0; j <= n; ++j) {
                Scalar inner = Scalar::zero(be);
                for (int k = 0; k <= j; ++k)
                    inner += in(static_cast<long>(k + 1) * (j - k + 1)) * a[k + 1] * a[j - k + 1];
                acc += inner * a[n - j];
            }
            break;
        case SumShape::p2:
            for (int j = 0; j <= n; ++j)
                acc += in(static_cast<long>(j + 1) * (n - j + 1)) * a[j + 1] * a[n - j + 1];
            break;
        case SumShape::cube_p:
            for (int j = 0; j <= n; ++j) {
                Scalar conv = Scalar::zero(be);
                for (int k = 0; k <= j; ++k)
                    for (int r = 0; r <= k; ++r) conv += a[r] * a[k - r] * a[j - k];
                acc += in(n - j + 1) * a[n - j + 1] * conv;
            }
            break;
        case SumShape::square_p:
            for (int j = 0; j <= n; ++j) {
                Scalar conv = Scalar::zero(be);
                for (int k = 0; k <= j; ++k) conv += a[k] * a[j - k];
                acc += in(n - j + 1) * a[n - j + 1] * conv;
            }
            break;
        case SumShape::lin_p:
            for (int j = 0; j <= n; ++j) acc += in(n - j + 1) * a[j] * a[n - j + 1];
            break;
        case SumShape::sextic:
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= j; ++k)
                    for (int r = 0; r <= k; ++r)
                        for (int ss = 0; ss <= r; ++ss)
                            for (int t = 0; t <= ss; ++t)
                                acc += a[t] * a[ss - t] * a[r - ss] * a[k - r] * a[j - k] *
                                       a[n - j];
            break;
        case SumShape::quintic:
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= j; ++k)
                    for (int r = 0; r <= k; ++r)
                        for (int ss = 0; ss <= r; ++ss)
                            acc += a[ss] * a[r - ss] * a[k - r] * a[j - k] * a[n - j];
            break;
        case SumShape::quartic:
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= j; ++k)
                    for (int r = 0; r <= k; ++r) acc += a[r] * a[k - r] * a[j - k] * a[n - j];
            break;
        case SumShape::cubic:
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= j; ++k) acc += a[k] * a[j - k] * a[n - j];
            break;
        case SumShape::square:
            for (int j = 0; j <= n; ++j) acc += a[j] * a[n - j];
            break;
        case SumShape::linear:
            acc = a[n];
            break;
        case SumShape::unit:
            acc = Scalar::one(be);
            break;
    }
    return acc;
}

Scalar member_value_impl(int id, int i, const std::vector<Scalar>& coeffs,
                         const PviParams& params, bool starred) {
    if (id < 1 || id > 65) throw std::invalid_argument("member id outside 1..65");
    const MemberSpec& spec = member_table()[static_cast<std::size_t>(id - 1)];
    const Backend be = params.backend();
    if (i < 0) throw std::invalid_argument("negative coefficient index");
    if (spec.pinned ? (i != spec.shift) : (i < spec.shift)) return Scalar::zero(be);
    const int n = i - spec.shift;
    const int j_start_needed = starred && (id == 5 || id == 16) ? 1 : 0;
    int needed = max_needed(spec.shape, n);
    if (j_start_needed == 1) needed = n >= 1 ? n + 1 : -1;  // a_{n+2} split off
    if (needed >= static_cast<int>(coeffs.size()))
        throw std::invalid_argument("insufficient coefficient prefix: member " +
                                    std::to_string(id) + " at i=" + std::to_string(i) +
                                    " needs a_" + std::to_string(needed));
    for (const auto& c : coeffs)
        if (c.backend() != be) throw BackendMismatch{};
    return spec.coefficient(params) * shape_sum(spec.shape, n, j_start_needed, coeffs, be);
}

}  // namespace

Scalar member_value(int id, int i, const std::vector<Scalar>& coeffs, const PviParams& params) {
    return member_value_impl(id, i, coeffs, params, false);
}

Scalar member_value_starred(int id, int i, const std::vector<Scalar>& coeffs,
                            const PviParams& params) {
    return member_value_impl(id, i, coeffs, params, true);
}

Scalar member_signed_sum(int i, const std::vector<Scalar>& coeffs, const PviParams& params) {
    Scalar acc = Scalar::zero(params.backend());
    for (int id = 1; id <= 16; ++id) acc += member_value(id, i, coeffs, params);
    for (int id = 17; id <= 65; ++id) acc -= member_value(id, i, coeffs, params);
    return acc;
}

Scalar next_coefficient(int i, const std::vector<Scalar>& coeffs, const PviParams& params) {
    const Backend be = params.backend();
    if (coeffs.size() < static_cast<std::size_t>(i) + 2)
        throw std::invalid_argument("need a_0..a_{i+1} to produce a_{i+2}");
    const Scalar& a0 = coeffs[0];
    const Scalar denom_core = a0 * (a0 * a0 - Scalar::one(be));
    if (a0.is_zero() || denom_core.is_zero())
        throw SingularSeed("a0 must avoid 0, 1 and -1 (the recurrence divides by 8*a0*(a0^2-1))");

    Scalar num = Scalar::zero(be);
    for (int id = 1; id <= 16; ++id) num -= member_value_starred(id, i, coeffs, params);
    for (int id = 17; id <= 65; ++id) num += member_value(id, i, coeffs, params);
    const Scalar den =
        Scalar::from_int(8L * (i + 2) * (i + 1), be) * denom_core;
    return num / den;
}

Series1 solve(const PviParams& params, const PviSeed& seed, int order) {
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    if (seed.a0.backend() != params.backend() || seed.a1.backend() != params.backend())
        throw BackendMismatch{};
    std::vector<Scalar> a;
    a.reserve(static_cast<std::size_t>(order) + 1);
    a.push_back(seed.a0);
    a.push_back(seed.a1);
    for (int i = 0; i + 2 <= order; ++i) a.push_back(next_coefficient(i, a, params));
    return Series1(std::move(a));
}

ResidualReport<1> verify(const Series1& series, const PviParams& params) {
    const auto expr = equations::pvi_shifted(params.alpha, params.beta, params.gamma, params.delta);
    std::map<std::string, SeriesK<1>> bindings;
    bindings.emplace("y", lift(series));
    return evaluate(expr, bindings);
}

double OracleTable::max_abs_diff() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.abs_diff);
    return m;
}

namespace {

// Splits the shifted equation into D(x,y)*y'' + N(x,y,p) and evaluates
// y'' = -N/D pointwise.
struct RhsSplit {
    PolyDiffExpression<1> expr;

    static double poly_at(const std::map<std::array<int, 1>, Scalar>& poly, double x) {
        double v = 0.0;
        for (const auto& [deg, c] : poly) v += c.approx() * std::pow(x, deg[0]);
        return v;
    }

    double second_derivative(double x, double y, double p) const {
        double den = 0.0, num = 0.0;
        for (const auto& term : expr.terms) {
            double val = poly_at(term.poly, x);
            bool has_ypp = false;
            for (const auto& f : term.factors) {
                if (f.deriv[0] == 2) { has_ypp = true; continue; }
                const double base = f.deriv[0] == 0 ? y : p;
                for (int q = 0; q < f.power; ++q) val *= base;
            }
            (has_ypp ? den : num) += val;
        }
        if (std::abs(den) < 1e-300) {
            std::ostringstream msg;
            msg << "second-derivative multiplier vanished at x=" << x << ", y=" << y;
            throw std::domain_error(msg.str());
        }
        return -num / den;
    }
};

}  // namespace

OracleTable oracle_compare(const Series1& series, const PviParams& params, double x_max,
                           double step, std::vector<double> sample_at) {
    if (x_max < 0 || step <= 0) throw std::invalid_argument("x_max must be >= 0 and step > 0");
    const RhsSplit rhs{equations::pvi_shifted(
        Scalar::real(params.alpha.approx()), Scalar::real(params.beta.approx()),
        Scalar::real(params.gamma.approx()), Scalar::real(params.delta.approx()))};

    if (sample_at.empty()) {
        for (int g = 1; g <= 64; ++g) sample_at.push_back(x_max * g / 64.0);
    }
    std::sort(sample_at.begin(), sample_at.end());

    OracleTable table;
    double y = series.at(0).approx();
    double p = series.order() >= 1 ? series.at(1).approx() : 0.0;
    double x = 0.0;
    std::size_t next_sample = 0;
    const auto record = [&](double xv, double yv) {
        const double sv = eval1(series, xv);
        table.rows.push_back({xv, sv, yv, std::abs(sv - yv)});
    };
    if (x_max == 0.0) {
        record(0.0, y);
        return table;
    }
    const long nsteps = static_cast<long>(std::ceil(x_max / step - 1e-12));
    for (long s = 0; s < nsteps; ++s) {
        const double h = std::min(step, x_max - x);
        // classical RK4 on (y, p)
        const double k1y = p, k1p = rhs.second_derivative(x, y, p);
        const double k2y = p + 0.5 * h * k1p,
                     k2p = rhs.second_derivative(x + 0.5 * h, y + 0.5 * h * k1y, p + 0.5 * h * k1p);
        const double k3y = p + 0.5 * h * k2p,
                     k3p = rhs.second_derivative(x + 0.5 * h, y + 0.5 * h * k2y, p + 0.5 * h * k2p);
        const double k4y = p + h * k3p,
                     k4p = rhs.second_derivative(x + h, y + h * k3y, p + h * k3p);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        x += h;
        while (next_sample < sample_at.size() && sample_at[next_sample] <= x + 1e-15) {
            record(x, y);
            ++next_sample;
        }
    }
    if (table.rows.empty() || table.rows.back().x < x) record(x, y);
    return table;
}

double fitted_slope(const OracleTable& table, double x_lo, double x_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : table.rows) {
        if (r.x < x_lo || r.x > x_hi || r.x <= 0) continue;
        // Differences below one ulp of the compared values are not
        // resolvable; flooring there keeps the fit honest instead of
        // letting coincidentally identical doubles fake a steep slope.
        const double resolution =
            2.3e-16 * std::max({std::abs(r.series_value), std::abs(r.rk_value), 1.0e-30});
        const double lx = std::log(r.x);
        const double ly = std::log(std::max(r.abs_diff, resolution));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("need at least two samples in [x_lo, x_hi]");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CrosscheckResult members_vs_engine_on(const Series1& series, const PviParams& params, int i_max) {
    CrosscheckResult res;
    const auto report = verify(series, params);
    if (!report.assertable() || report.trusted[0] < i_max) {
        res.detail = "series order too low: engine trusts through " +
                     std::to_string(report.assertable() ? report.trusted[0] : -1) +
                     ", need " + std::to_string(i_max);
        return res;
    }
    for (int i = 0; i <= i_max; ++i) {
        const Scalar lhs = report.residual->at({i});
        const Scalar rhs = member_signed_sum(i, series.coeffs(), params);
        if (lhs != rhs) {
            res.first_bad_index = i;
            std::ostringstream msg;
            msg << "coefficient-of-x^" << i << " mismatch: engine " << lhs.str() << ", members "
                << rhs.str() << "; active members:";
            for (const auto& spec : member_table())
                if (spec.pinned ? (i == spec.shift) : (i >= spec.shift)) msg << ' ' << spec.id;
            res.detail = msg.str();
            return res;
        }
    }
    res.ok = true;
    return res;
}

CrosscheckResult members_vs_engine(int i_max, const PviParams& params, const PviSeed& seed) {
    if (i_max < 0) throw std::invalid_argument("i_max must be >= 0");
    const Series1 series = solve(params, seed, i_max + 2);
    return members_vs_engine_on(series, params, i_max);
}

}  // namespace powser::pvi
