#include "powser/prandtl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace powser::prandtl {

namespace {

void require_positive(const Scalar& v, const char* what) {
    if (v.sign() <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

SeriesK<2> a2_from_external(const ExternalFlow& ext, const Scalar& nu) {
    if (nu.backend() != ext.U.backend()) throw BackendMismatch{};
    if (nu.is_zero()) throw std::invalid_argument("nu must be nonzero");
    const Backend be = nu.backend();
    const auto ucaps = ext.U.caps();
    if (ucaps[0] < 1 || ucaps[1] < 1)
        throw std::invalid_argument("external stream caps too small (need raised x and t reads)");
    SeriesK<2> a2(be, {ucaps[0] - 1, ucaps[1] - 1});
    const Scalar inv = Scalar::one(be) / (Scalar::from_int(2, be) * nu);
    a2.for_each_index([&](const std::array<int, 2>& ik) {
        const int i = ik[0], k = ik[1];
        Scalar s = Scalar::from_int(k + 1, be) * ext.U.at({i, k + 1});
        for (int p = 0; p <= i; ++p)
            for (int q = 0; q <= k; ++q)
                s += Scalar::from_int(i - p + 1, be) * ext.U.at({p, q}) *
                     ext.U.at({i - p + 1, k - q});
        a2.set(ik, -s * inv);
    });
    return a2;
}

SeriesK<2> a3_from_wall(const WallSlope& wall, const Scalar& nu) {
    if (nu.backend() != wall.A1.backend()) throw BackendMismatch{};
    if (nu.is_zero()) throw std::invalid_argument("nu must be nonzero");
    const Backend be = nu.backend();
    const auto caps = wall.A1.caps();
    if (caps[1] < 1)
        throw std::invalid_argument("wall slope caps too small (need the raised t read)");
    SeriesK<2> a3(be, {caps[0], caps[1] - 1});
    const Scalar inv = Scalar::one(be) / (Scalar::from_int(6, be) * nu);
    a3.for_each_index([&](const std::array<int, 2>& ik) {
        a3.set(ik, Scalar::from_int(ik[1] + 1, be) * wall.A1.at({ik[0], ik[1] + 1}) * inv);
    });
    return a3;
}

Scalar a_general(int i, int j, int k, const LevelTable& built, const Scalar& nu) {
    if (j < 4) throw std::invalid_argument("general recurrence applies for j >= 4");
    if (nu.is_zero()) throw std::invalid_argument("nu must be nonzero");
    const Backend be = nu.backend();
    const auto level = [&](int q) -> const SeriesK<2>& {
        if (q < 1 || q >= static_cast<int>(built.size()))
            throw std::out_of_range("missing prerequisite level " + std::to_string(q));
        return built[static_cast<std::size_t>(q)];
    };
    Scalar s = Scalar::from_int(k + 1, be) * level(j - 2).at({i, k + 1});
    for (int p = 0; p <= i; ++p)
        for (int q = 1; q <= j - 3; ++q)
            for (int r = 0; r <= k; ++r)
                s += Scalar::from_int(i - p + 1, be) * level(q).at({p, r}) *
                     level(j - 2 - q).at({i - p + 1, k - r});
    for (int p = 0; p <= i; ++p)
        for (int q = 2; q <= j - 2; ++q)
            for (int r = 0; r <= k; ++r)
                s -= Scalar::ratio(static_cast<long>(p + 1) * (j - 1 - q), q, be) *
                     level(q - 1).at({p + 1, r}) * level(j - 1 - q).at({i - p, k - r});
    return s / (nu * Scalar::from_int(static_cast<long>(j - 1) * j, be));
}

SeriesK<3> b_from_a(const SeriesK<3>& A) {
    const Backend be = A.backend();
    const auto caps = A.caps();
    if (caps[0] < 1) throw std::invalid_argument("A table needs x-cap >= 1 (raised x read)");
    SeriesK<3> B(be, {caps[0] - 1, caps[1], caps[2]}, A.axes());
    B.for_each_index([&](const std::array<int, 3>& ix) {
        const int i = ix[0], j = ix[1], k = ix[2];
        if (j < 2) return;  // no-slip and continuity wall rows are zero
        B.set(ix, -Scalar::ratio(i + 1, j, be) * A.at({i + 1, j - 1, k}));
    });
    return B;
}

Caps3 required_wall_caps(const Caps3& requested) {
    const int J = requested.y;
    return {requested.x + 1 + (J >= 1 ? (J - 1) / 3 : 0), 0,
            requested.t + (J >= 1 ? (J - 1) / 2 : 0)};
}

Caps3 required_external_caps(const Caps3& requested) {
    const Caps3 w = required_wall_caps(requested);
    return {w.x + 1, 0, w.t + 1};
}

BoundaryLayerSeries construct(const ExternalFlow& ext, const WallSlope& wall, const Scalar& nu,
                              const Scalar& rho, const Caps3& requested) {
    const Backend be = nu.backend();
    if (ext.U.backend() != be || wall.A1.backend() != be || rho.backend() != be)
        throw BackendMismatch{};
    require_positive(nu, "nu");
    require_positive(rho, "rho");
    const int I = requested.x, J = requested.y, K = requested.t;
    if (I < 0 || J < 1 || K < 0)
        throw std::invalid_argument("requested caps must have x,t >= 0 and y >= 1");

    const Caps3 need_w = required_wall_caps(requested);
    const Caps3 need_u = required_external_caps(requested);
    if (wall.A1.caps()[0] < need_w.x || wall.A1.caps()[1] < need_w.t)
        throw std::invalid_argument(
            "wall slope caps insufficient: need (" + std::to_string(need_w.x) + "," +
            std::to_string(need_w.t) + "), got (" + std::to_string(wall.A1.caps()[0]) + "," +
            std::to_string(wall.A1.caps()[1]) + ")");
    if (ext.U.caps()[0] < need_u.x || ext.U.caps()[1] < need_u.t)
        throw std::invalid_argument(
            "external stream caps insufficient: need (" + std::to_string(need_u.x) + "," +
            std::to_string(need_u.t) + "), got (" + std::to_string(ext.U.caps()[0]) + "," +
            std::to_string(ext.U.caps()[1]) + ")");

    // Per-level build caps. The general recurrence reads level j-2 at a
    // raised t index and levels <= j-3 at a raised x index, so each keeps
    // its own certified region.
    std::vector<int> Ix(static_cast<std::size_t>(J) + 1, 0), Kk(static_cast<std::size_t>(J) + 1, 0);
    Ix[1] = wall.A1.caps()[0];
    Kk[1] = wall.A1.caps()[1];
    LevelTable levels;
    levels.reserve(static_cast<std::size_t>(J) + 1);
    levels.emplace_back(be, std::array<int, 2>{0, 0});  // level 0: structurally absent
    {
        SeriesK<2> a1(be, {Ix[1], Kk[1]});
        a1.for_each_index([&](const std::array<int, 2>& ik) { a1.set(ik, wall.A1.at(ik)); });
        levels.push_back(std::move(a1));
    }
    if (J >= 2) {
        SeriesK<2> a2 = a2_from_external(ext, nu);
        Ix[2] = a2.caps()[0];
        Kk[2] = a2.caps()[1];
        levels.push_back(std::move(a2));
    }
    if (J >= 3) {
        SeriesK<2> a3 = a3_from_wall(WallSlope{levels[1]}, nu);
        Ix[3] = a3.caps()[0];
        Kk[3] = a3.caps()[1];
        levels.push_back(std::move(a3));
    }
    for (int j = 4; j <= J; ++j) {
        int min_ix_low = Ix[1], min_kk_low = Kk[1];
        for (int q = 1; q <= j - 3; ++q) {
            min_ix_low = std::min(min_ix_low, Ix[static_cast<std::size_t>(q)]);
            min_kk_low = std::min(min_kk_low, Kk[static_cast<std::size_t>(q)]);
        }
        Ix[static_cast<std::size_t>(j)] =
            std::min(Ix[static_cast<std::size_t>(j - 2)], min_ix_low - 1);
        Kk[static_cast<std::size_t>(j)] =
            std::min(Kk[static_cast<std::size_t>(j - 2)] - 1, min_kk_low);
        SeriesK<2> lvl(be, {Ix[static_cast<std::size_t>(j)], Kk[static_cast<std::size_t>(j)]});
        lvl.for_each_index([&](const std::array<int, 2>& ik) {
            lvl.set(ik, a_general(ik[0], j, ik[1], levels, nu));
        });
        levels.push_back(std::move(lvl));
    }
    for (int j = 1; j <= J; ++j)
        if (Ix[static_cast<std::size_t>(j)] < I + 1 || Kk[static_cast<std::size_t>(j)] < K)
            throw std::logic_error("internal cap budget fell short at level " + std::to_string(j));

    SeriesK<3> wide(be, {I + 1, J, K});
    wide.for_each_index([&](const std::array<int, 3>& ix) {
        if (ix[1] == 0) return;
        wide.set(ix, levels[static_cast<std::size_t>(ix[1])].at({ix[0], ix[2]}));
    });
    BoundaryLayerSeries bl{truncatek(wide, {I, J, K}), b_from_a(wide), nu, rho, {}};
    bl.level_trust.resize(static_cast<std::size_t>(J) + 1);
    bl.level_trust[0] = {Ix[1], Kk[1]};
    for (int j = 1; j <= J; ++j)
        bl.level_trust[static_cast<std::size_t>(j)] = {Ix[static_cast<std::size_t>(j)],
                                                       Kk[static_cast<std::size_t>(j)]};
    return bl;
}

std::map<std::string, SeriesK<3>> residual_bindings(const BoundaryLayerSeries& bl,
                                                    const ExternalFlow& ext) {
    const Backend be = bl.backend();
    if (ext.U.backend() != be) throw BackendMismatch{};
    const auto caps = bl.A.caps();
    const int I = caps[0], J = caps[1], K = caps[2];
    if (ext.U.caps()[0] < I + 1 || ext.U.caps()[1] < K + 1)
        throw std::invalid_argument("external stream caps must cover (x+1, t+1) of the layer");
    SeriesK<3> U3(be, {I + 1, J, K + 1});
    for (int i = 0; i <= I + 1; ++i)
        for (int k = 0; k <= K + 1; ++k) U3.set({i, 0, k}, ext.U.at({i, k}));

    std::map<std::string, SeriesK<3>> bindings;
    bindings.emplace("u", bl.A);
    bindings.emplace("v", bl.B);
    bindings.emplace("U", std::move(U3));
    return bindings;
}

BlReport verify(const BoundaryLayerSeries& bl, const ExternalFlow& ext) {
    const Backend be = bl.backend();
    const auto bindings = residual_bindings(bl, ext);
    BlReport rep;
    rep.momentum = evaluate(equations::prandtl_momentum(bl.nu), bindings);
    rep.continuity = evaluate(equations::prandtl_continuity(be), bindings);
    return rep;
}

SeriesK<2> wall_shear_profile(const BoundaryLayerSeries& bl) {
    const auto caps = bl.A.caps();
    SeriesK<2> shear(bl.backend(), {caps[0], caps[2]});
    shear.for_each_index(
        [&](const std::array<int, 2>& ik) { shear.set(ik, bl.A.at({ik[0], 1, ik[1]})); });
    return shear;
}

std::vector<std::pair<double, double>> shear_sign_brackets(const BoundaryLayerSeries& bl,
                                                           double t, double x_lo, double x_hi,
                                                           int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("need at least two grid points");
    const SeriesK<2> shear = wall_shear_profile(bl);
    const auto value = [&](double x) { return evalk(shear, std::array<double, 2>{x, t}); };
    std::vector<std::pair<double, double>> brackets;
    double prev_x = x_lo;
    double prev_v = value(x_lo);
    if (prev_v == 0.0) brackets.emplace_back(x_lo, x_lo);
    for (int g = 1; g <= grid_points; ++g) {
        const double x = x_lo + (x_hi - x_lo) * g / grid_points;
        const double v = value(x);
        if (v == 0.0) brackets.emplace_back(x, x);
        if (prev_v == 0.0 || v == 0.0 || (prev_v < 0) == (v < 0)) {
            prev_x = x;
            prev_v = v;
            continue;
        }
        double lo = prev_x, hi = x, flo = prev_v;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = value(mid);
            if (fm == 0.0) { lo = hi = mid; break; }
            if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; }
            else hi = mid;
        }
        brackets.emplace_back(lo, hi);
        prev_x = x;
        prev_v = v;
    }
    return brackets;
}

namespace {

// Dense Gaussian elimination with partial pivoting; n stays tiny.
std::vector<double> solve_dense(std::vector<double> m, std::vector<double> rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[static_cast<std::size_t>(r) * n + col]) >
                std::abs(m[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (std::abs(m[static_cast<std::size_t>(piv) * n + col]) < 1e-300)
            throw std::domain_error("singular matching system");
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(m[static_cast<std::size_t>(piv) * n + c],
                          m[static_cast<std::size_t>(col) * n + c]);
            std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = m[static_cast<std::size_t>(r) * n + col] /
                             m[static_cast<std::size_t>(col) * n + col];
            for (int c = col; c < n; ++c)
                m[static_cast<std::size_t>(r) * n + c] -=
                    f * m[static_cast<std::size_t>(col) * n + c];
            rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = rhs[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) acc -= m[static_cast<std::size_t>(r) * n + c] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = acc / m[static_cast<std::size_t>(r) * n + r];
    }
    return x;
}

}  // namespace

MatchResult match_wall_slope(const ExternalFlow& ext, const Scalar& nu, const Scalar& rho,
                             const Caps3& requested, double y_match, int max_iterations) {
    if (ext.U.backend() != Backend::float64)
        throw std::invalid_argument("the matcher works on the float backend");
    if (y_match <= 0) throw std::invalid_argument("matching distance must be positive");
    const Backend be = Backend::float64;
    const Caps3 wc = required_wall_caps(requested);
    // Only slope entries inside the requested box are observable from
    // samples of u there; the remaining demanded entries stay frozen at
    // zero, otherwise the system is structurally rank-deficient.
    const int nx = requested.x + 1, nt = requested.t + 1, n = nx * nt;

    std::vector<double> xs(static_cast<std::size_t>(nx)), ts(static_cast<std::size_t>(nt));
    for (int i = 0; i < nx; ++i) xs[static_cast<std::size_t>(i)] = 0.1 * (i + 1) / nx;
    for (int k = 0; k < nt; ++k) ts[static_cast<std::size_t>(k)] = 0.1 * (k + 1) / nt;

    const auto residual = [&](const std::vector<double>& a1) {
        SeriesK<2> table(be, {wc.x, wc.t});
        for (int i = 0; i < nx; ++i)
            for (int k = 0; k < nt; ++k)
                table.set({i, k}, Scalar::real(a1[static_cast<std::size_t>(i * nt + k)]));
        const auto bl = construct(ext, WallSlope{std::move(table)}, nu, rho, requested);
        std::vector<double> r(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < nx; ++i)
            for (int k = 0; k < nt; ++k)
                r[static_cast<std::size_t>(i * nt + k)] =
                    evalk(bl.A, std::array<double, 3>{xs[static_cast<std::size_t>(i)], y_match,
                                                      ts[static_cast<std::size_t>(k)]}) -
                    evalk(ext.U, std::array<double, 2>{xs[static_cast<std::size_t>(i)],
                                                       ts[static_cast<std::size_t>(k)]});
        return r;
    };
    const auto norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };

    double u_mag = 0.0;
    ext.U.for_each_index([&](const std::array<int, 2>& ik) {
        u_mag = std::max(u_mag, std::abs(ext.U.at(ik).approx()));
    });
    const double target = 1e-10 * (1.0 + u_mag);

    MatchResult out{WallSlope{SeriesK<2>(be, {wc.x, wc.t})}, 0.0, 0, false};
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    std::vector<double> r = residual(a);
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it;
        if (norm(r) < target) {
            out.converged = true;
            break;
        }
        std::vector<double> jac(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        for (int col = 0; col < n; ++col) {
            const double h = 1e-6 * (1.0 + std::abs(a[static_cast<std::size_t>(col)]));
            auto ap = a;
            ap[static_cast<std::size_t>(col)] += h;
            const auto rp = residual(ap);
            for (int row = 0; row < n; ++row)
                jac[static_cast<std::size_t>(row) * n + col] =
                    (rp[static_cast<std::size_t>(row)] - r[static_cast<std::size_t>(row)]) / h;
        }
        std::vector<double> neg_r = r;
        for (double& v : neg_r) v = -v;
        const auto delta = solve_dense(std::move(jac), std::move(neg_r), n);
        double lambda = 1.0;
        const double base = norm(r);
        for (int half = 0; half < 30; ++half) {
            auto trial = a;
            for (int c = 0; c < n; ++c)
                trial[static_cast<std::size_t>(c)] += lambda * delta[static_cast<std::size_t>(c)];
            auto rt = residual(trial);
            if (norm(rt) < base) {
                a = std::move(trial);
                r = std::move(rt);
                break;
            }
            lambda *= 0.5;
            if (half == 29) { a = std::move(trial); r = std::move(rt); }
        }
    }
    if (!out.converged && norm(r) < target) out.converged = true;
    out.residual_norm = norm(r);
    SeriesK<2> table(be, {wc.x, wc.t});
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < nt; ++k)
            table.set({i, k}, Scalar::real(a[static_cast<std::size_t>(i * nt + k)]));
    out.slope = WallSlope{std::move(table)};
    return out;
}

}  // namespace powser::prandtl
