#include "powser/navier_stokes.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace powser::ns {

namespace {

std::array<int, 3> spatial(const std::array<int, 4>& caps) {
    return {caps[0], caps[1], caps[2]};
}

}  // namespace

FlowSeries::FlowSeries(SeriesK<4> a, SeriesK<4> b, SeriesK<4> c, SeriesK<4> d, Scalar rho_,
                       Scalar nu_)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)), rho(std::move(rho_)),
      nu(std::move(nu_)) {
    const Backend be = A.backend();
    if (B.backend() != be || C.backend() != be || D.backend() != be || rho.backend() != be ||
        nu.backend() != be)
        throw BackendMismatch{};
    if (B.caps() != A.caps() || C.caps() != A.caps() || D.caps() != A.caps())
        throw std::invalid_argument("velocity and pressure tables must share caps");
    if (rho.is_zero()) throw std::invalid_argument("rho must be nonzero");
}

std::array<int, 3> FlowSeries::trusted_spatial(int l) const {
    if (l < 0 || l > time_cap()) throw std::out_of_range("time level outside caps");
    if (level_trust.empty()) return spatial(A.caps());
    return level_trust[static_cast<std::size_t>(l)];
}

namespace {

const SeriesK<4>& component(const FlowSeries& flow, int c) {
    switch (c) {
        case 0: return flow.A;
        case 1: return flow.B;
        default: return flow.C;
    }
}

// Convective coefficient sum for a target table X at a multi-index:
//   sum (i-p+1) A_{p,q,r,s} X_{i-p+1,...} + (j-q+1) B X_{..j-q+1..}
//       + (k-r+1) C X_{..k-r+1..}
Scalar convective(const FlowSeries& flow, const SeriesK<4>& target,
                  const std::array<int, 4>& n) {
    const Backend be = flow.backend();
    Scalar acc = Scalar::zero(be);
    std::array<int, 4> m{};
    for (m[0] = 0; m[0] <= n[0]; ++m[0])
        for (m[1] = 0; m[1] <= n[1]; ++m[1])
            for (m[2] = 0; m[2] <= n[2]; ++m[2])
                for (m[3] = 0; m[3] <= n[3]; ++m[3]) {
                    const int i = n[0], j = n[1], k = n[2], l = n[3];
                    const int p = m[0], q = m[1], r = m[2], s = m[3];
                    acc += Scalar::from_int(i - p + 1, be) * flow.A.at(m) *
                           target.at({i - p + 1, j - q, k - r, l - s});
                    acc += Scalar::from_int(j - q + 1, be) * flow.B.at(m) *
                           target.at({i - p, j - q + 1, k - r, l - s});
                    acc += Scalar::from_int(k - r + 1, be) * flow.C.at(m) *
                           target.at({i - p, j - q, k - r + 1, l - s});
                }
    return acc;
}

void check_momentum_range(const FlowSeries& flow, const std::array<int, 4>& idx) {
    const int l = idx[3];
    if (l < 0 || l + 1 > flow.time_cap())
        throw std::out_of_range("time index " + std::to_string(l) + " outside trustworthy range");
    const auto tr_l = flow.trusted_spatial(l);
    const auto tr_next = flow.trusted_spatial(l + 1);
    for (int ax = 0; ax < 3; ++ax) {
        if (idx[ax] < 0 || idx[ax] + 2 > tr_l[ax] || idx[ax] > tr_next[ax])
            throw std::out_of_range("index outside trustworthy range along axis " +
                                    std::to_string(ax));
    }
}

}  // namespace

Scalar momentum_identity(Axis axis, const FlowSeries& flow, const std::array<int, 4>& idx) {
    check_momentum_range(flow, idx);
    const Backend be = flow.backend();
    const int c = static_cast<int>(axis);
    const SeriesK<4>& X = component(flow, c);
    const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];

    Scalar lhs = convective(flow, X, idx);
    std::array<int, 4> up = idx;
    up[3] = l + 1;
    lhs += Scalar::from_int(l + 1, be) * X.at(up);

    std::array<int, 4> pix = idx;
    pix[c] += 1;
    Scalar rhs = -(Scalar::from_int(idx[c] + 1, be) / flow.rho) * flow.D.at(pix);
    rhs += flow.nu * (Scalar::from_int(static_cast<long>(i + 2) * (i + 1), be) *
                          X.at({i + 2, j, k, l}) +
                      Scalar::from_int(static_cast<long>(j + 2) * (j + 1), be) *
                          X.at({i, j + 2, k, l}) +
                      Scalar::from_int(static_cast<long>(k + 2) * (k + 1), be) *
                          X.at({i, j, k + 2, l}));
    return lhs - rhs;
}

Scalar continuity_coeff(const FlowSeries& flow, const std::array<int, 4>& idx) {
    const Backend be = flow.backend();
    const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
    const auto tr = flow.trusted_spatial(l);
    if (i + 1 > tr[0] || j + 1 > tr[1] || k + 1 > tr[2])
        throw std::out_of_range("index outside trustworthy range");
    return Scalar::from_int(i + 1, be) * flow.A.at({i + 1, j, k, l}) +
           Scalar::from_int(j + 1, be) * flow.B.at({i, j + 1, k, l}) +
           Scalar::from_int(k + 1, be) * flow.C.at({i, j, k + 1, l});
}

namespace {

double flow_magnitude(const FlowSeries& flow) {
    double m = 0.0;
    for (const SeriesK<4>* s : {&flow.A, &flow.B, &flow.C, &flow.D})
        s->for_each_index([&](const std::array<int, 4>& ix) {
            m = std::max(m, std::abs(s->at(ix).approx()));
        });
    return m;
}

// Sweeps an identity over every trustworthy index; the box part is
// materialized into the report's residual series.
template <typename IdentityFn, typename LevelRegionFn>
ResidualReport<4> sweep_identity(const FlowSeries& flow, int max_level, IdentityFn&& identity,
                                 LevelRegionFn&& region) {
    const Backend be = flow.backend();
    ResidualReport<4> rep;
    rep.max_abs = Scalar::zero(be);
    if (be == Backend::float64)
        rep.tolerance = detail::float_tolerance(flow_magnitude(flow));

    std::array<int, 3> box{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                           std::numeric_limits<int>::max()};
    bool any = false;
    bool zero = true;
    Scalar biggest = Scalar::zero(be);
    for (int l = 0; l <= max_level; ++l) {
        const auto r = region(l);
        for (int ax = 0; ax < 3; ++ax) box[ax] = std::min(box[ax], r[ax]);
        if (r[0] < 0 || r[1] < 0 || r[2] < 0) continue;
        any = true;
        for_each_index<3>(r, [&](const std::array<int, 3>& sp) {
            const Scalar v = identity(std::array<int, 4>{sp[0], sp[1], sp[2], l}).abs();
            if (be == Backend::exact ? !v.is_zero() : v.value() > rep.tolerance) zero = false;
            if (biggest < v) biggest = v;
        });
    }
    rep.exact_zero = zero;
    rep.max_abs = std::move(biggest);
    if (!any || max_level < 0 || box[0] < 0 || box[1] < 0 || box[2] < 0) {
        rep.trusted = {-1, -1, -1, -1};
        return rep;
    }
    SeriesK<4> res(be, {box[0], box[1], box[2], max_level});
    res.for_each_index([&](const std::array<int, 4>& ix) { res.set(ix, identity(ix)); });
    rep.residual = std::move(res);
    rep.trusted = rep.residual->caps();
    return rep;
}

}  // namespace

ResidualReport<4> continuity_residual(const FlowSeries& flow) {
    return sweep_identity(
        flow, flow.time_cap(),
        [&](const std::array<int, 4>& ix) { return continuity_coeff(flow, ix); },
        [&](int l) {
            auto r = flow.trusted_spatial(l);
            for (int ax = 0; ax < 3; ++ax) r[ax] -= 1;
            return r;
        });
}

NsReport verify(const FlowSeries& flow) {
    const auto momentum_region = [&](int l) {
        auto r = flow.trusted_spatial(l);
        const auto next = flow.trusted_spatial(l + 1);
        for (int ax = 0; ax < 3; ++ax) r[ax] = std::min(r[ax] - 2, next[ax]);
        return r;
    };
    NsReport rep;
    const auto run = [&](Axis ax) {
        return sweep_identity(
            flow, flow.time_cap() - 1,
            [&](const std::array<int, 4>& ix) { return momentum_identity(ax, flow, ix); },
            momentum_region);
    };
    rep.momentum_x = run(Axis::x);
    rep.momentum_y = run(Axis::y);
    rep.momentum_z = run(Axis::z);
    rep.continuity = continuity_residual(flow);
    return rep;
}

FlowSeries time_march(const SeriesK<3>& u0, const SeriesK<3>& v0, const SeriesK<3>& w0,
                      const SeriesK<4>& pressure, const Scalar& rho, const Scalar& nu, int L) {
    const Backend be = u0.backend();
    if (v0.backend() != be || w0.backend() != be || pressure.backend() != be ||
        rho.backend() != be || nu.backend() != be)
        throw BackendMismatch{};
    if (v0.caps() != u0.caps() || w0.caps() != u0.caps())
        throw std::invalid_argument("initial velocity tables must share caps");
    if (rho.is_zero()) throw std::invalid_argument("rho must be nonzero");
    if (L < 0) throw std::invalid_argument("time order must be >= 0");
    const auto sp = u0.caps();
    for (int ax = 0; ax < 3; ++ax)
        if (sp[ax] < 2 * L)
            throw std::invalid_argument(
                "caps insufficient for requested time order: spatial axis " + std::to_string(ax) +
                " has cap " + std::to_string(sp[ax]) + ", needs " + std::to_string(2 * L));
    for (int ax = 0; ax < 3; ++ax)
        if (pressure.caps()[ax] < sp[ax])
            throw std::invalid_argument("pressure caps insufficient along spatial axis " +
                                        std::to_string(ax));
    if (pressure.caps()[3] < L)
        throw std::invalid_argument("pressure caps insufficient along time axis");

    const std::array<int, 4> caps{sp[0], sp[1], sp[2], L};
    const std::array<std::string, 4> axes = default_axes<4>();
    SeriesK<4> A(be, caps, axes), B(be, caps, axes), C(be, caps, axes);
    for_each_index<3>(sp, [&](const std::array<int, 3>& s) {
        A.set({s[0], s[1], s[2], 0}, u0.at(s));
        B.set({s[0], s[1], s[2], 0}, v0.at(s));
        C.set({s[0], s[1], s[2], 0}, w0.at(s));
    });
    SeriesK<4> D(be, caps, axes);
    D.for_each_index([&](const std::array<int, 4>& ix) { D.set(ix, pressure.at(ix)); });

    FlowSeries flow(std::move(A), std::move(B), std::move(C), std::move(D), rho, nu);
    flow.level_trust.resize(static_cast<std::size_t>(L) + 1);
    for (int l = 0; l <= L; ++l)
        flow.level_trust[static_cast<std::size_t>(l)] = {sp[0] - 2 * l, sp[1] - 2 * l,
                                                         sp[2] - 2 * l};

    for (int l = 0; l < L; ++l) {
        const auto tr = flow.trusted_spatial(l + 1);
        for_each_index<3>(tr, [&](const std::array<int, 3>& s) {
            const std::array<int, 4> idx{s[0], s[1], s[2], l};
            const Scalar inv = Scalar::one(be) / Scalar::from_int(l + 1, be);
            for (int c = 0; c < 3; ++c) {
                const SeriesK<4>& X = component(flow, c);
                std::array<int, 4> pix = idx;
                pix[c] += 1;
                Scalar rhs = -(Scalar::from_int(idx[c] + 1, be) / flow.rho) * flow.D.at(pix);
                rhs += flow.nu *
                       (Scalar::from_int(static_cast<long>(s[0] + 2) * (s[0] + 1), be) *
                            X.at({s[0] + 2, s[1], s[2], l}) +
                        Scalar::from_int(static_cast<long>(s[1] + 2) * (s[1] + 1), be) *
                            X.at({s[0], s[1] + 2, s[2], l}) +
                        Scalar::from_int(static_cast<long>(s[2] + 2) * (s[2] + 1), be) *
                            X.at({s[0], s[1], s[2] + 2, l}));
                const Scalar value = (rhs - convective(flow, X, idx)) * inv;
                std::array<int, 4> up = idx;
                up[3] = l + 1;
                switch (c) {
                    case 0: flow.A.set(up, value); break;
                    case 1: flow.B.set(up, value); break;
                    default: flow.C.set(up, value); break;
                }
            }
        });
    }
    return flow;
}

}  // namespace powser::ns
