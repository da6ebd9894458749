#pragma once

#include "powser/equations.hpp"
#include "powser/expression.hpp"

#include <vector>

namespace powser::ns {

/// Velocity/pressure coefficient tables A, B, C, D for u, v, w, P in
/// x^i y^j z^k t^l. All four share caps and backend.
///
/// `level_trust`, when non-empty, gives the spatial caps through which
/// coefficients at each time level are exact (time marching erodes two
/// spatial orders per level through the viscous term). Empty means every
/// stored entry is trusted.
struct FlowSeries {
    SeriesK<4> A, B, C, D;
    Scalar rho, nu;
    std::vector<std::array<int, 3>> level_trust;

    FlowSeries(SeriesK<4> a, SeriesK<4> b, SeriesK<4> c, SeriesK<4> d, Scalar rho_,
               Scalar nu_);

    std::array<int, 3> trusted_spatial(int l) const;
    int time_cap() const { return A.caps()[3]; }
    Backend backend() const { return A.backend(); }
};

enum class Axis { x = 0, y = 1, z = 2 };

/// LHS - RHS of the coefficient identity for one momentum component at one
/// multi-index; zero iff the identity holds there. Throws when the index
/// needs coefficients beyond the trustworthy range.
Scalar momentum_identity(Axis axis, const FlowSeries& flow, const std::array<int, 4>& idx);

/// Divergence identity coefficient at one multi-index.
Scalar continuity_coeff(const FlowSeries& flow, const std::array<int, 4>& idx);

ResidualReport<4> continuity_residual(const FlowSeries& flow);

struct NsReport {
    ResidualReport<4> momentum_x, momentum_y, momentum_z, continuity;
    bool all_zero() const {
        return momentum_x.exact_zero && momentum_y.exact_zero && momentum_z.exact_zero &&
               continuity.exact_zero;
    }
};

/// Sweeps the momentum identities and the divergence identity over every
/// trustworthy index. The reports' verdicts cover all trustworthy levels;
/// the materialized residual series covers the largest trusted box.
NsReport verify(const FlowSeries& flow);

/// Constructs time coefficients level by level: each momentum identity
/// contains exactly one level-(l+1) coefficient, so given the full series
/// of P and the l = 0 data of u, v, w, levels 1..L follow by division by
/// (l+1). Spatial trust shrinks by two per level; the result records this.
/// `pressure` must cover caps (X, Y, Z, L) where (X, Y, Z) are the initial
/// data caps.
FlowSeries time_march(const SeriesK<3>& u0, const SeriesK<3>& v0, const SeriesK<3>& w0,
                      const SeriesK<4>& pressure, const Scalar& rho, const Scalar& nu, int L);

}  // namespace powser::ns
