#pragma once

#include "powser/equations.hpp"
#include "powser/expression.hpp"

#include <vector>

namespace powser::prandtl {

/// Impressed external stream U(x, t) as a 2-index table U_{i,k}.
struct ExternalFlow {
    SeriesK<2> U;
};

/// Wall shear data A_{i,1,k}: the y-linear coefficients of u, supplied by
/// the caller (matching against the external stream is a separate,
/// best-effort utility; see match_wall_slope).
struct WallSlope {
    SeriesK<2> A1;
};

struct Caps3 {
    int x, y, t;
};

/// Boundary-layer velocity tables A (u) and B (v) in x^i y^j t^k. The
/// no-slip wall makes every j = 0 entry structurally zero, and continuity
/// forces B_{i,1,k} = 0. Entries within the stored caps are all trusted;
/// `level_trust[j]` records the wider per-y-level (x, t) region the build
/// actually certified before the rectangle was cut out.
struct BoundaryLayerSeries {
    SeriesK<3> A, B;
    Scalar nu, rho;
    std::vector<std::array<int, 2>> level_trust;

    Backend backend() const { return A.backend(); }
};

/// A_{i,2,k} from the external stream: the wall-limit momentum balance
/// divided by 2 nu. Output caps: (U.caps x - 1, U.caps t - 1).
SeriesK<2> a2_from_external(const ExternalFlow& ext, const Scalar& nu);

/// A_{i,3,k} = (k+1) A_{i,1,k+1} / (6 nu). Output caps:
/// (A1.caps x, A1.caps t - 1).
SeriesK<2> a3_from_wall(const WallSlope& wall, const Scalar& nu);

/// Per-y-level coefficient tables during construction; levels[j] holds the
/// A_{.,j,.} table (levels[0] is unused and empty).
using LevelTable = std::vector<SeriesK<2>>;

/// General recurrence for j >= 4 from the already-built lower levels.
/// Throws when a required lower coefficient lies outside its table.
Scalar a_general(int i, int j, int k, const LevelTable& built, const Scalar& nu);

/// v table from an A table via continuity: B_{i,j,k} = -((i+1)/j)
/// A_{i+1,j-1,k} for j >= 2, with the j = 0, 1 rows zero. Output x-cap is
/// one less than A's.
SeriesK<3> b_from_a(const SeriesK<3>& A);

/// Input caps construct() demands for a requested output box:
/// the convective sums read one x-index above the target on lower levels
/// (one erosion step per three levels) and the k-axis loses one index per
/// two levels through the A_{i,j-2,k+1} dependency.
Caps3 required_wall_caps(const Caps3& requested);   // (x, t) caps; y unused
Caps3 required_external_caps(const Caps3& requested);

/// Builds u and v through y-order J: levels 2 and 3 from the subsidiary
/// relations, levels 4.. from the general recurrence, v by continuity.
/// Every entry of the returned (x, y, t) = requested box is exact.
BoundaryLayerSeries construct(const ExternalFlow& ext, const WallSlope& wall, const Scalar& nu,
                              const Scalar& rho, const Caps3& requested);

struct BlReport {
    ResidualReport<3> momentum;   // with the impressed-stream pressure closure
    ResidualReport<3> continuity;
    bool all_zero() const { return momentum.exact_zero && continuity.exact_zero; }
};

/// Bindings for the momentum/continuity expressions: u, v from the layer
/// plus the external stream embedded as a y-independent 3-axis series
/// (an exact polynomial, so the widened caps are honest).
std::map<std::string, SeriesK<3>> residual_bindings(const BoundaryLayerSeries& bl,
                                                    const ExternalFlow& ext);

BlReport verify(const BoundaryLayerSeries& bl, const ExternalFlow& ext);

/// Wall shear series (du/dy at y = 0): exactly the A_{i,1,k} table.
SeriesK<2> wall_shear_profile(const BoundaryLayerSeries& bl);

/// Sign changes of the evaluated wall shear along x at fixed t, each
/// refined by bisection: the classical separation-criterion locus.
std::vector<std::pair<double, double>> shear_sign_brackets(const BoundaryLayerSeries& bl,
                                                           double t, double x_lo, double x_hi,
                                                           int grid_points);

struct MatchResult {
    WallSlope slope;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Best-effort wall-slope fit: damped Newton iteration (forward-difference
/// Jacobian) on the map A1 -> u(x, y_match, t) - U(x, t) sampled on a
/// rectangular grid, using the float backend. The matching distance has no
/// blessed default and must be given. Not part of the construction path.
MatchResult match_wall_slope(const ExternalFlow& ext, const Scalar& nu, const Scalar& rho,
                             const Caps3& requested, double y_match, int max_iterations = 40);

}  // namespace powser::prandtl
