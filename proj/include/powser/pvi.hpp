#pragma once

#include "powser/equations.hpp"
#include "powser/expression.hpp"
#include "powser/series1.hpp"

#include <vector>

namespace powser::pvi {

struct PviParams {
    Scalar alpha, beta, gamma, delta;
    Backend backend() const { return alpha.backend(); }
};

PviParams make_params(const Scalar& alpha, const Scalar& beta, const Scalar& gamma,
                      const Scalar& delta);

/// Initial data (y(0), y'(0)). The recurrence divides by 8*a0*(a0^2-1),
/// so a0 in {0, 1, -1} is rejected.
struct PviSeed {
    Scalar a0, a1;
};

struct SingularSeed : std::invalid_argument {
    explicit SingularSeed(const std::string& what) : std::invalid_argument(what) {}
};

// The 65 convolution templates obtained when the series is substituted
// into the shifted equation and coefficients of x^i are equated. Members
// 1-16 come from the second-derivative side, 17-65 from the rest.
enum class SumShape {
    cube_ypp,    // triple sum, weight (n-j+2)(n-j+1), a_r a_{k-r} a_{j-k} a_{n-j+2}
    square_ypp,  // double sum, same weight, a_k a_{j-k} a_{n-j+2}
    lin_ypp,     // single sum, same weight, a_j a_{n-j+2}
    square_p2,   // triple sum, weight (r+1)(n-j-r+1), a_k a_{j-k} a_{r+1} a_{n-j-r+1}
    lin_p2,      // double sum, weight (k+1)(j-k+1), a_{k+1} a_{j-k+1} a_{n-j}
    p2,          // single sum, weight (j+1)(n-j+1), a_{j+1} a_{n-j+1}
    cube_p,      // triple sum, weight (n-j+1), a_r a_{k-r} a_{j-k} a_{n-j+1}
    square_p,    // double sum, weight (n-j+1), a_k a_{j-k} a_{n-j+1}
    lin_p,       // single sum, weight (n-j+1), a_j a_{n-j+1}
    sextic,      // quintuple sum, six-fold product at total degree n
    quintic,     // quadruple sum, five-fold product
    quartic,     // triple sum, four-fold product
    cubic,       // double sum, three-fold product
    square,      // single sum, a_j a_{n-j}
    linear,      // a_n
    unit         // 1
};

/// One row of the member table: coefficient (affine in the four equation
/// parameters), summation shape, and the monomial shift d that gates
/// validity (i >= d, or i == d exactly for the constant rows).
struct MemberSpec {
    int id;
    SumShape shape;
    int shift;
    bool pinned;  // active at exactly i == shift
    long c0, ca, cb, cg, cd;
    Scalar coefficient(const PviParams& p) const;
};

const std::array<MemberSpec, 65>& member_table();

/// Value of one member at index i. Below the member's validity bound the
/// empty-sum convention applies and the result is exactly zero. `coeffs`
/// must cover every index the shape references (up to i+2 for members 5
/// and 16).
Scalar member_value(int id, int i, const std::vector<Scalar>& coeffs, const PviParams& params);

/// Members 5 and 16 with the leading a_{i+2} part split off (summation
/// from j = 1); identical to member_value for every other id.
Scalar member_value_starred(int id, int i, const std::vector<Scalar>& coeffs,
                            const PviParams& params);

/// Sum over members 1..16 minus members 17..65 (full, unstarred forms):
/// the coefficient of x^i of the equation residual.
Scalar member_signed_sum(int i, const std::vector<Scalar>& coeffs, const PviParams& params);

/// a_{i+2} from a_0..a_{i+1}: isolates the single highest coefficient in
/// the coefficient-of-x^i identity and solves for it.
Scalar next_coefficient(int i, const std::vector<Scalar>& coeffs, const PviParams& params);

/// Maclaurin solution of the shifted equation through the given order.
Series1 solve(const PviParams& params, const PviSeed& seed, int order);

/// Residual of a candidate series under the shifted equation.
ResidualReport<1> verify(const Series1& series, const PviParams& params);

struct OracleRow {
    double x;
    double series_value;
    double rk_value;
    double abs_diff;
};

struct OracleTable {
    std::vector<OracleRow> rows;
    double max_abs_diff() const;
};

/// Independent check: integrates y'' = f(x, y, y') (the shifted equation
/// solved for y'') with classical fixed-step RK4 from the series' own
/// initial data and tabulates |series(x) - rk(x)|. `sample_at` defaults to
/// 64 evenly spaced points plus the endpoint. Aborts with the location if
/// the y''-multiplier polynomial vanishes on the path.
OracleTable oracle_compare(const Series1& series, const PviParams& params, double x_max,
                           double step, std::vector<double> sample_at = {});

/// Least-squares slope of log|diff| against log(x) over rows with
/// x in [x_lo, x_hi]; rows with zero diff are clamped to 1e-300.
double fitted_slope(const OracleTable& table, double x_lo, double x_hi);

struct CrosscheckResult {
    bool ok = false;
    int first_bad_index = -1;
    std::string detail;
};

/// Transcription cross-check: for a freshly solved series, the generic
/// coefficient extraction from the shifted equation must agree exactly
/// with the signed member sums for every i <= i_max.
CrosscheckResult members_vs_engine(int i_max, const PviParams& params, const PviSeed& seed);

/// Same comparison on an arbitrary coefficient prefix (not necessarily a
/// solution); this is the discriminating form used by the tests.
CrosscheckResult members_vs_engine_on(const Series1& series, const PviParams& params, int i_max);

}  // namespace powser::pvi
