#pragma once

#include "powser/expression.hpp"

namespace powser::equations {

/// Painleve VI after the shift that moves the expansion point away from
/// the fixed singularities (series variable x is the original one plus 1).
/// Unknown "y"; returns LHS - RHS, so a solution has residual zero.
PolyDiffExpression<1> pvi_shifted(const Scalar& alpha, const Scalar& beta,
                                  const Scalar& gamma, const Scalar& delta);

/// Incompressible momentum balance along one axis (0=x, 1=y, 2=z) over
/// unknowns u, v, w, P on axes (x, y, z, t):
///   conv(u_axis) + d(u_axis)/dt + (1/rho) dP/daxis - nu * laplacian(u_axis).
PolyDiffExpression<4> ns_momentum(int axis, const Scalar& rho, const Scalar& nu);

/// du/dx + dv/dy + dw/dz over axes (x, y, z, t).
PolyDiffExpression<4> ns_continuity(Backend be);

/// Boundary-layer momentum over unknowns u, v and the external stream U
/// on axes (x, y, t). The pressure gradient is eliminated through the
/// impressed-stream relation, so the expression is
///   u u_x + v u_y + u_t - U_t - U U_x - nu u_yy.
PolyDiffExpression<3> prandtl_momentum(const Scalar& nu);

/// du/dx + dv/dy over axes (x, y, t).
PolyDiffExpression<3> prandtl_continuity(Backend be);

}  // namespace powser::equations
