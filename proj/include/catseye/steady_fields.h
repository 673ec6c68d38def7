/** \file    steady_fields.h
    \brief   Kelvin-Stuart cat's-eyes equilibrium and its nonlinear coordinates

    The equilibrium stream function is
    \f$ \psi_\epsilon = \ln\big( (\cosh y + \epsilon\cos x) / \sqrt{1-\epsilon^2} \big) \f$,
    with vorticity \f$ \omega_\epsilon = -e^{-2\psi_\epsilon} \f$.
    The coordinates (eta, gamma, xi) lie on the unit sphere, and (theta, gamma) are
    the cylindrical angle/height on that sphere, in which the associated eigenvalue
    problems separate.

    All routines use exp-scaled forms (the common factor e^{|y|} is divided out),
    so they stay finite for arbitrarily large |y|.
*/
#pragma once
#include <utility>

namespace catseye {
namespace steady {

/** Parameters selecting the equilibrium and the perturbation class */
struct FlowParams {
    double epsilon = 0;  ///< family parameter, 0 <= epsilon < 1
    int m = 1;           ///< period multiplier (perturbations of period 2*m*pi)
    double alpha = 0;    ///< modulation (Floquet) exponent, 0 <= alpha <= 1/2

    FlowParams() = default;
    /// construct and validate; throws InvalidParams
    explicit FlowParams(double epsilon, int m = 1, double alpha = 0);
    /// check the invariants; throws InvalidParams
    void validate() const;
};

/** A point of the cylinder: x is an angle, y is unbounded */
struct PointXY {
    double x = 0, y = 0;
};

/** Sphere coordinates of a point, plus the polar angle theta in [0, 2pi) */
struct CoordsEGX {
    double eta = 0, gamma = 0, xi = 1, theta = 0;
};

/** Partial derivatives of the transformed variables (theta, gamma) */
struct CoordsGrad {
    double theta_x, theta_y, gamma_x, gamma_y;
};

/// stream function psi_eps(x, y)
double stream_psi(const FlowParams& p, const PointXY& pt);

/// vorticity omega_eps = -(1-eps^2)/(cosh y + eps cos x)^2 = -exp(-2 psi_eps)
double vorticity_omega(const FlowParams& p, const PointXY& pt);

/// g'(psi_eps) = 2 exp(-2 psi_eps) = -2 omega_eps (the weight of all quadratic forms)
double gprime(const FlowParams& p, const PointXY& pt);

/// velocity (d psi/dy, -d psi/dx)
std::pair<double, double> velocity_u(const FlowParams& p, const PointXY& pt);

/** Sphere coordinates and the angle theta of a point.
    Theta follows the arccos branch rule: the [0,pi] branch for x mod 2pi in [0,pi]
    and 2pi minus it otherwise; the returned value is in [0, 2pi) within one 2pi-cell
    (use theta_extended() for the angle continued across the m cells). */
CoordsEGX coords(const FlowParams& p, const PointXY& pt);

/** Index of the 2pi-cell containing x after reducing x into [0, 2 m pi) */
int cell_index(const FlowParams& p, double x);

/** theta continued across the m cells: theta + 2 pi * cell, in [0, 2 m pi) */
double theta_extended(const FlowParams& p, const PointXY& pt);

/** Sphere coordinates from the pair (theta, gamma) with |gamma| <= 1 */
CoordsEGX coords_from_theta_gamma(double theta, double gamma);

/** Inverse map: the point of the requested 2pi-cell whose coordinates are c.
    Only (theta, gamma) of the input are used (eta, xi are recomputed from them).
    Throws DegeneratePoint at the image of y = +-infinity (eta = 0, xi = eps),
    where the inverse is undefined. */
PointXY inverse_coords(const FlowParams& p, const CoordsEGX& c, int cell = 0);

/// Jacobian d(theta,gamma)/d(x,y) = g'(psi_eps)/2 = -omega_eps > 0
double jacobian(const FlowParams& p, const PointXY& pt);

/// closed-form first derivatives of theta and gamma
CoordsGrad coord_derivatives(const FlowParams& p, const PointXY& pt);

/// rho0 = ln sqrt((1+eps)/(1-eps)); the separatrix level, and -rho0 = min psi_eps
double rho0(const FlowParams& p);

/** Turning point x0 in (0, pi) of the trapped streamline psi_eps = rho:
    x0 = arccos((sqrt(1-eps^2) e^rho - 1)/eps).  Throws OutOfRange unless
    eps > 0 and -rho0 < rho < rho0. */
double level_turning_point(const FlowParams& p, double rho);

}  // namespace steady
}  // namespace catseye
