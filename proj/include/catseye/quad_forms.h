/** \file    quad_forms.h
    \brief   Instability quadratic forms, explicit test functions and level-curve quadrature

    For a test function psi the quadratic form splits as <A psi, psi> = b1 + b2 with
      b1 = int (|grad psi|^2 - g'(psi_eps) |psi|^2) dx dy,
      b2 = int g'(rho) sum_i |oint_{Gamma_i(rho)} psi / |grad psi_eps||^2
                              / oint_{Gamma_i(rho)} 1 / |grad psi_eps|  drho,
    where Gamma_i(rho) are the disjoint closed components of the level set psi_eps = rho.
    All test functions are defined through (theta, gamma), and b1 is evaluated in these
    variables, where it does not depend on epsilon:
      b1 = int int ( |Psi_theta|^2 / (1-gamma^2) + (1-gamma^2) |Psi_gamma|^2 - 2 |Psi|^2 ) dtheta dgamma.
*/
#pragma once
#include "catseye/steady_fields.h"
#include <complex>
#include <functional>
#include <vector>

namespace catseye {
namespace forms {

/** One closed streamline psi_eps = rho.
    Trapped curves (|rho| < rho0) lie in a single 2pi-cell and consist of an upper and a
    lower branch y = +-acosh(sqrt(1-eps^2) e^rho - eps cos x), x in [x0, 2pi - x0];
    untrapped curves (rho > rho0) are a single branch spanning all m cells. */
struct LevelCurve {
    enum Branch { Both, Upper, Lower };
    double epsilon = 0;
    double rho = 0;
    int m = 1;             ///< number of 2pi-cells of the periodic domain
    bool trapped = false;
    double x0 = 0;         ///< turning point (trapped curves)
    double halfspan = 0;   ///< pi - x0, kept separately for accuracy near the elliptic point
    int cell = 0;          ///< index of the cell containing a trapped curve
    Branch branch = Both;  ///< Both for trapped curves; Upper or Lower for untrapped ones
};

/** Construct a level curve; throws OutOfRange if rho <= -rho0, or if a trapped curve is
    requested with rho >= rho0 (or an untrapped one with rho <= rho0), and
    SingularEndpoint if rho is within 1e-10 of +-rho0 */
LevelCurve make_level_curve(const steady::FlowParams& p, double rho, int cell = 0,
    LevelCurve::Branch branch = LevelCurve::Both);

/** Accuracy controls of the adaptive double-exponential curve/level quadrature */
struct CurveQuadrature {
    double inner_tol = 1e-11;   ///< relative tolerance of the curve integrals
    double outer_tol = 1e-9;    ///< relative tolerance of the integral over levels
    double rho_margin = 1e-12;  ///< levels closer than this to +-rho0 are not sampled
};

/** oint f / |grad psi_eps| ds over the curve (f = 1 gives the particle period).
    The parametrization x = pi - (pi - x0) cos(phi) removes the square-root singularity
    at the turning points; the range is split at x = pi (mod 2pi), where theta is
    discontinuous above the poles of the coordinate sphere. */
std::complex<double> curve_integral(const LevelCurve& c,
    const std::function<std::complex<double>(const steady::PointXY&)>& f,
    const CurveQuadrature& q = CurveQuadrature(), bool complex_valued = true);

/// the period oint 1/|grad psi_eps| ds
double curve_period(const LevelCurve& c, const CurveQuadrature& q = CurveQuadrature());

/** The explicit test functions */
struct TestFunction {
    enum Id {
        TestEven,     ///< cos(theta/2)(1-gamma^2)^{1/4} on T_{4k pi}
        TestOdd1,     ///< sin(theta/3)(1-gamma^2)^{1/6} on [0,6pi], sin(theta)(1-gamma^2)^{1/2} after, on T_{(4k+2)pi}
        TestOdd2,     ///< piecewise cos(theta/2), cos(theta) and 0 times (1-gamma^2)^{1/2}, minus 1/((2k+1)pi)
        ModTest,      ///< (1-gamma^2)^{alpha/2} e^{i alpha (theta - x)}
        ModTestHalf   ///< ((1+e^{-i theta})/2)(1-gamma^2)^{1/4} e^{i (theta - x)/2}
    } id = TestEven;
    int k = 1;           ///< period index for TestEven / TestOdd1 / TestOdd2
    double alpha = 0;    ///< modulation for ModTest

    TestFunction() = default;
    TestFunction(Id id_, int k_ = 1, double alpha_ = 0): id(id_), k(k_), alpha(alpha_) { validate(); }
    void validate() const;

    /// number of 2pi-cells of the period (2k, 2k+1 or 1)
    int cells() const;
    bool modulational() const { return id == ModTest || id == ModTestHalf; }
    /// Floquet exponent (0 for the multi-periodic test functions)
    double modulation() const;
    /// flow parameters matching the test function at the given epsilon
    steady::FlowParams params(double epsilon) const;

    /** Psi(theta, gamma) with theta continued over [0, 2 m pi); for the modulational test
        functions this is the full perturbation psi e^{i alpha x} */
    std::complex<double> Psi(double theta, double gamma) const;
    /// partial derivatives of Psi (one-sided at piece boundaries)
    std::complex<double> Psi_theta(double theta, double gamma) const;
    std::complex<double> Psi_gamma(double theta, double gamma) const;
    /// theta-points where the piecewise definition changes
    std::vector<double> breakpoints() const;

    /// value at a physical point (includes e^{-i alpha x} for modulational functions)
    std::complex<double> value(const steady::FlowParams& p, const steady::PointXY& pt) const;
};

/** b1 in (theta, gamma): Gauss-Legendre on each smooth theta-piece times the exact
    gamma-moments of the separated radial factors (Beta integrals, which stay accurate for
    the strongly singular weights (1-gamma^2)^{alpha-1}); independent of epsilon */
double form_b1(const steady::FlowParams& p, const TestFunction& t);

/** b2 by nested level-curve quadrature: trapped levels in every cell and, for the
    multi-periodic test functions, the two untrapped families (upper and lower) of levels
    rho > rho0.  For modulational test functions only trapped levels contribute and the
    curve integrand is psi e^{i alpha x}.  Returns a nonnegative value. */
double form_b2(const steady::FlowParams& p, const TestFunction& t,
    const CurveQuadrature& q = CurveQuadrature());

/** b3 = 2 int int_{first trapped cell} g' sin^2(theta/3) (1-gamma^2)^{1/3} dx dy */
double form_b3(const steady::FlowParams& p);

/** b4 = int int_{first trapped cell} g' cos^2(theta) (1-gamma^2) dx dy */
double form_b4(const steady::FlowParams& p);

/** closed form 2 pi (alpha(alpha+1) - 2) int_{-1}^{1} (1-gamma^2)^alpha dgamma */
double form_b1_modulational(double alpha);

/** <A psi, psi> = b1 + b2; negative values certify an unstable direction */
double hatA_quadform(const steady::FlowParams& p, const TestFunction& t,
    const CurveQuadrature& q = CurveQuadrature());

/** Coalescence criterion of the magnetic-island chain: the quadratic form of the
    4pi-periodic test function TestEven(k=1) at the given epsilon */
double coalescence_check(const steady::FlowParams& p);

/** The image of the first trapped cell in (theta, gamma): along each meridian it is
    {|gamma| <= inner} U {|gamma| >= outer} (outer = 1 means the second part is empty;
    for eps > 1/2 it contains the poles of the sphere on some meridians) */
struct TrappedMeridian {
    double inner = 0, outer = 1;
};
TrappedMeridian trapped_meridian(double epsilon, double theta);

/** Boundary of the trapped region in the (xi, eta) disk: the ellipse
    eta^2 = (1-eps)/(1+eps) - (xi-eps)^2/(1-eps^2), xi in [2 eps - 1, 1] */
double trapped_ellipse_eta2(double epsilon, double xi);

/** true iff, sampled at n_samples abscissae, the trapped-region boundary ellipse of eps2
    is enclosed by that of eps1 and both lie inside the unit circle */
bool ellipse_nesting(double eps1, double eps2, int n_samples = 201);

}  // namespace forms
}  // namespace catseye
