/** \file    cylinder_poisson.h
    \brief   Poisson solver on the cylinder T_{2pi} x R and the nonlinear-stability
             functionals built on it

    Fields are sampled on a tensor grid: x_i = 2 pi i / nx (uniform, periodic) and
    y_j = -Y + j h, h = 2Y/(ny-1) (uniform, endpoints included, y = 0 is a node).
    Integrals use the trapezoid rule in both directions, which is spectrally accurate
    for the smooth, exponentially decaying integrands encountered here.

    The Green function of -Delta on the cylinder is
    \f$ G(x,y) = -\frac{1}{4\pi}\ln(\cosh y - \cos x) \f$; its Fourier modes are
    e^{-|k||y|}/(4 pi |k|) for k != 0 and (ln 2 - |y|)/(4 pi) for k = 0.
    The Poisson solve therefore reduces to 1d convolutions in y for every x-mode,
    which are evaluated exactly on a piecewise-polynomial interpolant of the
    right-hand side by O(ny) recursions.
*/
#pragma once
#include <functional>
#include <string>
#include <vector>

namespace catseye {
namespace poisson {

/** Description of the tensor grid */
struct GridSpec {
    int nx = 128;      ///< number of nodes in x (period 2 pi)
    int ny = 1601;     ///< number of nodes in y, odd so that y = 0 is a node
    double Y = 40;     ///< half-width of the truncated y domain

    /// throws InvalidParams unless nx >= 4, ny >= 5 is odd and Y > 0
    void validate() const;
    double hx() const;
    double hy() const;
    double x(int i) const;
    double y(int j) const;
    bool operator==(const GridSpec& other) const;
};

/** Values on the grid, stored row by row (index j*nx + i), with two diagnostic flags */
struct GridField {
    GridSpec spec;
    std::vector<double> values;
    bool zero_mean = false;       ///< |integral| <= 1e-8
    bool finite_moment = false;   ///< integral of |y f| converges within the truncated domain

    GridField() = default;
    explicit GridField(const GridSpec& spec);   ///< zero field
    double& operator()(int i, int j) { return values[j * spec.nx + i]; }
    double  operator()(int i, int j) const { return values[j * spec.nx + i]; }
    /// recompute zero_mean and finite_moment from the values
    void update_flags();
};

/** Result of a truncated-domain functional: value and a nonnegative estimate of
    the contribution of |y| > Y */
struct FunctionalValue {
    double value = 0;
    double tail_estimate = 0;
};

/// sample a function f(x,y) on the grid (flags are updated)
GridField sample(const GridSpec& spec, const std::function<double(double, double)>& f);

/// trapezoid integral over the grid, with compensated summation
double integral(const GridField& f);

/** Integral with a tail estimate: the decay rate of the x-integrated profile near
    each end of the y interval is extrapolated to infinity */
FunctionalValue integral_with_tail(const GridField& f);

/// Green function -(1/4pi) ln(cosh y - cos x); throws SingularPoint at (0,0) mod 2pi
double green_G(double x, double y);

/** Normalization of the mode-0 part of the solution */
enum class Normalization {
    Green,          ///< exact convolution G*w (no restriction on w)
    ZeroAtOrigin    ///< zero-mean w required; the x-average of psi vanishes at y = 0
};

/** Solve -Delta psi = w on the cylinder.
    Throws NonZeroMean when ZeroAtOrigin is requested and |integral of w| > 1e-8. */
GridField poisson_solve(const GridField& w, Normalization norm = Normalization::Green);

/** Dirichlet integral of |grad f|^2: x-derivative spectral, y-derivative by
    eighth-order finite differences */
double dirichlet_energy(const GridField& f);

/** Negative Laplacian of a grid field (same discretization as dirichlet_energy) */
GridField negative_laplacian(const GridField& f);

/** Pseudoenergy (1/2) int (G*w) w.  The tail estimate is the exponentially extrapolated
    tail of |w| beyond each edge times the largest |G*w| within one unit of that edge.
    Throws MomentUnbounded if the tail estimate exceeds 10% of the value. */
FunctionalValue pseudoenergy(const GridField& w);

/// Casimir density h(s) = (s - s ln(-s))/2 for s < 0; throws DomainError otherwise
double casimir_h(double s);

/** f(z) = h(omega_eps + z) - h(omega_eps) - h'(omega_eps) z, the convex function whose
    Legendre transform is legendre_fstar; requires omega_eps < 0, omega_eps + z < 0 */
double legendre_f(double omega_eps_val, double z);

/// Legendre transform f*(s) = -(1/2) omega_eps (e^{-2s} + 2s - 1)
double legendre_fstar(double omega_eps_val, double s);

/// the equilibrium fields sampled on a grid
GridField steady_vorticity(const GridSpec& spec, double eps);
GridField steady_stream(const GridSpec& spec, double eps);

/** Components of the distance of a perturbed vorticity from omega_eps */
struct Distance {
    double d1 = 0, d2 = 0, d = 0;
};

/** d1 = int (h(w~) - h(omega_eps) - psi_eps (w~ - omega_eps)),
    d2 = |grad psi|^2 with psi = G*(w~ - omega_eps), d = d1 + d2.
    Throws SignViolation if w~ >= 0 at any node, NonZeroMean if its total differs
    from -4 pi by more than 1e-6 (the field is rejected, not renormalized). */
Distance distance_d(const GridField& w_tilde, double eps);

/** I(omega_eps) = int (-omega_eps)^{3/2} dxdy, evaluated in the (theta,gamma) variables
    where the integrand is (eta^2 + (xi - eps)^2/(1-eps^2))^{1/2} */
double functional_I(double eps);

/** B_eps(psi) = int ( |grad psi|^2/2 - g'(psi_eps)(e^{-2 psi} + 2 psi - 1)/4 ) */
double dual_B(double eps, const GridField& psi);

/** Energy-Casimir functional of the MHD problem:
    H = (1/2) int (G*w)w + (1/2) int (G*J)J - (1/2) int e^{-2 phi}, with J = -Delta phi */
double mhd_ec_functional(const GridField& w, const GridField& phi, double eps);

/** Components of the MHD distance from (0, phi_eps) */
struct MhdDistance {
    double d1 = 0, d2 = 0, d3 = 0, d = 0;
};

/** d1 = int (G*w) w, d2 = |grad(phi - phi_eps)|^2,
    d3 = (1/2) int e^{-2 phi_eps} (e^{-2(phi-phi_eps)} + 2(phi-phi_eps) - 1);
    throws NonZeroMean if w has non-zero mean */
MhdDistance mhd_distance(const GridField& w, const GridField& phi, double eps);

/// CSV export: header line "x,y,value", then one row per node with 17 significant digits
std::string to_csv(const GridField& f);
/// JSON header (grid specification and flags)
std::string header_json(const GridField& f);
/** Reconstruct a field from its JSON header and CSV body; the round trip is bit-exact.
    Throws InvalidParams on malformed input or a row count mismatch. */
GridField from_csv(const std::string& header, const std::string& csv);

}  // namespace poisson
}  // namespace catseye
