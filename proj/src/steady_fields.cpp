#include "catseye/steady_fields.h"
#include "catseye/errors.h"
#include <cmath>
#include <string>

namespace catseye {
namespace steady {

namespace {  // internal routines

/** exp-scaled pieces of the common denominator D = cosh y + eps cos x:
    D = e^{|y|} * ds, and the scaled hyperbolic functions ch = cosh(y) e^{-|y|},
    sh = sinh(y) e^{-|y|}; q = e^{-|y|}. */
struct Scaled {
    double q, ch, sh, ds, cx, sx;
};

inline Scaled scaled(double eps, const PointXY& pt)
{
    Scaled s;
    double ay = std::fabs(pt.y);
    s.q  = std::exp(-ay);
    double q2 = s.q * s.q;
    s.ch = 0.5 * (1 + q2);
    s.sh = (pt.y >= 0 ? 0.5 : -0.5) * (-std::expm1(-2 * ay));
    s.cx = std::cos(pt.x);
    s.sx = std::sin(pt.x);
    s.ds = s.ch + eps * s.cx * s.q;
    return s;
}

/// 1 - eps^2 without cancellation for eps close to 1
inline double oneMinusEps2(double eps) { return (1 - eps) * (1 + eps); }

const double TWO_PI = 2 * M_PI;

}  // internal namespace

FlowParams::FlowParams(double epsilon_, int m_, double alpha_):
    epsilon(epsilon_), m(m_), alpha(alpha_)
{
    validate();
}

void FlowParams::validate() const
{
    if(!(epsilon >= 0 && epsilon < 1))
        throw InvalidParams("FlowParams: epsilon must lie in [0,1), got " + std::to_string(epsilon));
    if(m < 1)
        throw InvalidParams("FlowParams: period multiplier m must be >= 1");
    if(!(alpha >= 0 && alpha <= 0.5))
        throw InvalidParams("FlowParams: alpha must lie in [0,1/2], got " + std::to_string(alpha));
    if(alpha != 0 && m != 1)
        throw InvalidParams("FlowParams: modulational (alpha>0) and multi-periodic (m>1) "
            "problems are distinct selections");
}

double stream_psi(const FlowParams& p, const PointXY& pt)
{
    Scaled s = scaled(p.epsilon, pt);
    return std::fabs(pt.y) + std::log(s.ds) - 0.5 * std::log(oneMinusEps2(p.epsilon));
}

double vorticity_omega(const FlowParams& p, const PointXY& pt)
{
    Scaled s = scaled(p.epsilon, pt);
    double r = s.q / s.ds;
    return -oneMinusEps2(p.epsilon) * r * r;
}

double gprime(const FlowParams& p, const PointXY& pt)
{
    return -2 * vorticity_omega(p, pt);
}

std::pair<double, double> velocity_u(const FlowParams& p, const PointXY& pt)
{
    Scaled s = scaled(p.epsilon, pt);
    return { s.sh / s.ds, p.epsilon * s.sx * s.q / s.ds };
}

CoordsEGX coords(const FlowParams& p, const PointXY& pt)
{
    const double eps = p.epsilon;
    Scaled s = scaled(eps, pt);
    double sq = std::sqrt(oneMinusEps2(eps));
    CoordsEGX c;
    c.eta   = sq * s.sx * s.q / s.ds;
    c.gamma = sq * s.sh / s.ds;
    c.xi    = (eps * s.ch + s.cx * s.q) / s.ds;
    // reduce x into [0, 2pi) to select the branch of the arccos rule
    double xr = pt.x - TWO_PI * std::floor(pt.x / TWO_PI);
    if(xr >= TWO_PI) xr = 0;
    // arccos(xi / sqrt(1-gamma^2)) computed as atan2(|eta|, xi), since eta^2+xi^2 = 1-gamma^2
    double a = std::atan2(std::fabs(c.eta), c.xi);
    c.theta = xr <= M_PI ? a : TWO_PI - a;
    if(c.theta >= TWO_PI) c.theta -= TWO_PI;
    return c;
}

int cell_index(const FlowParams& p, double x)
{
    double period = TWO_PI * p.m;
    double xr = x - period * std::floor(x / period);
    int cell = static_cast<int>(std::floor(xr / TWO_PI));
    if(cell >= p.m) cell = p.m - 1;
    if(cell < 0) cell = 0;
    return cell;
}

double theta_extended(const FlowParams& p, const PointXY& pt)
{
    return coords(p, pt).theta + TWO_PI * cell_index(p, pt.x);
}

CoordsEGX coords_from_theta_gamma(double theta, double gamma)
{
    CoordsEGX c;
    double r = std::sqrt(std::fmax(0., (1 - gamma) * (1 + gamma)));
    c.gamma = gamma;
    c.eta   = r * std::sin(theta);
    c.xi    = r * std::cos(theta);
    c.theta = theta - TWO_PI * std::floor(theta / TWO_PI);
    if(c.theta >= TWO_PI) c.theta = 0;
    return c;
}

PointXY inverse_coords(const FlowParams& p, const CoordsEGX& c_in, int cell)
{
    const double eps = p.epsilon;
    CoordsEGX c = coords_from_theta_gamma(c_in.theta, c_in.gamma);
    PointXY pt;
    if(eps == 0) {
        // exact shear limit: theta = x, gamma = tanh y
        if(std::fabs(c.gamma) >= 1)
            throw DegeneratePoint("inverse_coords: |gamma| = 1 corresponds to y = +-infinity");
        pt.x = c.theta;
        pt.y = std::atanh(c.gamma);
    } else {
        double sq = std::sqrt(oneMinusEps2(eps));
        // sin x ~ eta, cos x ~ (xi - eps)/sqrt(1-eps^2), with the same positive factor
        double cx = (c.xi - eps) / sq, sx = c.eta;
        double t  = sq * c.gamma / (1 - c.xi * eps);   // = tanh y
        if((std::fabs(cx) < 1e-15 && std::fabs(sx) < 1e-15) || !(std::fabs(t) < 1))
            throw DegeneratePoint("inverse_coords: point (theta=" + std::to_string(c.theta) +
                ", gamma=" + std::to_string(c.gamma) + ") is the image of y = +-infinity");
        double x = std::atan2(sx, cx);
        if(x < 0) x += TWO_PI;
        pt.x = x;
        pt.y = std::atanh(t);
    }
    pt.x += TWO_PI * cell;
    return pt;
}

double jacobian(const FlowParams& p, const PointXY& pt)
{
    return -vorticity_omega(p, pt);
}

CoordsGrad coord_derivatives(const FlowParams& p, const PointXY& pt)
{
    const double eps = p.epsilon;
    CoordsEGX c = coords(p, pt);
    double sq = std::sqrt(oneMinusEps2(eps));
    CoordsGrad g;
    g.gamma_x = eps * c.gamma * c.eta / sq;
    g.gamma_y = (1 - c.xi * eps - c.gamma * c.gamma) / sq;
    double w  = c.eta * c.eta + c.xi * c.xi;   // = 1 - gamma^2, accurate near the poles
    g.theta_x =  g.gamma_y / w;
    g.theta_y = -g.gamma_x / w;
    return g;
}

double rho0(const FlowParams& p)
{
    const double eps = p.epsilon;
    if(eps == 0) return 0;
    return 0.5 * (std::log1p(eps) - std::log1p(-eps));
}

double level_turning_point(const FlowParams& p, double rho)
{
    const double eps = p.epsilon;
    double r0 = rho0(p);
    if(!(eps > 0) || !(rho > -r0 && rho < r0))
        throw OutOfRange("level_turning_point: level " + std::to_string(rho) +
            " is not a trapped level (|rho| < rho0 = " + std::to_string(r0) + ")");
    double arg = (std::sqrt(oneMinusEps2(eps)) * std::exp(rho) - 1) / eps;
    return std::acos(std::fmax(-1., std::fmin(1., arg)));
}

}  // namespace steady
}  // namespace catseye
