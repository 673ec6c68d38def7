#include "catseye/exact_spectra.h"
#include "catseye/errors.h"
#include "catseye/orthopoly.h"
#include <algorithm>
#include <cmath>
#include <string>

namespace catseye {
namespace spectra {

namespace {

const double PI = M_PI;

/// eigenvalues closer than this are reported as one (with summed multiplicity)
const double MERGE_TOL = 1e-12;

bool isInteger(double v) { return std::fabs(v - std::round(v)) < 1e-14; }

/// (2s-1)!! for integer s >= 0 (with (-1)!! = 1)
double doubleFactorial(int s)
{
    double r = 1;
    for(int k = 2*s-1; k > 1; k -= 2)
        r *= k;
    return r;
}

/** the radial factor R(gamma) = c (1-gamma^2)^{s/2} C_d^{s+1/2}(gamma) (before any
    zero-mode shift), with the Gegenbauer part and its derivatives kept for the Laplacian */
struct Radial {
    double val;
    double C, dC, d2C, w;
};

Radial radialFactor(const Descriptor& d, double gamma)
{
    const double s = d.exponent(), beta = s + 0.5, c = d.prefactor();
    const int deg = d.gegenbauer_degree();
    Radial r;
    r.w   = 1 - gamma*gamma;
    r.C   = poly::eval_gegenbauer(deg, beta, gamma);
    r.dC  = poly::eval_gegenbauer_deriv(deg, beta, gamma, 1);
    r.d2C = poly::eval_gegenbauer_deriv(deg, beta, gamma, 2);
    const double ws = s == 0 ? 1 : std::pow(r.w, 0.5*s);
    r.val = c * ws * r.C;
    return r;
}

/** The shift of the zero-mode eigenfunctions, L_n(0), chosen so that the function
    has zero weighted mean */
double zeroModeShift(const Descriptor& d)
{
    return d.trig == Trig::ZeroMode ? poly::eval_legendre(d.n, 0.0) : 0.0;
}

/// angular factor T(nu theta), and T'' / T = -nu^2 for every choice
std::complex<double> angular(const Descriptor& d, double theta)
{
    const double nu = d.frequency();
    switch(d.trig) {
        case Trig::ZeroMode:    return 1.0;
        case Trig::Cosine:      return std::cos(nu * theta);
        case Trig::Sine:        return std::sin(nu * theta);
        case Trig::Exponential: return std::polar(1.0, nu * theta);
    }
    return 0.0;
}

void checkConsistent(const steady::FlowParams& p, const Problem& pr)
{
    bool ok = true;
    switch(pr.kind) {
        case Problem::CoPeriodic:    ok = p.alpha == 0; break;
        case Problem::MultiPeriodic: ok = p.alpha == 0 && p.m == pr.m; break;
        case Problem::Modulational:  ok = p.m == 1 && std::fabs(p.alpha - pr.alpha) < 1e-15; break;
    }
    if(!ok)
        throw InconsistentProblem("eigenfunction descriptor does not belong to the flow parameters "
            "(m=" + std::to_string(p.m) + ", alpha=" + std::to_string(p.alpha) + ")");
}

void addPair(std::vector<EigenPair>& list, double lambda, const Descriptor& d)
{
    for(auto& e: list)
        if(std::fabs(e.lambda - lambda) < MERGE_TOL) {
            e.basis.push_back(d);
            e.multiplicity++;
            return;
        }
    EigenPair e;
    e.lambda = lambda;
    e.multiplicity = 1;
    e.basis.push_back(d);
    list.push_back(e);
}

/// the integer branch shared by the co-periodic and multi-periodic problems
void addIntegerBranch(std::vector<EigenPair>& list, const Problem& pr, double lambda_max)
{
    for(int n = 1; 0.5*n*(n+1) <= lambda_max + MERGE_TOL; n++) {
        Descriptor d;
        d.problem = pr;
        d.n = n;
        d.trig = Trig::ZeroMode;
        addPair(list, d.lambda(), d);
        for(int j = 1; j <= n; j++) {
            d.mode = j;
            d.trig = Trig::Cosine;
            addPair(list, d.lambda(), d);
            d.trig = Trig::Sine;
            addPair(list, d.lambda(), d);
        }
    }
}

}  // namespace

void Problem::validate() const
{
    switch(kind) {
        case CoPeriodic:
            if(m != 1 || alpha != 0)
                throw InvalidParams("co-periodic problem requires m=1 and alpha=0");
            break;
        case MultiPeriodic:
            if(m < 2 || alpha != 0)
                throw InvalidParams("multi-periodic problem requires m>=2 and alpha=0");
            break;
        case Modulational:
            if(m != 1 || !(alpha > 0 && alpha <= 0.5))
                throw InvalidParams("modulational problem requires m=1 and 0<alpha<=1/2");
            break;
    }
}

steady::FlowParams Problem::params(double epsilon) const
{
    validate();
    return steady::FlowParams(epsilon, m, kind == Modulational ? alpha : 0.0);
}

double Descriptor::frequency() const
{
    switch(problem.kind) {
        case Problem::CoPeriodic:
            return trig == Trig::ZeroMode ? 0 : mode;
        case Problem::MultiPeriodic:
            if(residue == 0)
                return trig == Trig::ZeroMode ? 0 : mode;
            return double(mode) / problem.m;
        case Problem::Modulational:
            return sign > 0 ? mode + problem.alpha : -mode + problem.alpha;
    }
    return 0;
}

double Descriptor::exponent() const { return std::fabs(frequency()); }

int Descriptor::gegenbauer_degree() const
{
    if(problem.kind == Problem::MultiPeriodic && residue != 0)
        return n - (mode - residue) / problem.m;
    if(problem.kind == Problem::Modulational)
        return n - mode;
    return n - (trig == Trig::ZeroMode ? 0 : mode);
}

double Descriptor::prefactor() const
{
    const double s = exponent();
    return isInteger(s) ? doubleFactorial(int(std::round(s))) : 1.0;
}

double Descriptor::lambda() const
{
    const double t = gegenbauer_degree() + exponent();
    return 0.5 * t * (t+1);
}

void Descriptor::validate() const
{
    problem.validate();
    auto fail = [](const std::string& msg) { throw InvalidParams("eigenfunction descriptor: " + msg); };
    const bool integerBranch = problem.kind == Problem::CoPeriodic ||
        (problem.kind == Problem::MultiPeriodic && residue == 0);
    if(integerBranch) {
        if(residue != 0) fail("residue must be 0");
        if(n < 1) fail("n must be >= 1");
        if(trig == Trig::Exponential) fail("complex exponential not used for this problem");
        if(trig == Trig::ZeroMode ? mode != 0 : (mode < 1 || mode > n)) fail("mode out of range");
    } else if(problem.kind == Problem::MultiPeriodic) {
        if(residue < 1 || residue >= problem.m) fail("residue out of range");
        if(n < 0) fail("n must be >= 0");
        if(trig != Trig::Cosine && trig != Trig::Sine) fail("trig must be cosine or sine");
        if((mode - residue) % problem.m != 0 || mode < residue || mode > n*problem.m + residue)
            fail("mode must be (n-j) m + residue with 0 <= j <= n");
    } else {
        if(trig != Trig::Exponential) fail("modulational eigenfunctions are complex exponentials");
        if(sign == +1) {
            if(n < 0 || mode < 0 || mode > n) fail("mode out of range");
        } else if(sign == -1) {
            if(n < 1 || mode < 1 || mode > n) fail("mode out of range");
        } else fail("sign must be +1 or -1");
    }
}

std::vector<EigenPair> list_eigenvalues(const Problem& pr, double lambda_max)
{
    pr.validate();
    if(!(lambda_max > 0))
        throw InvalidParams("lambda_max must be positive");
    std::vector<EigenPair> list;
    if(pr.kind != Problem::Modulational)
        addIntegerBranch(list, pr, lambda_max);
    if(pr.kind == Problem::MultiPeriodic) {
        for(int i = 1; i < pr.m; i++)
            for(int n = 0; ; n++) {
                Descriptor d;
                d.problem = pr;
                d.residue = i;
                d.n = n;
                if(0.5*(n+double(i)/pr.m)*(n+double(i)/pr.m+1) > lambda_max + MERGE_TOL)
                    break;
                for(int j = 0; j <= n; j++) {
                    d.mode = (n-j)*pr.m + i;
                    d.trig = Trig::Cosine;
                    addPair(list, d.lambda(), d);
                    d.trig = Trig::Sine;
                    addPair(list, d.lambda(), d);
                }
            }
    }
    if(pr.kind == Problem::Modulational) {
        for(int sign: {+1, -1})
            for(int n = sign > 0 ? 0 : 1; ; n++) {
                const double t = n + sign * pr.alpha;
                if(0.5*t*(t+1) > lambda_max + MERGE_TOL)
                    break;
                for(int j = sign > 0 ? 0 : 1; j <= n; j++) {
                    Descriptor d;
                    d.problem = pr;
                    d.sign = sign;
                    d.n = n;
                    d.mode = j;
                    d.trig = Trig::Exponential;
                    addPair(list, d.lambda(), d);
                }
            }
    }
    std::sort(list.begin(), list.end(),
        [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
    // drop entries just above the threshold that were admitted by the tolerance
    while(!list.empty() && list.back().lambda > lambda_max + MERGE_TOL)
        list.pop_back();
    return list;
}

std::complex<double> eigenfunction_theta_gamma(const Descriptor& d, double theta, double gamma)
{
    d.validate();
    const double R = radialFactor(d, gamma).val - zeroModeShift(d);
    return R * angular(d, theta);
}

std::complex<double> eigenfunction_value(const steady::FlowParams& p, const Descriptor& d,
    const steady::PointXY& pt)
{
    checkConsistent(p, d.problem);
    const steady::CoordsEGX c = steady::coords(p, pt);
    const double theta = steady::theta_extended(p, pt);
    std::complex<double> v = eigenfunction_theta_gamma(d, theta, c.gamma);
    if(d.problem.kind == Problem::Modulational)
        v *= std::polar(1.0, -d.problem.alpha * pt.x);
    return v;
}

Rule2D make_weighted_rule(const steady::FlowParams& p, int nx, int ny_panels, int ny_order, double ymax)
{
    p.validate();
    if(nx < 1 || ny_panels < 2 || ny_order < 1 || !(ymax > 0))
        throw InvalidParams("make_weighted_rule: invalid resolution");
    const poly::QuadRule ry = poly::composite_gauss_legendre(ny_panels, ny_order, -ymax, ymax);
    const double hx = 2*PI / nx;
    Rule2D rule;
    rule.m = p.m;
    const double panel = 2*ymax / ny_panels;
    for(int cell = 0; cell < p.m; cell++)
        for(int i = 0; i < nx; i++) {
            const double x = 2*PI*cell + i*hx;
            for(std::size_t j = 0; j < ry.size(); j++) {
                steady::PointXY pt{x, ry.nodes[j]};
                rule.points.push_back(pt);
                rule.weights.push_back(hx * ry.weights[j] * steady::gprime(p, pt));
                rule.tail.push_back(std::fabs(pt.y) > ymax - panel);
            }
        }
    return rule;
}

ProjectionValue projection_P(const steady::FlowParams& p,
    const std::function<double(const steady::PointXY&)>& f, const Rule2D& rule)
{
    if(rule.m != p.m)
        throw InvalidParams("projection_P: rule built for a different number of cells");
    double sum = 0, mass = 0, tailMass = 0;
    for(std::size_t i = 0; i < rule.points.size(); i++) {
        const double v = f(rule.points[i]) * rule.weights[i];
        if(!std::isfinite(v))
            throw QuadratureDiverged("projection_P: non-finite integrand");
        sum += v;
        mass += std::fabs(v);
        if(rule.tail[i])
            tailMass += std::fabs(v);
    }
    if(tailMass > 1e-9 * mass)
        throw QuadratureDiverged("projection_P: integrand not resolved by the truncated y-range "
            "(tail fraction " + std::to_string(tailMass / mass) + ")");
    ProjectionValue res;
    res.normalization = 8*PI*p.m;
    res.value = sum / res.normalization;
    return res;
}

ThetaGammaGrid make_theta_gamma_grid(const steady::FlowParams& p, int ntheta, int ngamma)
{
    if(ntheta < 1 || ngamma < 1)
        throw InvalidParams("make_theta_gamma_grid: invalid size");
    ThetaGammaGrid g;
    for(int i = 0; i < ntheta; i++)
        g.theta.push_back((i + 0.5) * 2*PI*p.m / ntheta);
    for(int j = 0; j < ngamma; j++)
        g.gamma.push_back(-1 + (j + 0.5) * 2.0 / ngamma);
    return g;
}

double residual_norm(const steady::FlowParams& p, const Descriptor& d, const ThetaGammaGrid& grid)
{
    checkConsistent(p, d.problem);
    d.validate();
    const double lambda = d.lambda(), nu = d.frequency(), s = d.exponent(), c = d.prefactor();
    const double shift = zeroModeShift(d);

    // projection: only theta-independent functions have a non-zero weighted mean;
    // in (theta,gamma) it reduces to (1/2) int_{-1}^{1} R(gamma) dgamma
    double P = 0;
    if(nu == 0) {
        const poly::QuadRule gl = poly::gauss_legendre(d.n + 8, -1, 1);
        for(std::size_t i = 0; i < gl.size(); i++)
            P += 0.5 * gl.weights[i] * (radialFactor(d, gl.nodes[i]).val - shift);
    }

    double maxres = 0, scale = 0;
    for(double gamma: grid.gamma) {
        const Radial r = radialFactor(d, gamma);
        const double w = r.w, ws = s == 0 ? 1 : std::pow(w, 0.5*s);
        const double R = r.val - shift;
        // ((1-gamma^2) R')' for R = c w^{s/2} C, expanded term by term
        const double flux = c * ws * (-s*r.C + s*s*gamma*gamma*r.C/w - 2*(s+1)*gamma*r.dC + w*r.d2C);
        for(double theta: grid.theta) {
            const int cell = std::min(int(theta / (2*PI)), p.m - 1);
            steady::CoordsEGX cg = steady::coords_from_theta_gamma(theta - 2*PI*cell, gamma);
            steady::PointXY pt;
            try {
                pt = steady::inverse_coords(p, cg, cell);
            }
            catch(const DegeneratePoint&) {
                continue;
            }
            const double gp = steady::gprime(p, pt);
            const std::complex<double> T = angular(d, theta);
            // -Lap psi = (g'/2) [ nu^2 Psi / (1-gamma^2) - ((1-gamma^2) Psi_gamma)_gamma ]
            const std::complex<double> lap = 0.5*gp * (nu*nu * (r.val/w) - flux) * T;
            const std::complex<double> rhs = lambda * gp * (R - P) * T;
            maxres = std::max(maxres, std::abs(lap - rhs));
            scale  = std::max(scale, std::abs(lambda * gp * R * T));
        }
    }
    return scale > 0 ? maxres / scale : maxres;
}

double residual_norm(const steady::FlowParams& p, const EigenPair& pair, const ThetaGammaGrid& grid)
{
    double r = 0;
    for(const auto& d: pair.basis)
        r = std::max(r, residual_norm(p, d, grid));
    return r;
}

}  // namespace spectra
}  // namespace catseye
