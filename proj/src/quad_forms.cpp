#include "catseye/quad_forms.h"
#include "catseye/errors.h"
#include "catseye/orthopoly.h"
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <string>

namespace catseye {
namespace forms {

namespace {

const double PI = M_PI;

typedef boost::math::quadrature::tanh_sinh<double> TanhSinh;

/// one integrator per thread (it extends its abscissa tables lazily)
TanhSinh& integrator()
{
    thread_local TanhSinh ts(12);
    return ts;
}

/// integrate f over [a,b]; the tolerance is relative to the L1 norm of f
template<typename F>
double integrate(F f, double a, double b, double tol)
{
    return integrator().integrate(f, a, b, tol);
}

/** One smooth piece of a test function: Psi = T(theta) (1-gamma^2)^p + shift for theta
    in [a, b], where T is a trigonometric factor */
struct Piece {
    double a, b;
    double p;
    std::function<std::complex<double>(double)> T, dT;
};

std::vector<Piece> pieces(const TestFunction& t)
{
    std::vector<Piece> res;
    auto cosine = [](double nu) {
        return std::make_pair(std::function<std::complex<double>(double)>([nu](double th) { return std::cos(nu*th); }),
            std::function<std::complex<double>(double)>([nu](double th) { return -nu*std::sin(nu*th); }));
    };
    auto sine = [](double nu) {
        return std::make_pair(std::function<std::complex<double>(double)>([nu](double th) { return std::sin(nu*th); }),
            std::function<std::complex<double>(double)>([nu](double th) { return nu*std::cos(nu*th); }));
    };
    auto zero = std::make_pair(std::function<std::complex<double>(double)>([](double) { return 0.0; }),
        std::function<std::complex<double>(double)>([](double) { return 0.0; }));
    auto add = [&res](double a, double b, double p, const std::pair<std::function<std::complex<double>(double)>,
        std::function<std::complex<double>(double)>>& T) { res.push_back(Piece{a, b, p, T.first, T.second}); };
    const int k = t.k;
    switch(t.id) {
        case TestFunction::TestEven:
            add(0, 4*k*PI, 0.25, cosine(0.5));
            break;
        case TestFunction::TestOdd1:
            add(0, 6*PI, 1./6, sine(1./3));
            if(k > 1)
                add(6*PI, (4*k+2)*PI, 0.5, sine(1.0));
            break;
        case TestFunction::TestOdd2:
            add(0, 4*k*PI, 0.5, cosine(0.5));
            add(4*k*PI, (4*k+0.5)*PI, 0.5, cosine(1.0));
            add((4*k+0.5)*PI, (4*k+1.5)*PI, 0.5, zero);
            add((4*k+1.5)*PI, (4*k+2)*PI, 0.5, cosine(1.0));
            break;
        case TestFunction::ModTest: {
            const double al = t.alpha;
            add(0, 2*PI, 0.5*al, std::make_pair(
                std::function<std::complex<double>(double)>([al](double th) { return std::polar(1.0, al*th); }),
                std::function<std::complex<double>(double)>([al](double th) {
                    return std::complex<double>(0, al) * std::polar(1.0, al*th); })));
            break;
        }
        case TestFunction::ModTestHalf:
            add(0, 2*PI, 0.25, cosine(0.5));
            break;
    }
    return res;
}

double shiftOf(const TestFunction& t)
{
    return t.id == TestFunction::TestOdd2 ? -1 / ((2*t.k+1) * PI) : 0.0;
}

void checkCompatible(const steady::FlowParams& p, const TestFunction& t)
{
    t.validate();
    p.validate();
    if(p.m != t.cells() || std::fabs(p.alpha - t.modulation()) > 1e-15)
        throw InvalidParams("test function period does not match the flow parameters (m=" +
            std::to_string(p.m) + ", alpha=" + std::to_string(p.alpha) + ")");
}

/// stable evaluation of acosh(1+g) and sinh of it for g >= 0
inline void branchPoint(double g, double& y, double& sh)
{
    sh = std::sqrt(g * (2 + g));
    y  = std::asinh(sh);
}

/** b2 contribution of a family of level curves, parametrized by rho in (lo, hi):
    int 2 e^{-2 rho} |oint f / |grad psi||^2 / oint 1/|grad psi| drho */
double levelIntegral(const steady::FlowParams& p, const TestFunction& t, const CurveQuadrature& q,
    double lo, double hi, int cell, LevelCurve::Branch branch)
{
    const bool cplx = t.modulational();
    auto f = [&](const steady::PointXY& pt) {
        return t.Psi(steady::theta_extended(p, pt), steady::coords(p, pt).gamma);
    };
    auto F = [&](double rho) {
        const LevelCurve c = make_level_curve(p, rho, cell, branch);
        const double T = curve_period(c, q);
        const std::complex<double> I = curve_integral(c, f, q, cplx);
        return 2 * std::exp(-2*rho) * std::norm(I) / T;
    };
    // F vanishes identically for symmetric test functions, and its round-off noise would
    // never meet a relative tolerance; adding the known integrand K 2 e^{-2 rho}, with K
    // of the size of |Psi|^2 times a period, turns the tolerance into an absolute one
    const double sup = 1 + std::fabs(shiftOf(t));
    const double K = sup * sup * 2*PI * p.m;
    const double offset = K * (std::exp(-2*lo) - std::exp(-2*hi));
    return integrate([&](double rho) { return F(rho) + K * 2 * std::exp(-2*rho); }, lo, hi, q.outer_tol) - offset;
}

}  // namespace

//------ level curves ------//

LevelCurve make_level_curve(const steady::FlowParams& p, double rho, int cell, LevelCurve::Branch branch)
{
    p.validate();
    const double eps = p.epsilon, r0 = steady::rho0(p);
    if(!(rho > -r0) || !std::isfinite(rho))
        throw OutOfRange("level rho=" + std::to_string(rho) + " below the minimum of the stream function");
    if(eps > 0 && std::fabs(std::fabs(rho) - r0) < 1e-10)
        throw SingularEndpoint("level rho=" + std::to_string(rho) + " too close to the separatrix or elliptic point");
    LevelCurve c;
    c.epsilon = eps;
    c.rho = rho;
    c.m = p.m;
    c.trapped = rho < r0;
    c.branch = branch;
    if(c.trapped) {
        if(branch != LevelCurve::Both)
            throw OutOfRange("trapped level curves consist of both branches");
        if(cell < 0 || cell >= p.m)
            throw OutOfRange("cell index out of range");
        c.cell = cell;
        // cos x0 = (A-1)/eps with A = sqrt(1-eps^2) e^rho; use the forms free of cancellation
        const double omc = -(1+eps) * std::expm1(rho - r0) / eps;  // 1 - cos x0
        const double opc =  (1-eps) * std::expm1(rho + r0) / eps;  // 1 + cos x0
        if(omc < opc) {
            c.x0 = 2 * std::asin(std::sqrt(0.5 * omc));
            c.halfspan = PI - c.x0;
        } else {
            c.halfspan = 2 * std::asin(std::sqrt(0.5 * opc));
            c.x0 = PI - c.halfspan;
        }
    } else {
        if(branch == LevelCurve::Both)
            throw OutOfRange("untrapped level curves are selected by branch (upper or lower)");
    }
    return c;
}

std::complex<double> curve_integral(const LevelCurve& c,
    const std::function<std::complex<double>(const steady::PointXY&)>& f,
    const CurveQuadrature& q, bool complex_valued)
{
    const double eps = c.epsilon, A = std::sqrt(1 - eps*eps) * std::exp(c.rho);
    std::function<std::complex<double>(double)> integrand;
    double upper;
    if(c.trapped) {
        // x = pi -+ H cos v, v in [0, pi/2]: both halves of both branches at once
        const double H = c.halfspan, xc = 2*PI*c.cell + PI;
        upper = PI/2;
        integrand = [=, &f](double v) -> std::complex<double> {
            const double s2 = std::sin(0.5*v), c2 = std::cos(0.5*v);
            const double g = 2 * eps * std::sin(H * c2*c2) * std::sin(H * s2*s2);
            double y, sh;
            branchPoint(g, y, sh);
            if(sh == 0)
                return 0.0;   // only reached at v = 0 exactly, where the weight vanishes too
            const double w = H * std::sin(v) * A / sh, dx = H * std::cos(v);
            return w * (f({xc - dx, y}) + f({xc - dx, -y}) + f({xc + dx, y}) + f({xc + dx, -y}));
        };
    } else {
        // x = 2 pi j + v and 2 pi (j+1) - v, v in [0, pi], over all cells j
        const double r0 = std::log(std::sqrt((1+eps) / (1-eps)));
        const double base = (1+eps) * std::expm1(c.rho - r0);  // A - 1 - eps
        const double sgn = c.branch == LevelCurve::Upper ? 1 : -1;
        const int m = c.m;
        upper = PI;
        integrand = [=, &f](double v) -> std::complex<double> {
            const double s = std::sin(0.5*v);
            const double g = base + 2 * eps * s*s;
            double y, sh;
            branchPoint(g, y, sh);
            std::complex<double> sum = 0;
            for(int j = 0; j < m; j++)
                sum += f({2*PI*j + v, sgn*y}) + f({2*PI*(j+1) - v, sgn*y});
            return A / sh * sum;
        };
    }
    const double re = integrate([&](double v) { return integrand(v).real(); }, 0.0, upper, q.inner_tol);
    const double im = complex_valued ?
        integrate([&](double v) { return integrand(v).imag(); }, 0.0, upper, q.inner_tol) : 0.0;
    return {re, im};
}

double curve_period(const LevelCurve& c, const CurveQuadrature& q)
{
    return curve_integral(c, [](const steady::PointXY&) { return std::complex<double>(1.0); }, q, false).real();
}

//------ test functions ------//

void TestFunction::validate() const
{
    if(k < 1)
        throw InvalidParams("test function index k must be >= 1");
    if(id == ModTest && !(alpha > 0 && alpha <= 0.5))
        throw InvalidParams("modulational test function requires 0 < alpha <= 1/2");
}

int TestFunction::cells() const
{
    switch(id) {
        case TestEven: return 2*k;
        case TestOdd1:
        case TestOdd2: return 2*k + 1;
        default:       return 1;
    }
}

double TestFunction::modulation() const
{
    return id == ModTest ? alpha : id == ModTestHalf ? 0.5 : 0.0;
}

steady::FlowParams TestFunction::params(double epsilon) const
{
    validate();
    return steady::FlowParams(epsilon, cells(), modulation());
}

namespace {

/// angular factor T, its derivative and the radial exponent p at theta (no allocations)
void evalPiece(const TestFunction& t, double th, std::complex<double>& T, std::complex<double>& dT, double& p)
{
    const int k = t.k;
    switch(t.id) {
        case TestFunction::TestEven:
        case TestFunction::ModTestHalf:
            T = std::cos(0.5*th);  dT = -0.5*std::sin(0.5*th);  p = 0.25;
            return;
        case TestFunction::TestOdd1:
            if(th <= 6*PI) { T = std::sin(th/3); dT = std::cos(th/3)/3; p = 1./6; }
            else           { T = std::sin(th);   dT = std::cos(th);     p = 0.5; }
            return;
        case TestFunction::TestOdd2: {
            p = 0.5;
            const double r = th - 4*k*PI;
            if(r <= 0)              { T = std::cos(0.5*th); dT = -0.5*std::sin(0.5*th); }
            else if(r <= 0.5*PI || r > 1.5*PI) { T = std::cos(th); dT = -std::sin(th); }
            else                    { T = 0; dT = 0; }
            return;
        }
        case TestFunction::ModTest:
            T = std::polar(1.0, t.alpha*th);  dT = std::complex<double>(0, t.alpha) * T;  p = 0.5*t.alpha;
            return;
    }
}

}  // namespace

std::complex<double> TestFunction::Psi(double theta, double gamma) const
{
    std::complex<double> T, dT;
    double p;
    evalPiece(*this, theta, T, dT, p);
    const double w = std::max(0.0, 1 - gamma*gamma);
    return T * std::pow(w, p) + shiftOf(*this);
}

std::complex<double> TestFunction::Psi_theta(double theta, double gamma) const
{
    std::complex<double> T, dT;
    double p;
    evalPiece(*this, theta, T, dT, p);
    return dT * std::pow(std::max(0.0, 1 - gamma*gamma), p);
}

std::complex<double> TestFunction::Psi_gamma(double theta, double gamma) const
{
    std::complex<double> T, dT;
    double p;
    evalPiece(*this, theta, T, dT, p);
    return T * (-2 * p * gamma) * std::pow(1 - gamma*gamma, p - 1);
}

std::vector<double> TestFunction::breakpoints() const
{
    std::vector<double> res{0.0};
    for(const auto& pc: pieces(*this))
        res.push_back(pc.b);
    return res;
}

std::complex<double> TestFunction::value(const steady::FlowParams& p, const steady::PointXY& pt) const
{
    checkCompatible(p, *this);
    std::complex<double> v = Psi(steady::theta_extended(p, pt), steady::coords(p, pt).gamma);
    if(modulational())
        v *= std::polar(1.0, -modulation() * pt.x);
    return v;
}

//------ quadratic forms ------//

double form_b1(const steady::FlowParams& p, const TestFunction& t)
{
    checkCompatible(p, t);
    const double c = shiftOf(t);
    const poly::QuadRule gl = poly::gauss_legendre(64, -1, 1);
    double total = 0;
    for(const auto& pc: pieces(t)) {
        // theta-integrals of |T'|^2, |T|^2 and Re T over the piece
        double I1 = 0, I0 = 0, IR = 0;
        const double half = 0.5 * (pc.b - pc.a), mid = 0.5 * (pc.b + pc.a);
        for(std::size_t i = 0; i < gl.size(); i++) {
            const double th = mid + half * gl.nodes[i], w = half * gl.weights[i];
            const std::complex<double> T = pc.T(th), dT = pc.dT(th);
            I1 += w * std::norm(dT);
            I0 += w * std::norm(T);
            IR += w * T.real();
        }
        // gamma-integrals of the separated radial factors, in closed form:
        // int_{-1}^{1} gamma^{2j} (1-gamma^2)^q dgamma = B(j+1/2, q+1)
        const double pe = pc.p;
        auto mom = [](int j, double q) { return boost::math::beta(j + 0.5, q + 1); };
        const double Ga = mom(0, 2*pe - 1);
        const double Gb = 4*pe*pe * mom(1, 2*pe - 1);
        const double Gc = mom(0, 2*pe);
        const double Gd = mom(0, pe);
        total += I1 * Ga + I0 * Gb - 2 * (I0 * Gc + 2 * c * IR * Gd + c*c * 2 * (pc.b - pc.a));
    }
    return total;
}

double form_b2(const steady::FlowParams& p, const TestFunction& t, const CurveQuadrature& q)
{
    checkCompatible(p, t);
    const double r0 = steady::rho0(p), margin = q.rho_margin + 1e-10;
    double total = 0;
    if(p.epsilon > 0 && r0 > margin)
        for(int cell = 0; cell < p.m; cell++)
            total += levelIntegral(p, t, q, -r0 + margin, r0 - margin, cell, LevelCurve::Both);
    if(!t.modulational()) {
        // untrapped levels rho0 < rho < infinity; beyond rho0 + 40 the weight e^{-2 rho}
        // is below 1e-34 relative and the levels are not sampled
        const double lo = r0 + (p.epsilon > 0 ? margin : 0), hi = r0 + 40;
        for(auto br: {LevelCurve::Upper, LevelCurve::Lower})
            total += levelIntegral(p, t, q, lo, hi, 0, br);
    }
    // the integrand is nonnegative; a negative total is pure rounding noise of a zero value
    return std::max(0., total);
}

double form_b1_modulational(double alpha)
{
    if(!(alpha > 0 && alpha <= 0.5))
        throw InvalidParams("form_b1_modulational requires 0 < alpha <= 1/2");
    const double I = std::sqrt(PI) * std::tgamma(alpha + 1) / std::tgamma(alpha + 1.5);
    return 2*PI * (alpha*(alpha+1) - 2) * I;
}

double hatA_quadform(const steady::FlowParams& p, const TestFunction& t, const CurveQuadrature& q)
{
    return form_b1(p, t) + form_b2(p, t, q);
}

double coalescence_check(const steady::FlowParams& p)
{
    const TestFunction t(TestFunction::TestEven, 1);
    return hatA_quadform(t.params(p.epsilon), t);
}

//------ trapped-region geometry ------//

TrappedMeridian trapped_meridian(double eps, double theta)
{
    if(!(eps >= 0 && eps < 1))
        throw InvalidParams("epsilon must be in [0,1)");
    // with r = sqrt(1-gamma^2): trapped iff a r^2 - 2 eps c r + (2 eps - 1) > 0
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = 1 - eps*eps*s*s;
    const double disc = eps*eps*c*c - a*(2*eps - 1);
    TrappedMeridian res;
    if(disc < 0) {           // no real roots: the whole meridian is trapped
        res.inner = 1;
        return res;
    }
    const double sq = std::sqrt(disc);
    // roots in a cancellation-free form
    const double q = eps*c + (c >= 0 ? sq : -sq);
    double rp, rm;
    if(q == 0) {
        rp = rm = 0;
    } else {
        const double r1 = q / a, r2 = (2*eps - 1) / q;
        rp = std::max(r1, r2);
        rm = std::min(r1, r2);
    }
    auto gammaOf = [](double r) { r = std::min(1.0, std::max(0.0, r)); return std::sqrt((1-r)*(1+r)); };
    res.inner = rp <= 0 ? 1.0 : gammaOf(rp);
    res.outer = rm <= 0 ? 1.0 : gammaOf(rm);
    if(rp <= 0) res.outer = 1;
    return res;
}

namespace {

/// int over the trapped part of a meridian of a radial function given by its primitive J(G)=int_0^G
template<typename Prim>
double meridianIntegral(double eps, double theta, Prim J)
{
    const TrappedMeridian tm = trapped_meridian(eps, theta);
    return 2 * (J(tm.inner) + J(1.0) - J(tm.outer));
}

/// 2pi-integral in theta split at the meridians where the trapped set changes topology
template<typename F>
double thetaIntegral(double eps, F f)
{
    std::vector<double> cuts{0.0};
    if(eps > 0.5) {
        const double cs = std::sqrt((1+eps) * (2*eps - 1) / (2*eps*eps));
        if(cs < 1) {
            const double ts = std::acos(cs);
            cuts.push_back(ts);
            cuts.push_back(2*PI - ts);
        }
    }
    cuts.push_back(2*PI);
    double total = 0;
    for(std::size_t i = 0; i + 1 < cuts.size(); i++)
        total += integrate(f, cuts[i], cuts[i+1], 1e-12);
    return total;
}

}  // namespace

double form_b3(const steady::FlowParams& p)
{
    const double eps = p.epsilon;
    if(eps == 0)
        return 0;
    // J(G) = int_0^G (1-g^2)^{1/3} dg = B(1/2, 4/3) I_{G^2}(1/2, 4/3) / 2
    const double B = boost::math::beta(0.5, 4./3);
    auto J = [B](double G) { return G <= 0 ? 0.0 : 0.5 * B * boost::math::ibeta(0.5, 4./3, std::min(1.0, G*G)); };
    const double I = thetaIntegral(eps, [&](double th) {
        const double s = std::sin(th/3);
        return s*s * meridianIntegral(eps, th, J);
    });
    return 4 * I;
}

double form_b4(const steady::FlowParams& p)
{
    const double eps = p.epsilon;
    if(eps == 0)
        return 0;
    auto J = [](double G) { return G - G*G*G / 3; };
    const double I = thetaIntegral(eps, [&](double th) {
        const double c = std::cos(th);
        return c*c * meridianIntegral(eps, th, J);
    });
    return 2 * I;
}

double trapped_ellipse_eta2(double eps, double xi)
{
    return (1 - eps) / (1 + eps) - (xi - eps) * (xi - eps) / (1 - eps*eps);
}

bool ellipse_nesting(double eps1, double eps2, int n_samples)
{
    if(!(eps1 >= 0 && eps1 < 1 && eps2 >= 0 && eps2 < 1))
        throw InvalidParams("ellipse_nesting: epsilon values must lie in [0,1)");
    if(n_samples < 2)
        throw InvalidParams("ellipse_nesting: need at least two samples");
    const double tol = 1e-14;
    for(int i = 0; i < n_samples; i++) {
        const double xi = -1 + 2.0 * i / (n_samples - 1);
        const double e1 = trapped_ellipse_eta2(eps1, xi), e2 = trapped_ellipse_eta2(eps2, xi);
        const double circle = 1 - xi*xi;
        if(e1 > circle + tol || e2 > circle + tol)
            return false;          // boundary leaves the unit disk
        if(e2 >= 0 && e1 < e2 - tol)
            return false;          // ellipse of eps2 not enclosed by that of eps1
    }
    return true;
}

}  // namespace forms
}  // namespace catseye
