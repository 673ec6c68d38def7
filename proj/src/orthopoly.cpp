#include "catseye/orthopoly.h"
#include "catseye/errors.h"
#include <cmath>
#include <string>
#include <Eigen/Dense>
#include <algorithm>

namespace catseye {
namespace poly {

namespace {

/// pi^{-1/4}
const double PI_M14 = 0.75112554446494248286;

/// double factorial (2k-1)!!
double oddFactorial(int k)
{
    double r = 1;
    for(int i = 1; i <= k; i++) r *= 2 * i - 1;
    return r;
}

/** Legendre polynomial and its derivative (for Newton iteration on the nodes) */
void legendreWithDeriv(int n, double x, double& val, double& der)
{
    double p0 = 1, p1 = x;
    if(n == 0) { val = 1; der = 0; return; }
    for(int k = 2; k <= n; k++) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    val = p1;
    der = n * (x * p1 - p0) / (x * x - 1);
}

QuadRule gaussLegendreUnit(int n)
{
    QuadRule r;
    r.kind = QuadRule::GaussLegendre;
    r.nodes.resize(n);
    r.weights.resize(n);
    for(int i = 0; i < (n + 1) / 2; i++) {
        // Newton iteration from the Chebyshev-like initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5)), val, der;
        for(int iter = 0; iter < 100; iter++) {
            legendreWithDeriv(n, x, val, der);
            double dx = val / der;
            x -= dx;
            if(std::fabs(dx) < 1e-16) break;
        }
        legendreWithDeriv(n, x, val, der);
        double w = 2 / ((1 - x * x) * der * der);
        r.nodes[i] = -x;          r.weights[i] = w;
        r.nodes[n - 1 - i] = x;   r.weights[n - 1 - i] = w;
    }
    if(n % 2 == 1) r.nodes[n / 2] = 0;
    return r;
}

/** Gauss-Hermite rule: initial nodes from the Golub-Welsch eigenvalue problem for the
    Jacobi matrix, polished by Newton iteration on the normalized recurrence;
    weights from the Christoffel function w_i exp(x_i^2) = 1 / sum_{k<n} H_k(x_i)^2,
    evaluated with the orthonormal Hermite functions (which never overflow) */
QuadRule gaussHermite(int n)
{
    QuadRule r;
    r.kind = QuadRule::GaussHermite;
    r.nodes.resize(n);
    r.weights.resize(n);
    r.scaled_weights.resize(n);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), sub(std::max(n - 1, 1));
    for(int k = 1; k < n; k++) sub(k - 1) = std::sqrt(0.5 * k);
    if(n > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
        for(int i = 0; i < n; i++) r.nodes[i] = es.eigenvalues()(i);
    } else
        r.nodes[0] = 0;
    for(int i = 0; i < n; i++) {
        double z = r.nodes[i];
        for(int iter = 0; iter < 20; iter++) {
            // ratio p_n / p_n' from the orthonormal recurrence; p_n' = sqrt(2n) p_{n-1}
            std::vector<double> h = hermite_functions(n, z);
            if(h[n - 1] == 0) break;
            double dz = h[n] / (std::sqrt(2. * n) * h[n - 1]);
            z -= dz;
            if(std::fabs(dz) <= 1e-15 * std::fmax(1., std::fabs(z))) break;
        }
        r.nodes[i] = z;
    }
    // enforce exact symmetry
    for(int i = 0; i < n / 2; i++) {
        double z = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
    }
    if(n % 2 == 1) r.nodes[n / 2] = 0;
    for(int i = 0; i < n; i++) {
        std::vector<double> h = hermite_functions(n - 1, r.nodes[i]);
        double s = 0;
        for(double v: h) s += v * v;
        // s = exp(-x^2) sum p_k^2, so w = 1/sum p_k^2 = exp(-x^2)/s
        r.scaled_weights[i] = 1 / s;
        r.weights[i] = std::exp(-r.nodes[i] * r.nodes[i]) / s;
    }
    return r;
}

}  // internal namespace

void PolyFamily::validate() const
{
    if(degree < 0)
        throw InvalidParams("PolyFamily: negative degree");
    if(kind == AssocLegendre && (order < 0 || order > degree))
        throw InvalidParams("PolyFamily: associated Legendre order must satisfy 0 <= k <= n");
    if(kind == Gegenbauer && !(beta > -0.5))
        throw InvalidParams("PolyFamily: Gegenbauer parameter must exceed -1/2");
}

double PolyFamily::operator()(double x) const
{
    switch(kind) {
        case Legendre:        return eval_legendre(degree, x);
        case AssocLegendre:   return eval_assoc_legendre(degree, order, x);
        case Gegenbauer:      return eval_gegenbauer(degree, beta, x);
        case HermiteFunction: return eval_hermite_function(degree, x);
    }
    return 0;
}

double eval_legendre(int n, double x)
{
    double p0 = 1, p1 = x;
    if(n == 0) return 1;
    for(int k = 2; k <= n; k++) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double eval_assoc_legendre(int n, int k, double x)
{
    if(k < 0 || k > n)
        throw InvalidParams("eval_assoc_legendre: need 0 <= k <= n");
    if(k == 0) return eval_legendre(n, x);
    // d^k/dx^k L_n = (2k-1)!! C_{n-k}^{k+1/2}
    double w = std::fmax(0., (1 - x) * (1 + x));
    return std::pow(w, 0.5 * k) * oddFactorial(k) * eval_gegenbauer(n - k, k + 0.5, x);
}

double eval_gegenbauer(int n, double beta, double x)
{
    if(n < 0) return 0;
    if(n == 0) return 1;
    double c0 = 1, c1 = 2 * beta * x;
    for(int k = 2; k <= n; k++) {
        double c2 = (2 * x * (k + beta - 1) * c1 - (k + 2 * beta - 2) * c0) / k;
        c0 = c1;
        c1 = c2;
    }
    return c1;
}

double eval_gegenbauer_deriv(int n, double beta, double x, int order)
{
    double factor = 1;
    for(int j = 0; j < order; j++) {
        if(n - j <= 0) return 0;
        factor *= 2 * (beta + j);
    }
    return factor * eval_gegenbauer(n - order, beta + order, x);
}

std::vector<double> hermite_functions(int nmax, double y)
{
    std::vector<double> h(nmax + 1);
    // run the recurrence on the polynomial part, rescaling when the values grow large;
    // all stored values share the common factor exp(logscale)
    double logscale = -0.5 * y * y;
    double hm1 = 0, h0 = PI_M14;
    h[0] = h0;
    for(int n = 0; n < nmax; n++) {
        double hp1 = y * std::sqrt(2. / (n + 1)) * h0 - std::sqrt(double(n) / (n + 1)) * hm1;
        hm1 = h0;
        h0 = hp1;
        double a = std::fabs(h0);
        if(a > 1e100) {
            hm1 /= a;
            h0 /= a;
            for(int j = 0; j <= n; j++) h[j] /= a;
            logscale += std::log(a);
        }
        h[n + 1] = h0;
    }
    for(int n = 0; n <= nmax; n++) {
        if(h[n] != 0)
            h[n] = std::copysign(std::exp(logscale + std::log(std::fabs(h[n]))), h[n]);
    }
    return h;
}

double eval_hermite_function(int n, double y)
{
    return hermite_functions(n, y)[n];
}

QuadRule make_rule(QuadRule::Kind kind, int npts, double period)
{
    if(npts < 1)
        throw InvalidParams("make_rule: need at least one node");
    switch(kind) {
        case QuadRule::GaussLegendre:
            return gaussLegendreUnit(npts);
        case QuadRule::GaussHermite:
            return gaussHermite(npts);
        case QuadRule::UniformTrapezoid: {
            QuadRule r;
            r.kind = kind;
            r.nodes.resize(npts);
            r.weights.assign(npts, period / npts);
            for(int i = 0; i < npts; i++) r.nodes[i] = period * i / npts;
            return r;
        }
    }
    throw InvalidParams("make_rule: unknown rule kind");
}

QuadRule gauss_legendre(int npts, double a, double b)
{
    QuadRule r = gaussLegendreUnit(npts);
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for(int i = 0; i < npts; i++) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

QuadRule composite_gauss_legendre(int npanels, int npts, double a, double b)
{
    QuadRule unit = gaussLegendreUnit(npts), r;
    r.kind = QuadRule::GaussLegendre;
    double h = (b - a) / npanels;
    for(int p = 0; p < npanels; p++) {
        double mid = a + (p + 0.5) * h;
        for(int i = 0; i < npts; i++) {
            r.nodes.push_back(mid + 0.5 * h * unit.nodes[i]);
            r.weights.push_back(0.5 * h * unit.weights[i]);
        }
    }
    return r;
}

}  // namespace poly
}  // namespace catseye
