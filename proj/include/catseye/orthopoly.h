/** \file    orthopoly.h
    \brief   Classical orthogonal polynomials, Hermite functions and Gauss quadrature rules
*/
#pragma once
#include <vector>

namespace catseye {
namespace poly {

/** Identifies a polynomial family member (used in eigenfunction descriptors) */
struct PolyFamily {
    enum Kind { Legendre, AssocLegendre, Gegenbauer, HermiteFunction } kind = Legendre;
    int degree = 0;
    int order = 0;        ///< for AssocLegendre (0 <= order <= degree)
    double beta = 0.5;    ///< for Gegenbauer (beta > -1/2)
    void validate() const;
    /// evaluate the family member at x
    double operator()(double x) const;
};

/// Legendre polynomial L_n(x) by the three-term recurrence
double eval_legendre(int n, double x);

/// associated function L_{n,k}(x) = (1-x^2)^{k/2} d^k/dx^k L_n(x)  (no Condon-Shortley phase)
double eval_assoc_legendre(int n, int k, double x);

/// Gegenbauer polynomial C_n^beta(x) by the standard recurrence
double eval_gegenbauer(int n, double beta, double x);

/** derivative of given order of C_n^beta, using d/dx C_n^beta = 2 beta C_{n-1}^{beta+1} */
double eval_gegenbauer_deriv(int n, double beta, double x, int order);

/** orthonormal Hermite function H_n(y) = exp(-y^2/2) Hn(y) / (pi^{1/4} sqrt(2^n n!)) */
double eval_hermite_function(int n, double y);

/** all Hermite functions H_0..H_nmax at y, computed by the normalized recurrence
    with rescaling, so no overflow/underflow occurs before the final multiplication */
std::vector<double> hermite_functions(int nmax, double y);

/** A quadrature rule: sum_i weights[i] f(nodes[i]) approximates the integral */
struct QuadRule {
    enum Kind { GaussLegendre, GaussHermite, UniformTrapezoid } kind = GaussLegendre;
    std::vector<double> nodes, weights;
    /** For GaussHermite: weights multiplied by exp(nodes^2); these integrate
        functions that already contain the Gaussian decay (e.g. products of Hermite
        functions).  Empty for other kinds. */
    std::vector<double> scaled_weights;
    std::size_t size() const { return nodes.size(); }
};

/** Construct a rule with npts nodes:
    GaussLegendre on [-1,1], GaussHermite on R with weight exp(-y^2),
    UniformTrapezoid on [0, period) (default period 2pi; pass 2 m pi for m cells) */
QuadRule make_rule(QuadRule::Kind kind, int npts, double period = 2 * 3.14159265358979323846);

/** Gauss-Legendre rule mapped to the interval [a,b] */
QuadRule gauss_legendre(int npts, double a, double b);

/** Composite Gauss-Legendre rule: npanels equal panels of order npts on [a,b] */
QuadRule composite_gauss_legendre(int npanels, int npts, double a, double b);

}  // namespace poly
}  // namespace catseye
