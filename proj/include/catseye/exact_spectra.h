/** \file    exact_spectra.h
    \brief   Closed-form eigenvalues and eigenfunctions of the associated eigenvalue
             problems -Lap psi = lambda g'(psi_eps) (psi - P psi)

    In the variables (theta, gamma) every eigenfunction separates as
    R(gamma) T(nu theta) with R = (1-gamma^2)^{s/2} C_d^{s+1/2}(gamma), s = |nu|,
    and eigenvalue lambda = (d+s)(d+s+1)/2.  The three problem classes differ only
    in the admissible frequencies nu:
      - co-periodic: integer nu (Legendre / associated Legendre functions);
      - multi-periodic (period 2 m pi): nu in Z/m;
      - modulational (Floquet exponent alpha): nu in Z + alpha, times e^{-i alpha x}.
*/
#pragma once
#include "catseye/steady_fields.h"
#include <complex>
#include <functional>
#include <vector>

namespace catseye {
namespace spectra {

/** Selection of the eigenvalue problem */
struct Problem {
    enum Kind { CoPeriodic, MultiPeriodic, Modulational } kind = CoPeriodic;
    int m = 1;          ///< period multiplier (MultiPeriodic, m >= 2)
    double alpha = 0;   ///< Floquet exponent (Modulational, 0 < alpha <= 1/2)
    void validate() const;
    /// the flow parameters matching this problem at a given epsilon
    steady::FlowParams params(double epsilon) const;
};

/** Angular factor of an eigenfunction */
enum class Trig { ZeroMode, Cosine, Sine, Exponential };

/** Symbolic descriptor of one closed-form eigenfunction.
    - CoPeriodic and the integer branch (residue 0) of MultiPeriodic:
      n >= 1; ZeroMode -> L_n(gamma) - L_n(0); Cosine/Sine with mode j in [1,n] ->
      L_{n,j}(gamma) cos/sin(j theta).
    - MultiPeriodic residue i in [1,m-1]: n >= 0, mode k = (n-j) m + i with j in [0,n] ->
      (1-gamma^2)^{k/2m} C_j^{k/m+1/2}(gamma) cos/sin(k theta / m).
    - Modulational sign +1: n >= 0, mode j in [0,n] ->
      (1-gamma^2)^{(j+alpha)/2} C_{n-j}^{j+alpha+1/2} e^{i j theta} e^{i alpha (theta - x)};
      sign -1: n >= 1, j in [1,n] ->
      (1-gamma^2)^{(j-alpha)/2} C_{n-j}^{j-alpha+1/2} e^{-i j theta} e^{i alpha (theta - x)}. */
struct Descriptor {
    Problem problem;
    int residue = 0;     ///< MultiPeriodic residue i (0 = integer branch)
    int sign = +1;       ///< Modulational branch
    int n = 1;           ///< eigenvalue index
    int mode = 0;        ///< j or k as documented above
    Trig trig = Trig::ZeroMode;

    double lambda() const;         ///< eigenvalue
    double frequency() const;      ///< theta-frequency nu of the full perturbation
    double exponent() const;       ///< s = |nu|
    int gegenbauer_degree() const; ///< degree d of C_d^{s+1/2}
    double prefactor() const;      ///< (2s-1)!! for associated Legendre functions, else 1
    void validate() const;         ///< throws InvalidParams if inconsistent
};

/** An eigenvalue with its multiplicity and a basis of its eigenspace */
struct EigenPair {
    double lambda = 0;
    int multiplicity = 0;                ///< equals basis.size()
    std::vector<Descriptor> basis;
};

/** All eigenvalues <= lambda_max, ascending, with multiplicities.
    Values of different closed-form branches closer than 1e-12 are merged. */
std::vector<EigenPair> list_eigenvalues(const Problem& problem, double lambda_max);

/** The eigenfunction as a function of (theta, gamma), where theta is the angle
    continued across the m cells (for Modulational: the full perturbation
    Psi~ e^{i alpha theta} without the e^{-i alpha x} factor) */
std::complex<double> eigenfunction_theta_gamma(const Descriptor& d, double theta, double gamma);

/** Value at a point of the cylinder; modulational eigenfunctions include the
    factor e^{i alpha (theta - x)}.  Throws InconsistentProblem if the descriptor's
    problem does not match p (m, alpha). */
std::complex<double> eigenfunction_value(const steady::FlowParams& p, const Descriptor& d,
    const steady::PointXY& pt);

/** A tensor rule on the period cell(s) that integrates g'(psi_eps) f dx dy:
    uniform trapezoid in x over [0, 2 m pi), composite Gauss-Legendre in y on [-ymax, ymax],
    with g' folded into the weights */
struct Rule2D {
    std::vector<steady::PointXY> points;
    std::vector<double> weights;
    std::vector<bool> tail;   ///< node belongs to the outermost y-panels
    int m = 1;
};

Rule2D make_weighted_rule(const steady::FlowParams& p, int nx = 128, int ny_panels = 80,
    int ny_order = 16, double ymax = 40);

/** Projection value and its normalization int g' dx dy = 8 m pi */
struct ProjectionValue {
    double value = 0;
    double normalization = 0;
};

/** P f = (1/(8 m pi)) int g' f dx dy.  Throws QuadratureDiverged if the outermost
    y-panels contribute more than 1e-9 of the total absolute mass. */
ProjectionValue projection_P(const steady::FlowParams& p,
    const std::function<double(const steady::PointXY&)>& f, const Rule2D& rule);

/** Grid of (theta, gamma) nodes for residual checks: theta uniform (cell-centred)
    over [0, 2 m pi), gamma cell-centred in (-1, 1) */
struct ThetaGammaGrid {
    std::vector<double> theta, gamma;
};

ThetaGammaGrid make_theta_gamma_grid(const steady::FlowParams& p, int ntheta = 64, int ngamma = 64);

/** max over the grid of |-Lap psi - lambda g'(psi - P psi)| / max |lambda g' psi|,
    where -Lap psi = (g'/2) ( -Psi_thth/(1-gamma^2) - ((1-gamma^2) Psi_gamma)_gamma )
    is evaluated from closed-form derivatives of the separated factors, g' at the
    physical point obtained by the inverse coordinate map, and P psi by quadrature. */
double residual_norm(const steady::FlowParams& p, const Descriptor& d, const ThetaGammaGrid& grid);

/// largest residual over all basis functions of an eigenpair
double residual_norm(const steady::FlowParams& p, const EigenPair& pair, const ThetaGammaGrid& grid);

}  // namespace spectra
}  // namespace catseye
