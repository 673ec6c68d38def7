/** \file    galerkin.h
    \brief   Hermite-Fourier spectral discretization of the co-periodic operator
             A~_eps and of the modulational linearized Euler operator

    Co-periodic basis (indices 0 <= n <= 2N, -N <= k <= N, lexicographic in (n,k)):
    psi_{n,0} = (2pi)^{-1/2} int_0^y H_n,  psi_{n,k>0} = pi^{-1/2} H_n cos(kx),
    psi_{n,k<0} = pi^{-1/2} H_n sin(|k|x), with H_n the orthonormal Hermite functions.
    Modulational basis: psi~_{n,k} = (2pi)^{-1/2} e^{ikx} H_n(y).
*/
#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace catseye {
namespace galerkin {

/** Truncation and basis selection */
struct BasisSpec {
    enum Problem { CoPeriodicBasis, ModulationalBasis } problem = CoPeriodicBasis;
    int N = 7;          ///< truncation: 0 <= n <= 2N, -N <= k <= N
    double alpha = 0;   ///< Floquet exponent for the modulational basis
    /// number of basis functions (2N+1)^2
    int size() const { return (2 * N + 1) * (2 * N + 1); }
    /// lexicographic position of (n, k)
    int index(int n, int k) const { return n * (2 * N + 1) + (k + N); }
};

/** Quadrature used for the matrix entries.
    x: uniform trapezoid with nx nodes (spectrally exact for the trigonometric
    integrands); y: composite Gauss-Legendre on [-ymax, ymax] */
struct QuadSpec {
    int nx = 128;           ///< trapezoid nodes in x
    int ny_panels = 120;    ///< number of y panels
    int ny_order = 16;      ///< Gauss-Legendre order per panel
    double ymax = 30;       ///< half-width of the y interval
};

/** Metadata attached to a computed spectrum */
struct SpectrumMeta {
    double epsilon = 0, alpha = 0;
    int N = 0;
    double symmetry_defect = 0;   ///< max |A - A^T| (or Hermiticity defect of D)
    double max_residual = 0;      ///< largest relative eigen-residual
};

/** Ordered eigenvalues with optional eigenvectors (columns) and cluster ids:
    eigenvalues closer than 1e-8 (relative to the matrix scale) share a cluster id */
struct SpectrumTable {
    std::vector<std::complex<double>> eigenvalues;
    Eigen::MatrixXcd vectors;
    std::vector<int> cluster;
    SpectrumMeta meta;
};

/// the antiderivatives F_n(y) = int_0^y H_n for n = 0..nmax (exact recurrence)
std::vector<double> hermite_antiderivatives(int nmax, double y);

/** Assemble the symmetric matrix of <A~ psi_i, psi_j> =
    int grad psi_i . grad psi_j - int g' psi_i psi_j + (1/8pi) int g' psi_i int g' psi_j.
    Throws QuadratureUnderResolved if the symmetry defect exceeds 1e-10. */
Eigen::MatrixXd assemble_Atilde(double eps, int N, const QuadSpec& quad = QuadSpec());

/** Matrices of the modulational generalized eigenproblem */
struct ModulationalMatrices {
    Eigen::MatrixXcd M;   ///< M[(1),(2)] = (M psi_1, psi_2), M psi = u.grad_a(-Lap_a psi) - g' u.grad_a psi
    Eigen::MatrixXcd D;   ///< D[(1),(2)] = (-Lap_a psi_1, psi_2), Hermitian positive definite
};

/** Assemble M and D for 0 < alpha <= 1/2 */
ModulationalMatrices assemble_modulational(double eps, double alpha, int N,
    const QuadSpec& quad = QuadSpec());

/** All eigenvalues of a symmetric matrix in ascending order (Eigen's self-adjoint solver).
    Throws ConvergenceFailure if the solver fails or a backward error exceeds 1e-10 ||A||. */
SpectrumTable solve_symmetric(const Eigen::MatrixXd& A, bool wantVectors = false);

/** Solve M^* x = sigma D^* x (conjugate transposes) by Cholesky reduction of D^*.
    Eigenvalues sorted by descending real part.  Throws SingularD if D is not
    positive definite, ConvergenceFailure if a residual check fails. */
SpectrumTable solve_generalized(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& D,
    bool wantVectors = false);

/** One row of a growth-rate sweep: positive real parts of sigma, descending */
struct GrowthRow {
    double epsilon;
    std::vector<double> rates;        ///< all positive real parts, descending
    std::vector<double> real_rates;   ///< those of purely real sigma (|Im| <= 1e-8 max(1,|sigma|))
};

/** Positive real parts of the modulational spectrum over a grid of epsilon.
    Rates below rate_floor are discarded as numerical noise of the neutral spectrum. */
std::vector<GrowthRow> growth_rate_sweep(double alpha, const std::vector<double>& eps_grid,
    int N, const QuadSpec& quad = QuadSpec(), double rate_floor = 1e-6);

/** Landmarks of the two real unstable branches that exist at small epsilon */
struct GrowthLandmarks {
    int unstable_at_first = 0;    ///< number of real unstable sigma at the first grid point
    bool has_crossing = false;    ///< the lower branch vanishes inside the grid
    double crossing_lo = 0, crossing_hi = 0;   ///< final bisection bracket
    double crossing = 0;          ///< midpoint of the bracket
    double max_rate = 0;          ///< maximum over the grid of the upper branch
    double max_rate_eps = 0;      ///< grid point where it is attained
};

/** Extract the landmarks from a tabulated sweep: the crossing of the lower real branch
    is bracketed by the first grid interval where fewer than two real unstable sigma
    remain, then refined by `bisection_steps` additional eigensolves */
GrowthLandmarks growth_landmarks(double alpha, const std::vector<GrowthRow>& rows, int N,
    int bisection_steps = 4, const QuadSpec& quad = QuadSpec(), double rate_floor = 1e-6);

}  // namespace galerkin
}  // namespace catseye
