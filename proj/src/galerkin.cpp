#include "catseye/galerkin.h"
#include "catseye/errors.h"
#include "catseye/orthopoly.h"
#include "catseye/parallel.h"
#include "catseye/steady_fields.h"
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace catseye {
namespace galerkin {

namespace {  // internal routines

typedef std::complex<double> cplx;

/// pi^{-1/4}
const double PI_M14 = 0.75112554446494248286;

/** Exact Hermite-function Gram matrix of derivatives, <H_n', H_m'>:
    H_n' = sqrt(n/2) H_{n-1} - sqrt((n+1)/2) H_{n+1} gives a pentadiagonal-like pattern */
double hermiteDerivGram(int n, int m)
{
    if(n == m) return n + 0.5;
    if(m == n - 2) return -0.5 * std::sqrt(double(n) * (n - 1));
    if(m == n + 2) return -0.5 * std::sqrt(double(n + 1) * (n + 2));
    return 0;
}

/// values and derivatives of H_0..H_nmax at y
void hermiteWithDeriv(int nmax, double y, std::vector<double>& h, std::vector<double>& dh)
{
    h = poly::hermite_functions(nmax + 1, y);
    dh.resize(nmax + 1);
    for(int n = 0; n <= nmax; n++)
        dh[n] = (n > 0 ? std::sqrt(0.5 * n) * h[n - 1] : 0) - std::sqrt(0.5 * (n + 1)) * h[n + 1];
    h.resize(nmax + 1);
}

/** Assign cluster ids to a sorted list: consecutive values closer than tol share an id */
std::vector<int> clusterIds(const std::vector<cplx>& vals, double tol)
{
    std::vector<int> ids(vals.size());
    int id = 0;
    for(std::size_t i = 0; i < vals.size(); i++) {
        if(i > 0 && std::abs(vals[i] - vals[i - 1]) > tol) id++;
        ids[i] = id;
    }
    return ids;
}

}  // internal namespace

std::vector<double> hermite_antiderivatives(int nmax, double y)
{
    std::vector<double> F(nmax + 1);
    std::vector<double> h  = poly::hermite_functions(nmax, y);
    std::vector<double> h0 = poly::hermite_functions(nmax, 0.);
    // F_0 = pi^{-1/4} int_0^y exp(-t^2/2) dt
    F[0] = PI_M14 * std::sqrt(M_PI / 2) * std::erf(y / M_SQRT2);
    // from H_n(y) - H_n(0) = sqrt(n/2) F_{n-1} - sqrt((n+1)/2) F_{n+1}
    for(int n = 0; n < nmax; n++) {
        double prev = n > 0 ? std::sqrt(0.5 * n) * F[n - 1] : 0;
        F[n + 1] = (prev - h[n] + h0[n]) / std::sqrt(0.5 * (n + 1));
    }
    return F;
}

Eigen::MatrixXd assemble_Atilde(double eps, int N, const QuadSpec& quad)
{
    if(N < 1)
        throw InvalidParams("assemble_Atilde: truncation N must be >= 1");
    steady::FlowParams params(eps);
    BasisSpec basis;
    basis.N = N;
    const int nmax = 2 * N, nk = 2 * N + 1, dim = basis.size();
    const int nx = quad.nx;

    // trigonometric factors t_k(x): k=0 -> 1/sqrt(2pi), k>0 -> cos/sqrt(pi), k<0 -> sin/sqrt(pi)
    poly::QuadRule xrule = poly::make_rule(poly::QuadRule::UniformTrapezoid, nx);
    Eigen::MatrixXd trig(nx, nk);
    for(int i = 0; i < nx; i++) {
        double x = xrule.nodes[i];
        for(int k = -N; k <= N; k++)
            trig(i, k + N) = k == 0 ? 1 / std::sqrt(2 * M_PI) :
                k > 0 ? std::cos(k * x) / std::sqrt(M_PI) : std::sin(-k * x) / std::sqrt(M_PI);
    }

    poly::QuadRule yrule = poly::composite_gauss_legendre(
        quad.ny_panels, quad.ny_order, -quad.ymax, quad.ymax);
    const int ny = yrule.size();

    // per y-node: T_{kl}(y) = int g' t_k t_l dx,  S_k(y) = int g' t_k dx, radial factors
    std::vector<Eigen::MatrixXd> Wparts(ny);
    std::vector<Eigen::VectorXd> vparts(ny);
    parallel_for(ny, [&](std::size_t j) {
        double y = yrule.nodes[j];
        Eigen::VectorXd gw(nx);
        for(int i = 0; i < nx; i++)
            gw(i) = xrule.weights[i] * steady::gprime(params, {xrule.nodes[i], y});
        Eigen::MatrixXd T = trig.transpose() * gw.asDiagonal() * trig;   // nk x nk
        Eigen::VectorXd S = trig.transpose() * gw;
        // radial factors: F_n for k=0, H_n otherwise
        std::vector<double> H = poly::hermite_functions(nmax, y);
        std::vector<double> F = hermite_antiderivatives(nmax, y);
        Eigen::VectorXd R(dim);
        for(int n = 0; n <= nmax; n++)
            for(int k = -N; k <= N; k++)
                R(basis.index(n, k)) = k == 0 ? F[n] : H[n];
        // W_j(a,b) = T(k_a,k_b) R_a R_b
        Eigen::MatrixXd Wj(dim, dim);
        for(int a = 0; a < dim; a++) {
            int ka = a % nk;
            for(int b = 0; b < dim; b++)
                Wj(a, b) = T(ka, b % nk) * R(a) * R(b);
        }
        Eigen::VectorXd vj(dim);
        for(int a = 0; a < dim; a++) vj(a) = S(a % nk) * R(a);
        Wparts[j] = yrule.weights[j] * Wj;
        vparts[j] = yrule.weights[j] * vj;
    });
    // ordered reduction, independent of scheduling
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    for(int j = 0; j < ny; j++) {
        W += Wparts[j];
        v += vparts[j];
    }

    // exact gradient Gram matrix
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim, dim);
    for(int n = 0; n <= nmax; n++)
        for(int m = 0; m <= nmax; m++)
            for(int k = -N; k <= N; k++) {
                double val = k == 0 ? (n == m ? 1. : 0.) :
                    (n == m ? double(k) * k : 0.) + hermiteDerivGram(n, m);
                if(val != 0) G(basis.index(n, k), basis.index(m, k)) = val;
            }

    Eigen::MatrixXd A = G - W + (1 / (8 * M_PI)) * v * v.transpose();
    double defect = (A - A.transpose()).cwiseAbs().maxCoeff();
    if(defect > 1e-10)
        throw QuadratureUnderResolved("assemble_Atilde: symmetry defect " + std::to_string(defect));
    return 0.5 * (A + A.transpose());
}

ModulationalMatrices assemble_modulational(double eps, double alpha, int N, const QuadSpec& quad)
{
    if(!(alpha > 0 && alpha <= 0.5))
        throw InvalidParams("assemble_modulational: alpha must lie in (0, 1/2]");
    if(N < 1)
        throw InvalidParams("assemble_modulational: truncation N must be >= 1");
    steady::FlowParams params(eps);
    BasisSpec basis;
    basis.N = N;
    basis.problem = BasisSpec::ModulationalBasis;
    basis.alpha = alpha;
    const int nmax = 2 * N, nk = 2 * N + 1, dim = basis.size();
    const int nx = quad.nx;
    const int nd = 2 * nk - 1;   // differences k1 - k2 in [-2N, 2N]
    poly::QuadRule xrule = poly::make_rule(poly::QuadRule::UniformTrapezoid, nx);
    poly::QuadRule yrule = poly::composite_gauss_legendre(
        quad.ny_panels, quad.ny_order, -quad.ymax, quad.ymax);
    const int ny = yrule.size();

    std::vector<Eigen::MatrixXcd> parts(ny);
    parallel_for(ny, [&](std::size_t j) {
        double y = yrule.nodes[j];
        // Fourier coefficients c[f]_d = (1/2pi) int f e^{i d x} dx of u1, u2, u1 g', u2 g'
        std::vector<cplx> cu1(nd), cu2(nd), cu1g(nd), cu2g(nd);
        for(int i = 0; i < nx; i++) {
            double x = xrule.nodes[i];
            auto u = steady::velocity_u(params, {x, y});
            double g = steady::gprime(params, {x, y});
            for(int d = -2 * N; d <= 2 * N; d++) {
                cplx e = std::polar(xrule.weights[i] / (2 * M_PI), d * x);
                cu1 [d + 2 * N] += u.first * e;
                cu2 [d + 2 * N] += u.second * e;
                cu1g[d + 2 * N] += u.first * g * e;
                cu2g[d + 2 * N] += u.second * g * e;
            }
        }
        std::vector<double> h, dh;
        hermiteWithDeriv(nmax, y, h, dh);
        Eigen::MatrixXcd Mj(dim, dim);
        for(int n1 = 0; n1 <= nmax; n1++)
            for(int k1 = -N; k1 <= N; k1++) {
                double ka = k1 + alpha;
                double c1 = ka * ka + 2 * n1 + 1 - y * y;
                double Q  = c1 * h[n1];                          // (-Lap_a) radial part
                double dQ = -2 * y * h[n1] + c1 * dh[n1];
                int a = basis.index(n1, k1);
                for(int k2 = -N; k2 <= N; k2++) {
                    int d = k1 - k2 + 2 * N;
                    cplx radial1 = cplx(0, ka) * cu1[d] * Q - cplx(0, ka) * cu1g[d] * h[n1]
                                 + cu2[d] * dQ - cu2g[d] * dh[n1];
                    for(int n2 = 0; n2 <= nmax; n2++)
                        Mj(a, basis.index(n2, k2)) = radial1 * h[n2];
                }
            }
        parts[j] = yrule.weights[j] * Mj;
    });
    ModulationalMatrices out;
    out.M = Eigen::MatrixXcd::Zero(dim, dim);
    for(int j = 0; j < ny; j++) out.M += parts[j];

    // D is exact: delta_{k1 k2} ((k+alpha)^2 delta_{n1 n2} + <H_n1', H_n2'>)
    out.D = Eigen::MatrixXcd::Zero(dim, dim);
    for(int n1 = 0; n1 <= nmax; n1++)
        for(int n2 = 0; n2 <= nmax; n2++)
            for(int k = -N; k <= N; k++) {
                double val = (n1 == n2 ? (k + alpha) * (k + alpha) : 0.) + hermiteDerivGram(n1, n2);
                if(val != 0) out.D(basis.index(n1, k), basis.index(n2, k)) = val;
            }
    double defect = (out.D - out.D.adjoint()).cwiseAbs().maxCoeff();
    if(defect > 1e-10)
        throw QuadratureUnderResolved("assemble_modulational: Hermiticity defect of D " +
            std::to_string(defect));
    return out;
}

SpectrumTable solve_symmetric(const Eigen::MatrixXd& A, bool wantVectors)
{
    if(A.rows() != A.cols())
        throw InvalidParams("solve_symmetric: matrix is not square");
    double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
    double defect = (A - A.transpose()).cwiseAbs().maxCoeff();
    if(defect > 1e-10 * std::max(1., scale))
        throw InvalidParams("solve_symmetric: matrix is not symmetric (defect " +
            std::to_string(defect) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::ComputeEigenvectors);
    if(es.info() != Eigen::Success)
        throw ConvergenceFailure("solve_symmetric: eigensolver did not converge");
    SpectrumTable out;
    const Eigen::Index n = A.rows();
    double norm = A.norm(), maxres = 0;
    for(Eigen::Index i = 0; i < n; i++) {
        double res = (A * es.eigenvectors().col(i) - es.eigenvalues()(i) * es.eigenvectors().col(i)).norm();
        maxres = std::max(maxres, res / std::max(norm, 1e-300));
        out.eigenvalues.push_back(es.eigenvalues()(i));   // already ascending
    }
    if(maxres > 1e-10)
        throw ConvergenceFailure("solve_symmetric: backward error " + std::to_string(maxres));
    if(wantVectors) out.vectors = es.eigenvectors().cast<cplx>();
    out.cluster = clusterIds(out.eigenvalues, 1e-8 * std::max(1., scale));
    out.meta.symmetry_defect = defect;
    out.meta.max_residual = maxres;
    return out;
}

SpectrumTable solve_generalized(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& D, bool wantVectors)
{
    if(M.rows() != M.cols() || D.rows() != D.cols() || M.rows() != D.rows())
        throw InvalidParams("solve_generalized: matrix dimensions mismatch");
    const Eigen::Index n = M.rows();
    Eigen::MatrixXcd Ms = M.adjoint(), Ds = D.adjoint();
    Eigen::LLT<Eigen::MatrixXcd> llt(Ds);
    if(llt.info() != Eigen::Success)
        throw SingularD("solve_generalized: Cholesky factorization of D failed");
    // C = L^{-1} M^* L^{-H}
    Eigen::MatrixXcd L = llt.matrixL();
    Eigen::MatrixXcd tmp = L.triangularView<Eigen::Lower>().solve(Ms);
    Eigen::MatrixXcd C = L.triangularView<Eigen::Lower>().solve(tmp.adjoint()).adjoint();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, true);
    if(es.info() != Eigen::Success)
        throw ConvergenceFailure("solve_generalized: eigensolver did not converge");
    // back-transform eigenvectors: x = L^{-H} z
    Eigen::MatrixXcd X = L.adjoint().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return ev(a).real() > ev(b).real();
    });
    SpectrumTable out;
    double normM = Ms.norm(), normD = Ds.norm(), maxres = 0;
    for(Eigen::Index i: order) {
        Eigen::VectorXcd x = X.col(i);
        double res = (Ms * x - ev(i) * (Ds * x)).norm() / x.norm();
        maxres = std::max(maxres, res / (normM + std::abs(ev(i)) * normD));
        out.eigenvalues.push_back(ev(i));
    }
    if(maxres > 1e-8)
        throw ConvergenceFailure("solve_generalized: residual " + std::to_string(maxres));
    if(wantVectors) {
        out.vectors.resize(n, n);
        for(Eigen::Index j = 0; j < n; j++) out.vectors.col(j) = X.col(order[j]);
    }
    out.cluster = clusterIds(out.eigenvalues, 1e-8 * std::max(1., normM / std::max(normD, 1e-300)));
    out.meta.max_residual = maxres;
    return out;
}

std::vector<GrowthRow> growth_rate_sweep(double alpha, const std::vector<double>& eps_grid,
    int N, const QuadSpec& quad, double rate_floor)
{
    std::vector<GrowthRow> rows(eps_grid.size());
    // parallel over epsilon points; each eigensolve runs on a single worker
    parallel_for(eps_grid.size(), [&](std::size_t i) {
        ModulationalMatrices mm = assemble_modulational(eps_grid[i], alpha, N, quad);
        SpectrumTable st = solve_generalized(mm.M, mm.D);
        rows[i].epsilon = eps_grid[i];
        for(const cplx& s: st.eigenvalues)
            if(s.real() > rate_floor) {
                rows[i].rates.push_back(s.real());
                if(std::fabs(s.imag()) <= 1e-8 * std::max(1., std::abs(s)))
                    rows[i].real_rates.push_back(s.real());
            }
    });
    return rows;
}

GrowthLandmarks growth_landmarks(double alpha, const std::vector<GrowthRow>& rows, int N,
    int bisection_steps, const QuadSpec& quad, double rate_floor)
{
    GrowthLandmarks lm;
    if(rows.empty())
        throw InvalidParams("growth_landmarks: empty sweep");
    lm.unstable_at_first = rows.front().real_rates.size();
    for(const GrowthRow& r: rows)
        if(!r.real_rates.empty() && r.real_rates.front() > lm.max_rate) {
            lm.max_rate = r.real_rates.front();
            lm.max_rate_eps = r.epsilon;
        }
    for(std::size_t i = 1; i < rows.size(); i++)
        if(rows[i - 1].real_rates.size() >= 2 && rows[i].real_rates.size() < 2) {
            lm.has_crossing = true;
            lm.crossing_lo = rows[i - 1].epsilon;
            lm.crossing_hi = rows[i].epsilon;
            break;
        }
    for(int step = 0; lm.has_crossing && step < bisection_steps; step++) {
        double mid = 0.5 * (lm.crossing_lo + lm.crossing_hi);
        GrowthRow r = growth_rate_sweep(alpha, {mid}, N, quad, rate_floor).front();
        if(r.real_rates.size() >= 2) lm.crossing_lo = mid;
        else lm.crossing_hi = mid;
    }
    lm.crossing = 0.5 * (lm.crossing_lo + lm.crossing_hi);
    return lm;
}

}  // namespace galerkin
}  // namespace catseye
