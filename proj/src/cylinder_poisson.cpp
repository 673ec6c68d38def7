#include "catseye/cylinder_poisson.h"
#include "catseye/errors.h"
#include "catseye/orthopoly.h"
#include "catseye/parallel.h"
#include "catseye/steady_fields.h"
#include <unsupported/Eigen/FFT>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

namespace catseye {
namespace poisson {

namespace {  // internal routines

typedef std::complex<double> cplx;

/// number of nodes in the local interpolation stencil used by the y-convolutions
const int STENCIL = 8;
/// number of nodes in the finite-difference stencil for y-derivatives (eighth order)
const int FD_STENCIL = 9;

/** Neumaier (improved Kahan) compensated accumulator */
class Accumulator {
    double sum = 0, comp = 0;
public:
    void add(double v) {
        double t = sum + v;
        if(std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double result() const { return sum + comp; }
};

/// e^x - 1 - x, accurate also for small |x|
double expm1mx(double x)
{
    if(std::fabs(x) > 0.1)
        return std::expm1(x) - x;
    // Taylor series: x^2/2 + x^3/6 + ...; 12 terms are ample for |x| <= 0.1
    double term = x * x / 2, sum = 0;
    for(int n = 3; n <= 14; n++) {
        sum += term;
        term *= x / n;
    }
    return sum;
}

void checkSameGrid(const GridField& a, const GridField& b, const char* where)
{
    if(!(a.spec == b.spec))
        throw InvalidParams(std::string(where) + ": fields are sampled on different grids");
}

/** x-integrated profile F_j = hx sum_i f_ij, with compensated summation */
std::vector<double> profileY(const GridField& f)
{
    const int nx = f.spec.nx, ny = f.spec.ny;
    std::vector<double> prof(ny);
    for(int j = 0; j < ny; j++) {
        Accumulator acc;
        for(int i = 0; i < nx; i++)
            acc.add(f.values[j * nx + i]);
        prof[j] = acc.result() * f.spec.hx();
    }
    return prof;
}

/** Trapezoid integral of a profile in y */
double integrateProfile(const std::vector<double>& prof, double h)
{
    Accumulator acc;
    for(std::size_t j = 0; j < prof.size(); j++)
        acc.add((j == 0 || j + 1 == prof.size()) ? 0.5 * prof[j] : prof[j]);
    return acc.result() * h;
}

/** Tail estimate on one side: the profile decay rate between the end node and the
    node one unit of length inward is extrapolated exponentially to infinity;
    a non-decaying profile gives an infinite estimate */
double tailOneSide(double endVal, double innerVal, double dist)
{
    double a = std::fabs(endVal), b = std::fabs(innerVal);
    if(a == 0) return 0;
    if(!(b > a * (1 + 1e-12))) return std::numeric_limits<double>::infinity();
    double rate = std::log(b / a) / dist;
    return a / rate;
}

double tailEstimate(const std::vector<double>& prof, double h)
{
    const int ny = prof.size();
    int m = std::max(1, std::min(int(std::lround(1 / h)), ny / 2));
    return tailOneSide(prof[ny - 1], prof[ny - 1 - m], m * h) +
        tailOneSide(prof[0], prof[m], m * h);
}

/** Finite-difference weights for derivatives of order 0..maxOrder at the point z,
    using the given nodes (Fornberg's algorithm).  Result: w[order][node]. */
std::vector<std::vector<double>> fornbergWeights(double z, const std::vector<double>& x, int maxOrder)
{
    const int n = x.size();
    std::vector<std::vector<double>> c(maxOrder + 1, std::vector<double>(n, 0.));
    double c1 = 1, c4 = x[0] - z;
    c[0][0] = 1;
    for(int i = 1; i < n; i++) {
        int mn = std::min(i, maxOrder);
        double c2 = 1, c5 = c4;
        c4 = x[i] - z;
        for(int j = 0; j < i; j++) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if(j == i - 1) {
                for(int k = mn; k >= 1; k--)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for(int k = mn; k >= 1; k--)
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

/** Start of the stencil of `size` nodes used around position `center` (clamped to the grid) */
int stencilStart(int center, int size, int n)
{
    return std::max(0, std::min(center - (size - 1) / 2, n - size));
}

/** Derivative of the given order in y of every column, by finite differences */
std::vector<double> derivY(const GridField& f, int order)
{
    const int nx = f.spec.nx, ny = f.spec.ny;
    const int p = std::min(FD_STENCIL, ny);
    const double scale = std::pow(f.spec.hy(), -order);
    // weights depend only on the position of the evaluation node within the stencil
    std::vector<double> nodes(p);
    for(int i = 0; i < p; i++) nodes[i] = i;
    std::vector<std::vector<double>> w(p);
    for(int r = 0; r < p; r++)
        w[r] = fornbergWeights(r, nodes, order)[order];
    std::vector<double> out(f.values.size(), 0.);
    for(int j = 0; j < ny; j++) {
        int s = stencilStart(j, p, ny), r = j - s;
        for(int q = 0; q < p; q++) {
            double c = w[r][q] * scale;
            const double* src = &f.values[(s + q) * nx];
            double* dst = &out[j * nx];
            for(int i = 0; i < nx; i++)
                dst[i] += c * src[i];
        }
    }
    return out;
}

/// signed wavenumber of the k-th FFT coefficient
int wavenumber(int k, int nx) { return k <= nx / 2 ? k : k - nx; }

/** Spectral x-derivative of every row (order 1 or 2) */
std::vector<double> derivX(const GridField& f, int order)
{
    const int nx = f.spec.nx, ny = f.spec.ny;
    std::vector<double> out(f.values.size());
    Eigen::FFT<double> fft;
    std::vector<double> row(nx);
    std::vector<cplx> coef;
    for(int j = 0; j < ny; j++) {
        std::copy(f.values.begin() + j * nx, f.values.begin() + (j + 1) * nx, row.begin());
        fft.fwd(coef, row);
        for(int k = 0; k < nx; k++) {
            int kk = wavenumber(k, nx);
            if(order == 1)   // the Nyquist mode has no well-defined odd derivative
                coef[k] *= (2 * kk == nx) ? cplx(0) : cplx(0, kk);
            else
                coef[k] *= -double(kk) * kk;
        }
        fft.inv(row, coef);
        std::copy(row.begin(), row.end(), out.begin() + j * nx);
    }
    return out;
}

/** Exact cell integrals of kernel times Lagrange basis functions on a uniform grid.
    For a stencil of p nodes at local positions 0..p-1 (unit spacing) and a cell
    [r, r+1] inside it, weight[r][i] = h int_0^1 K(u) l_i(r + u) du. */
typedef std::vector<std::vector<double>> CellWeights;

CellWeights cellWeights(int p, double h, const std::function<double(double)>& kernel)
{
    poly::QuadRule gl = poly::gauss_legendre(16, 0., 1.);
    CellWeights W(p - 1, std::vector<double>(p, 0.));
    for(int r = 0; r + 1 < p; r++)
        for(std::size_t g = 0; g < gl.size(); g++) {
            double u = gl.nodes[g], t = r + u, kw = h * gl.weights[g] * kernel(u);
            for(int i = 0; i < p; i++) {
                double l = 1;
                for(int q = 0; q < p; q++)
                    if(q != i) l *= (t - q) / (i - q);
                W[r][i] += kw * l;
            }
        }
    return W;
}

/** Convolution of one Fourier mode with the mode kernel on the uniform y grid:
    mode kk > 0: psi(y) = int e^{-kk|y-y'|}/(2kk) f(y') dy';
    mode 0:      psi(y) = -(1/2) int |y-y'| f(y') dy' (+ (ln 2/2) int f if withMean).
    The right-hand side is interpolated piecewise by polynomials of degree STENCIL-1,
    and the kernel is integrated exactly against the interpolant through
    forward/backward recursions. */
class ModeConvolver {
    int n, p;
    double h;
    std::map<int, std::pair<CellWeights, CellWeights>> expWeights;   // per kk: left, right
    CellWeights w0, w0L, w0R;
public:
    ModeConvolver(int ny, double hy, int nmax): n(ny), p(std::min(STENCIL, ny)), h(hy) {
        w0  = cellWeights(p, h, [](double) { return 1.; });
        w0L = cellWeights(p, h, [this](double u) { return h * (1 - u); });
        w0R = cellWeights(p, h, [this](double u) { return h * u; });
        for(int kk = 1; kk <= nmax; kk++) {
            double a = kk * h;
            expWeights[kk] = std::make_pair(
                cellWeights(p, h, [a](double u) { return std::exp(-a * (1 - u)); }),
                cellWeights(p, h, [a](double u) { return std::exp(-a * u); }));
        }
    }

    /// sum_i W[r][i] f[s+i] for the cell c
    template<typename T>
    T cellSum(const CellWeights& W, const std::vector<T>& f, int c) const {
        int s = std::max(0, std::min(c - (p / 2 - 1), n - p)), r = c - s;
        T sum = 0;
        for(int i = 0; i < p; i++)
            sum += W[r][i] * f[s + i];
        return sum;
    }

    std::vector<cplx> apply(int kk, const std::vector<cplx>& f, bool withMean) const {
        std::vector<cplx> L(n, 0.), R(n, 0.), out(n);
        if(kk == 0) {
            std::vector<cplx> A(n, 0.), At(n, 0.);
            for(int c = 0; c + 1 < n; c++) {
                L[c + 1] = L[c] + h * A[c] + cellSum(w0L, f, c);
                A[c + 1] = A[c] + cellSum(w0, f, c);
            }
            for(int c = n - 2; c >= 0; c--) {
                R[c]  = R[c + 1] + h * At[c + 1] + cellSum(w0R, f, c);
                At[c] = At[c + 1] + cellSum(w0, f, c);
            }
            cplx mean = withMean ? 0.5 * M_LN2 * A[n - 1] : cplx(0);
            for(int j = 0; j < n; j++)
                out[j] = -0.5 * (L[j] + R[j]) + mean;
            return out;
        }
        const auto& W = expWeights.at(kk);
        const double E = std::exp(-kk * h);
        for(int c = 0; c + 1 < n; c++)
            L[c + 1] = E * L[c] + cellSum(W.first, f, c);
        for(int c = n - 2; c >= 0; c--)
            R[c] = E * R[c + 1] + cellSum(W.second, f, c);
        for(int j = 0; j < n; j++)
            out[j] = (L[j] + R[j]) / (2. * kk);
        return out;
    }
};

/** Pointwise product of two fields on the same grid */
GridField product(const GridField& a, const GridField& b)
{
    checkSameGrid(a, b, "product");
    GridField r(a.spec);
    for(std::size_t k = 0; k < r.values.size(); k++)
        r.values[k] = a.values[k] * b.values[k];
    return r;
}

void checkEps(double eps, const char* where)
{
    if(!(eps >= 0 && eps < 1))
        throw InvalidParams(std::string(where) + ": epsilon must lie in [0,1)");
}

}  // internal namespace

//---- grid ----//

void GridSpec::validate() const
{
    if(nx < 4)
        throw InvalidParams("GridSpec: nx must be at least 4");
    if(ny < 5 || ny % 2 == 0)
        throw InvalidParams("GridSpec: ny must be odd and at least 5");
    if(!(Y > 0) || !std::isfinite(Y))
        throw InvalidParams("GridSpec: Y must be positive");
}

double GridSpec::hx() const { return 2 * M_PI / nx; }
double GridSpec::hy() const { return 2 * Y / (ny - 1); }
double GridSpec::x(int i) const { return i * hx(); }
double GridSpec::y(int j) const { return j == (ny - 1) / 2 ? 0. : -Y + j * hy(); }

bool GridSpec::operator==(const GridSpec& other) const
{
    return nx == other.nx && ny == other.ny && Y == other.Y;
}

GridField::GridField(const GridSpec& s): spec(s)
{
    spec.validate();
    values.assign(std::size_t(spec.nx) * spec.ny, 0.);
    zero_mean = true;
    finite_moment = true;
}

void GridField::update_flags()
{
    for(double v: values)
        if(!std::isfinite(v))
            throw InvalidParams("GridField: non-finite value");
    zero_mean = std::fabs(integral(*this)) <= 1e-8;
    GridField moment(spec);
    for(int j = 0; j < spec.ny; j++)
        for(int i = 0; i < spec.nx; i++)
            moment(i, j) = std::fabs(spec.y(j) * (*this)(i, j));
    FunctionalValue mv = integral_with_tail(moment);
    finite_moment = mv.tail_estimate <= 0.1 * std::fabs(mv.value);
}

GridField sample(const GridSpec& spec, const std::function<double(double, double)>& f)
{
    GridField r(spec);
    for(int j = 0; j < spec.ny; j++)
        for(int i = 0; i < spec.nx; i++)
            r(i, j) = f(spec.x(i), spec.y(j));
    r.update_flags();
    return r;
}

double integral(const GridField& f)
{
    return integrateProfile(profileY(f), f.spec.hy());
}

FunctionalValue integral_with_tail(const GridField& f)
{
    std::vector<double> prof = profileY(f);
    FunctionalValue r;
    r.value = integrateProfile(prof, f.spec.hy());
    r.tail_estimate = tailEstimate(prof, f.spec.hy());
    return r;
}

//---- Green function and Poisson solver ----//

double green_G(double x, double y)
{
    double xr = std::remainder(x, 2 * M_PI);
    if(y == 0 && xr == 0)
        throw SingularPoint("green_G: evaluation at the singular point of the kernel");
    // cosh y - cos x = 2 sinh^2(y/2) + 2 sin^2(x/2) avoids cancellation near the origin;
    // for large |y| use ln(cosh y - cos x) = |y| + ln((1 + e^{-2|y|} - 2 e^{-|y|} cos x)/2)
    double ay = std::fabs(y);
    if(ay > 1) {
        double e = std::exp(-ay);
        return -(ay + std::log1p(e * e - 2 * e * std::cos(x)) - M_LN2) / (4 * M_PI);
    }
    double sy = std::sinh(0.5 * y), sx = std::sin(0.5 * xr);
    return -std::log(2 * (sy * sy + sx * sx)) / (4 * M_PI);
}

GridField poisson_solve(const GridField& w, Normalization norm)
{
    const GridSpec& s = w.spec;
    s.validate();
    if(norm == Normalization::ZeroAtOrigin && std::fabs(integral(w)) > 1e-8)
        throw NonZeroMean("poisson_solve: right-hand side has non-zero mean");
    const int nx = s.nx, ny = s.ny, nk = nx / 2;

    // forward transform of each row
    std::vector<std::vector<cplx>> coef(ny);
    {
        Eigen::FFT<double> fft;
        std::vector<double> row(nx);
        for(int j = 0; j < ny; j++) {
            std::copy(w.values.begin() + j * nx, w.values.begin() + (j + 1) * nx, row.begin());
            fft.fwd(coef[j], row);
        }
    }

    // independent 1d convolutions for wavenumbers 0..nx/2; negative ones by symmetry
    ModeConvolver conv(ny, s.hy(), nk);
    std::vector<std::vector<cplx>> sol(nk + 1);
    parallel_for(nk + 1, [&](std::size_t k) {
        std::vector<cplx> f(ny);
        for(int j = 0; j < ny; j++) f[j] = coef[j][k];
        sol[k] = conv.apply(k, f, norm == Normalization::Green);
        if(k == 0 && norm == Normalization::ZeroAtOrigin) {
            cplx c = sol[0][(ny - 1) / 2];
            for(auto& v: sol[0]) v -= c;
        }
    });

    GridField psi(s);
    Eigen::FFT<double> fft;
    std::vector<cplx> rowc(nx);
    std::vector<double> row(nx);
    for(int j = 0; j < ny; j++) {
        for(int k = 0; k < nx; k++) {
            int kk = wavenumber(k, nx);
            rowc[k] = kk >= 0 ? sol[kk][j] : std::conj(sol[-kk][j]);
        }
        if(nx % 2 == 0) rowc[nk] = rowc[nk].real();
        fft.inv(row, rowc);
        std::copy(row.begin(), row.end(), psi.values.begin() + j * nx);
    }
    psi.update_flags();
    return psi;
}

double dirichlet_energy(const GridField& f)
{
    std::vector<double> fx = derivX(f, 1), fy = derivY(f, 1);
    GridField e(f.spec);
    for(std::size_t k = 0; k < e.values.size(); k++)
        e.values[k] = fx[k] * fx[k] + fy[k] * fy[k];
    return integral(e);
}

GridField negative_laplacian(const GridField& f)
{
    std::vector<double> fxx = derivX(f, 2), fyy = derivY(f, 2);
    GridField r(f.spec);
    for(std::size_t k = 0; k < r.values.size(); k++)
        r.values[k] = -(fxx[k] + fyy[k]);
    r.update_flags();
    return r;
}

FunctionalValue pseudoenergy(const GridField& w)
{
    GridField psi = poisson_solve(w, Normalization::Green);
    FunctionalValue v;
    v.value = 0.5 * integral(product(psi, w));
    // the potential near the edges is depressed by the truncation of the domain, so the
    // tail of psi w is bounded by the extrapolated tail of |w| times the largest |psi|
    // within one unit of each edge
    const GridSpec& s = w.spec;
    GridField absw(s);
    for(std::size_t k = 0; k < w.values.size(); k++) absw.values[k] = std::fabs(w.values[k]);
    std::vector<double> prof = profileY(absw);
    const int m = std::max(1, std::min(int(std::lround(1 / s.hy())), s.ny / 2));
    double psiLo = 0, psiHi = 0;
    for(int j = 0; j <= m; j++)
        for(int i = 0; i < s.nx; i++) {
            psiLo = std::max(psiLo, std::fabs(psi(i, j)));
            psiHi = std::max(psiHi, std::fabs(psi(i, s.ny - 1 - j)));
        }
    v.tail_estimate = 0.5 * (psiLo * tailOneSide(prof[0], prof[m], m * s.hy()) +
        psiHi * tailOneSide(prof[s.ny - 1], prof[s.ny - 1 - m], m * s.hy()));
    if(v.tail_estimate > 0.1 * std::fabs(v.value))
        throw MomentUnbounded("pseudoenergy: tail beyond the truncated domain exceeds 10% of the value");
    return v;
}

//---- Casimir and Legendre functions ----//

double casimir_h(double s)
{
    if(!(s < 0))
        throw DomainError("casimir_h: argument must be negative");
    return 0.5 * (s - s * std::log(-s));
}

double legendre_f(double omega_eps_val, double z)
{
    if(!(omega_eps_val < 0) || !(omega_eps_val + z < 0))
        throw DomainError("legendre_f: omega_eps and omega_eps + z must be negative");
    // Bregman divergence of h: (1/2)(-omega)(a ln a - a + 1) with a = (omega+z)/omega
    double am1 = z / omega_eps_val;
    double a = 1 + am1;
    double bracket = a * std::log1p(am1) - am1;
    return -0.5 * omega_eps_val * bracket;
}

double legendre_fstar(double omega_eps_val, double s)
{
    return -0.5 * omega_eps_val * expm1mx(-2 * s);
}

//---- equilibrium fields and functionals ----//

GridField steady_vorticity(const GridSpec& spec, double eps)
{
    steady::FlowParams p(eps);
    return sample(spec, [&](double x, double y) { return steady::vorticity_omega(p, {x, y}); });
}

GridField steady_stream(const GridSpec& spec, double eps)
{
    steady::FlowParams p(eps);
    return sample(spec, [&](double x, double y) { return steady::stream_psi(p, {x, y}); });
}

Distance distance_d(const GridField& w_tilde, double eps)
{
    checkEps(eps, "distance_d");
    const GridSpec& s = w_tilde.spec;
    for(double v: w_tilde.values)
        if(!(v < 0))
            throw SignViolation("distance_d: perturbed vorticity must be negative everywhere");
    double total = integral(w_tilde);
    if(std::fabs(total + 4 * M_PI) > 1e-6)
        throw NonZeroMean("distance_d: total vorticity differs from -4 pi by " +
            std::to_string(total + 4 * M_PI));
    GridField om = steady_vorticity(s, eps);
    GridField bregman(s), diff(s);
    for(std::size_t k = 0; k < diff.values.size(); k++) {
        diff.values[k] = w_tilde.values[k] - om.values[k];
        bregman.values[k] = std::fmax(0., legendre_f(om.values[k], diff.values[k]));
    }
    GridField psi = poisson_solve(diff, Normalization::Green);
    Distance d;
    d.d1 = integral(bregman);
    d.d2 = integral(product(psi, diff));
    d.d  = d.d1 + d.d2;
    return d;
}

double functional_I(double eps)
{
    checkEps(eps, "functional_I");
    // gamma = cos t; the integrand depends on sin t only, and is even in theta:
    // I = 4 int_0^{pi/2} sin t int_0^pi F(theta, sin t) dtheta dt.
    // The integrand vanishes (conically) at theta = 0, sin t = eps, so t is split there.
    typedef boost::math::quadrature::gauss_kronrod<double, 31> GK;
    const double c = 1 / (1 - eps * eps), tol = 1e-12;
    auto inner = [&](double t) {
        double r = std::sin(t);
        auto F = [&](double th) {
            double sn = r * std::sin(th), cs = r * std::cos(th) - eps;
            return std::sqrt(sn * sn + c * cs * cs);
        };
        return r * GK::integrate(F, 0., M_PI, 15, tol);
    };
    double tstar = std::asin(eps), sum = 0;
    if(tstar > 0) sum += GK::integrate(inner, 0., tstar, 15, tol);
    sum += GK::integrate(inner, tstar, M_PI / 2, 15, tol);
    return 4 * sum;
}

double dual_B(double eps, const GridField& psi)
{
    checkEps(eps, "dual_B");
    GridField om = steady_vorticity(psi.spec, eps);
    GridField pot(psi.spec);
    for(std::size_t k = 0; k < pot.values.size(); k++)   // g' = -2 omega_eps
        pot.values[k] = 0.5 * om.values[k] * expm1mx(-2 * psi.values[k]);
    return 0.5 * dirichlet_energy(psi) + integral(pot);
}

double mhd_ec_functional(const GridField& w, const GridField& phi, double eps)
{
    checkEps(eps, "mhd_ec_functional");
    checkSameGrid(w, phi, "mhd_ec_functional");
    GridField J = negative_laplacian(phi);
    GridField flow = poisson_solve(w, Normalization::Green);
    GridField field = poisson_solve(J, Normalization::Green);
    GridField casimir(phi.spec);
    for(std::size_t k = 0; k < casimir.values.size(); k++)
        casimir.values[k] = -0.5 * std::exp(-2 * phi.values[k]);
    return 0.5 * integral(product(flow, w)) + 0.5 * integral(product(field, J)) + integral(casimir);
}

MhdDistance mhd_distance(const GridField& w, const GridField& phi, double eps)
{
    checkEps(eps, "mhd_distance");
    checkSameGrid(w, phi, "mhd_distance");
    if(std::fabs(integral(w)) > 1e-8)
        throw NonZeroMean("mhd_distance: vorticity perturbation has non-zero mean");
    GridField om = steady_vorticity(phi.spec, eps);    // -omega_eps = e^{-2 phi_eps}
    GridField base = steady_stream(phi.spec, eps);
    GridField dphi(phi.spec), conv(phi.spec);
    for(std::size_t k = 0; k < dphi.values.size(); k++) {
        dphi.values[k] = phi.values[k] - base.values[k];
        conv.values[k] = -0.5 * om.values[k] * expm1mx(-2 * dphi.values[k]);
    }
    MhdDistance d;
    d.d1 = integral(product(poisson_solve(w, Normalization::Green), w));
    d.d2 = dirichlet_energy(dphi);
    d.d3 = integral(conv);
    d.d  = d.d1 + d.d2 + d.d3;
    return d;
}

//---- import / export ----//

std::string to_csv(const GridField& f)
{
    std::string out = "x,y,value\n";
    char buf[96];
    for(int j = 0; j < f.spec.ny; j++)
        for(int i = 0; i < f.spec.nx; i++) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n",
                f.spec.x(i), f.spec.y(j), f(i, j));
            out += buf;
        }
    return out;
}

std::string header_json(const GridField& f)
{
    nlohmann::json h;
    h["format"] = "catseye-gridfield";
    h["version"] = 1;
    h["gridspec"] = { {"nx", f.spec.nx}, {"ny", f.spec.ny}, {"Y", f.spec.Y} };
    h["zero_mean"] = f.zero_mean;
    h["finite_moment"] = f.finite_moment;
    h["rows"] = std::size_t(f.spec.nx) * f.spec.ny;
    return h.dump(2);
}

GridField from_csv(const std::string& header, const std::string& csv)
{
    GridSpec spec;
    bool zm = false, fm = false;
    try {
        nlohmann::json h = nlohmann::json::parse(header);
        if(h.at("format").get<std::string>() != "catseye-gridfield")
            throw InvalidParams("from_csv: unknown header format");
        spec.nx = h.at("gridspec").at("nx").get<int>();
        spec.ny = h.at("gridspec").at("ny").get<int>();
        spec.Y  = h.at("gridspec").at("Y").get<double>();
        zm = h.at("zero_mean").get<bool>();
        fm = h.at("finite_moment").get<bool>();
    }
    catch(nlohmann::json::exception& e) {
        throw InvalidParams(std::string("from_csv: malformed header: ") + e.what());
    }
    GridField f(spec);
    std::istringstream in(csv);
    std::string line;
    if(!std::getline(in, line) || line != "x,y,value")
        throw InvalidParams("from_csv: missing column header");
    std::size_t count = 0;
    while(std::getline(in, line)) {
        if(line.empty()) continue;
        if(count >= f.values.size())
            throw InvalidParams("from_csv: too many rows");
        std::size_t pos = line.rfind(',');
        if(pos == std::string::npos)
            throw InvalidParams("from_csv: malformed row");
        const char* start = line.c_str() + pos + 1;
        char* end = nullptr;
        f.values[count++] = std::strtod(start, &end);
        if(end == start)
            throw InvalidParams("from_csv: malformed value");
    }
    if(count != f.values.size())
        throw InvalidParams("from_csv: row count does not match the grid");
    f.zero_mean = zm;
    f.finite_moment = fm;
    return f;
}

}  // namespace poisson
}  // namespace catseye
