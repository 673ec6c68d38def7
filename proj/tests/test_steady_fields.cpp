#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "catseye/errors.h"
#include "catseye/steady_fields.h"
#include <cmath>
#include <vector>

using namespace catseye;
using namespace catseye::steady;

namespace {

const std::vector<double> EPS_SAMPLES = {0.0, 0.3, 0.5, 0.7, 0.9};

/// sample points away from the branch cut of theta and from the hyperbolic points
std::vector<PointXY> samplePoints()
{
    std::vector<PointXY> pts;
    for(double x: {0.3, 1.1, 2.0, 2.9, 3.6, 4.4, 5.2, 6.0})
        for(double y: {-2.5, -1.2, -0.4, 0.15, 0.7, 1.9})
            pts.push_back({x, y});
    return pts;
}

/// 5-point negative Laplacian of a scalar function by central differences
template<typename F>
double negLaplacianFD(F f, const PointXY& pt, double h = 1e-3)
{
    double c = f(pt);
    return -(f({pt.x + h, pt.y}) + f({pt.x - h, pt.y}) + f({pt.x, pt.y + h}) +
        f({pt.x, pt.y - h}) - 4 * c) / (h * h);
}

}  // namespace

TEST_CASE("FlowParams validation") {
    CHECK_NOTHROW(FlowParams(0.5));
    CHECK_THROWS_AS(FlowParams(1.0), InvalidParams);
    CHECK_THROWS_AS(FlowParams(-0.1), InvalidParams);
    CHECK_THROWS_AS(FlowParams(0.5, 0), InvalidParams);
    CHECK_THROWS_AS(FlowParams(0.5, 1, 0.6), InvalidParams);
    CHECK_THROWS_AS(FlowParams(0.5, 2, 0.25), InvalidParams);
}

TEST_CASE("stream function values") {
    CHECK(stream_psi(FlowParams(0), {0, 0}) == doctest::Approx(0).epsilon(1e-15));
    CHECK(stream_psi(FlowParams(0.5), {0, 0}) == doctest::Approx(std::log(std::sqrt(3.))).epsilon(1e-14));
    CHECK(stream_psi(FlowParams(0.5), {M_PI, 0}) == doctest::Approx(-rho0(FlowParams(0.5))).epsilon(1e-14));
    // exp-scaled evaluation stays finite far beyond the overflow of cosh
    double far = stream_psi(FlowParams(0.5), {1.0, 800});
    CHECK(std::isfinite(far));
    CHECK(far == doctest::Approx(800 - M_LN2 - 0.5 * std::log(0.75)).epsilon(1e-14));
}

TEST_CASE("vorticity values and Liouville identity") {
    CHECK(vorticity_omega(FlowParams(0), {0, 0}) == doctest::Approx(-1));
    CHECK(vorticity_omega(FlowParams(0.5), {M_PI, 0}) == doctest::Approx(-3));
    for(double eps: EPS_SAMPLES) {
        FlowParams p(eps);
        for(const PointXY& pt: samplePoints()) {
            double w = vorticity_omega(p, pt);
            CHECK(std::fabs(w + std::exp(-2 * stream_psi(p, pt))) < 1e-12);
            CHECK(gprime(p, pt) == doctest::Approx(-2 * w).epsilon(1e-14));
        }
    }
}

TEST_CASE("velocity field") {
    for(double y: {-1.0, 0.0, 0.5, 2.0}) {
        auto u = velocity_u(FlowParams(0), {1.3, y});
        CHECK(u.first == doctest::Approx(std::tanh(y)).epsilon(1e-14));
        CHECK(std::fabs(u.second) < 1e-15);
    }
    auto u = velocity_u(FlowParams(0.5), {M_PI / 2, 0});
    CHECK(std::fabs(u.first) < 1e-15);
    CHECK(u.second == doctest::Approx(0.5).epsilon(1e-14));
    const double h = 1e-5;
    for(double eps: EPS_SAMPLES) {
        FlowParams p(eps);
        for(const PointXY& pt: samplePoints()) {
            auto v = velocity_u(p, pt);
            double dpy = (stream_psi(p, {pt.x, pt.y + h}) - stream_psi(p, {pt.x, pt.y - h})) / (2 * h);
            double dpx = (stream_psi(p, {pt.x + h, pt.y}) - stream_psi(p, {pt.x - h, pt.y})) / (2 * h);
            CHECK(std::fabs(v.first - dpy) < 1e-6);
            CHECK(std::fabs(v.second + dpx) < 1e-6);
        }
    }
}

TEST_CASE("steady state solves the Liouville equation") {
    for(double eps: EPS_SAMPLES) {
        FlowParams p(eps);
        for(const PointXY& pt: samplePoints()) {
            double lap = negLaplacianFD([&](const PointXY& q) { return stream_psi(p, q); }, pt);
            CHECK(std::fabs(lap - vorticity_omega(p, pt)) < 1e-5);
        }
    }
}

TEST_CASE("shear-case coordinates") {
    FlowParams p(0);
    for(const PointXY& pt: samplePoints()) {
        CoordsEGX c = coords(p, pt);
        double sech = 1 / std::cosh(pt.y);
        CHECK(c.eta == doctest::Approx(std::sin(pt.x) * sech).epsilon(1e-13));
        CHECK(c.gamma == doctest::Approx(std::tanh(pt.y)).epsilon(1e-13));
        CHECK(c.xi == doctest::Approx(std::cos(pt.x) * sech).epsilon(1e-13));
        CHECK(c.theta == doctest::Approx(pt.x).epsilon(1e-13));
        CHECK(jacobian(p, pt) == doctest::Approx(sech * sech).epsilon(1e-13));
    }
    CHECK(jacobian(p, {0, 0}) == doctest::Approx(1));
}

TEST_CASE("coordinate identities on the sphere") {
    for(double eps: EPS_SAMPLES) {
        FlowParams p(eps);
        for(const PointXY& pt: samplePoints()) {
            CoordsEGX c = coords(p, pt);
            CHECK(std::fabs(c.eta * c.eta + c.gamma * c.gamma + c.xi * c.xi - 1) < 1e-12);
            double r = std::sqrt(1 - c.gamma * c.gamma);
            CHECK(std::fabs(c.eta - r * std::sin(c.theta)) < 1e-12);
            CHECK(std::fabs(c.xi - r * std::cos(c.theta)) < 1e-12);
        }
    }
    CoordsEGX c = coords(FlowParams(0.5), {M_PI, 0});
    CHECK(std::fabs(c.eta) < 1e-15);
    CHECK(std::fabs(c.gamma) < 1e-15);
    CHECK(c.xi == doctest::Approx(-1));
    CHECK(c.theta == doctest::Approx(M_PI));
}

TEST_CASE("sphere coordinates are eigenfunctions, theta is harmonic") {
    for(double eps: EPS_SAMPLES) {
        FlowParams p(eps);
        for(const PointXY& pt: samplePoints()) {
            double gp = gprime(p, pt);
            CoordsEGX c = coords(p, pt);
            double le = negLaplacianFD([&](const PointXY& q) { return coords(p, q).eta; }, pt, 1e-4);
            double lg = negLaplacianFD([&](const PointXY& q) { return coords(p, q).gamma; }, pt, 1e-4);
            double lx = negLaplacianFD([&](const PointXY& q) { return coords(p, q).xi; }, pt, 1e-4);
            CHECK(std::fabs(le - gp * c.eta) < 1e-5);
            CHECK(std::fabs(lg - gp * c.gamma) < 1e-5);
            CHECK(std::fabs(lx - gp * c.xi) < 1e-5);
            // theta is smooth at these points (none lies on the cut x = pi)
            double lt = negLaplacianFD([&](const PointXY& q) { return coords(p, q).theta; }, pt, 1e-4);
            CHECK(std::fabs(lt) < 1e-5);
            CoordsGrad d = coord_derivatives(p, pt);
            double grad2 = d.theta_x * d.theta_x + d.theta_y * d.theta_y;
            CHECK(std::fabs(grad2 - 0.5 * gp / (1 - c.gamma * c.gamma)) < 1e-5);
        }
    }
}

TEST_CASE("Jacobian against finite differences") {
    const double h = 1e-6;
    for(double eps: EPS_SAMPLES) {
        FlowParams p(eps);
        for(const PointXY& pt: samplePoints()) {
            CoordsEGX xp = coords(p, {pt.x + h, pt.y}), xm = coords(p, {pt.x - h, pt.y});
            CoordsEGX yp = coords(p, {pt.x, pt.y + h}), ym = coords(p, {pt.x, pt.y - h});
            double tx = (xp.theta - xm.theta) / (2 * h), ty = (yp.theta - ym.theta) / (2 * h);
            double gx = (xp.gamma - xm.gamma) / (2 * h), gy = (yp.gamma - ym.gamma) / (2 * h);
            double J = jacobian(p, pt);
            CHECK(J > 0);
            CHECK(std::fabs(tx * gy - ty * gx - J) < 1e-6);
            CHECK(J == doctest::Approx(-vorticity_omega(p, pt)).epsilon(1e-13));
            CoordsGrad d = coord_derivatives(p, pt);
            CHECK(std::fabs(d.theta_x - tx) < 1e-6);
            CHECK(std::fabs(d.gamma_y - gy) < 1e-6);
        }
    }
    CHECK(jacobian(FlowParams(0.5), {M_PI, 0}) == doctest::Approx(3));
}

TEST_CASE("inverse coordinates") {
    FlowParams p0(0);
    CoordsEGX c = coords_from_theta_gamma(1.2, 0.4);
    PointXY q = inverse_coords(p0, c);
    CHECK(q.x == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(q.y == doctest::Approx(std::atanh(0.4)).epsilon(1e-14));

    FlowParams p(0.5);
    q = inverse_coords(p, coords_from_theta_gamma(M_PI, 0));
    CHECK(q.x == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(std::fabs(q.y) < 1e-14);

    // round trip on a 32x32 grid
    double maxErr = 0;
    for(int i = 0; i < 32; i++)
        for(int j = 0; j < 32; j++) {
            PointXY pt{2 * M_PI * (i + 0.5) / 32, -3 + 6 * (j + 0.5) / 32};
            PointXY back = inverse_coords(p, coords(p, pt));
            maxErr = std::max({maxErr, std::fabs(back.x - pt.x), std::fabs(back.y - pt.y)});
        }
    CHECK(maxErr < 1e-10);

    // multi-cell continuation
    FlowParams p3(0.5, 3);
    PointXY pt{2 * M_PI * 2 + 1.0, 0.3};
    CHECK(cell_index(p3, pt.x) == 2);
    CHECK(theta_extended(p3, pt) == doctest::Approx(coords(p3, pt).theta + 4 * M_PI));
    PointXY back = inverse_coords(p3, coords(p3, pt), 2);
    CHECK(back.x == doctest::Approx(pt.x).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(pt.y).epsilon(1e-12));

    // the image of y = +-infinity has no preimage
    // the pole gamma = 1 is a regular point of the image
    q = inverse_coords(p, coords_from_theta_gamma(0, 1));
    CHECK(coords(p, q).gamma == doctest::Approx(1).epsilon(1e-12));
    CHECK_THROWS_AS(inverse_coords(p, coords_from_theta_gamma(0, std::sqrt(0.75))), DegeneratePoint);
}

TEST_CASE("separatrix level and turning points") {
    CHECK(rho0(FlowParams(0)) == 0);
    CHECK(rho0(FlowParams(0.5)) == doctest::Approx(std::log(std::sqrt(3.))).epsilon(1e-14));
    CHECK(rho0(FlowParams(0.8)) == doctest::Approx(std::log(3.)).epsilon(1e-14));
    FlowParams p(0.5);
    double x0 = level_turning_point(p, 0);
    CHECK(x0 == doctest::Approx(std::acos((std::sqrt(0.75) - 1) / 0.5)).epsilon(1e-14));
    CHECK(x0 == doctest::Approx(1.8421).epsilon(1e-4));
    // psi_eps vanishes there on y = 0 (independent root check)
    CHECK(std::fabs(stream_psi(p, {x0, 0})) < 1e-14);
    double r0 = rho0(p);
    CHECK(level_turning_point(p, r0 * (1 - 1e-9)) < 1e-3);
    CHECK(level_turning_point(p, -r0 * (1 - 1e-9)) > M_PI - 1e-3);
    CHECK_THROWS_AS(level_turning_point(p, r0 + 0.1), OutOfRange);
    CHECK_THROWS_AS(level_turning_point(FlowParams(0), 0), OutOfRange);
}
