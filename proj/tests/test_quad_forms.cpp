#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "catseye/errors.h"
#include "catseye/quad_forms.h"
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

using namespace catseye;
using namespace catseye::forms;
typedef std::complex<double> cplx;

namespace {

/** Area of the trapped region {psi_eps < rho} in one cell, by direct quadrature of
    2 int y(x) dx with y = acosh(sqrt(1-eps^2) e^rho - eps cos x) */
double trappedArea(double eps, double rho)
{
    double x0 = steady::level_turning_point(steady::FlowParams(eps), rho);
    double a = std::sqrt(1 - eps * eps) * std::exp(rho);
    auto f = [&](double x) { return std::acosh(std::fmax(1., a - eps * std::cos(x))); };
    boost::math::quadrature::tanh_sinh<double> ts;
    return 2 * 2 * ts.integrate(f, x0, M_PI, 1e-14);
}

}  // namespace

TEST_CASE("level curves") {
    steady::FlowParams p(0.5);
    double r0 = steady::rho0(p);
    LevelCurve c = make_level_curve(p, 0);
    CHECK(c.trapped);
    CHECK(c.x0 == doctest::Approx(steady::level_turning_point(p, 0)));
    LevelCurve u = make_level_curve(p, r0 + 0.5, 0, LevelCurve::Upper);
    CHECK_FALSE(u.trapped);
    CHECK_THROWS_AS(make_level_curve(p, -r0 - 0.1), OutOfRange);
    CHECK_THROWS_AS(make_level_curve(p, r0 - 1e-12), SingularEndpoint);
}

TEST_CASE("particle period against the derivative of the enclosed area") {
    const double eps = 0.5, h = 1e-4;
    steady::FlowParams p(eps);
    for(double rho: {-0.3, 0.0, 0.4}) {
        double T = curve_period(make_level_curve(p, rho));
        double dA = (trappedArea(eps, rho + h) - trappedArea(eps, rho - h)) / (2 * h);
        CHECK(T == doctest::Approx(dA).epsilon(1e-7));
        // refinement oracle: two tolerance levels agree
        CurveQuadrature coarse;
        coarse.inner_tol = 1e-8;
        CHECK(std::fabs(curve_period(make_level_curve(p, rho), coarse) - T) < 1e-8 * T);
    }
    // finite and continuous towards the elliptic point, where the period tends to
    // 2 pi / sqrt(det Hess psi) = 2 pi (1 - eps) / sqrt(eps)
    double r0 = steady::rho0(p);
    double last = curve_period(make_level_curve(p, -r0 + 1e-6));
    CHECK(std::isfinite(last));
    CHECK(std::fabs(last - curve_period(make_level_curve(p, -r0 + 2e-6))) < 1e-5 * last);
    CHECK(last == doctest::Approx(2 * M_PI * (1 - eps) / std::sqrt(eps)).epsilon(1e-5));
}

TEST_CASE("odd-symmetric integrands average to zero") {
    steady::FlowParams p(0.6);
    for(double rho: {-0.2, 0.3}) {
        LevelCurve c = make_level_curve(p, rho);
        cplx v = curve_integral(c, [](const steady::PointXY& q) { return cplx(std::sin(q.x) * std::cosh(q.y)); });
        CHECK(std::abs(v) < 1e-10);
        TestFunction t(TestFunction::TestEven, 1);
        steady::FlowParams p2 = t.params(0.6);
        LevelCurve c2 = make_level_curve(p2, rho, 1);
        cplx w = curve_integral(c2, [&](const steady::PointXY& q) { return t.value(p2, q); });
        CHECK(std::abs(w) < 1e-10);
    }
}

TEST_CASE("b1 closed forms") {
    for(int k = 1; k <= 3; k++) {
        TestFunction t(TestFunction::TestEven, k);
        CHECK(form_b1(t.params(0.3), t) == doctest::Approx(-1.25 * k * M_PI * M_PI).epsilon(1e-12));
    }
    // TestOdd1(k=1): 3 pi [ (B(1/2,1/3) + B(3/2,1/3))/9 - 2 B(1/2,4/3) ]
    using boost::math::beta;
    double odd1 = 3 * M_PI * ((beta(0.5, 1.0 / 3) + beta(1.5, 1.0 / 3)) / 9 - 2 * beta(0.5, 4.0 / 3));
    TestFunction t1(TestFunction::TestOdd1, 1);
    CHECK(form_b1(t1.params(0.5), t1) == doctest::Approx(odd1).epsilon(1e-10));
    CHECK(form_b1(t1.params(0.5), t1) <= -24.61);
    // modulational closed form against quadrature
    CHECK(form_b1_modulational(0.5) == doctest::Approx(-1.25 * M_PI * M_PI).epsilon(1e-12));
    CHECK(form_b1_modulational(1e-9) == doctest::Approx(-8 * M_PI).epsilon(1e-7));
    for(double a: {0.1, 1.0 / 3, 0.5}) {
        auto f = [&](double g) { return std::pow(1 - g * g, a); };
        double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -1., 1., 15, 1e-14);
        CHECK(form_b1_modulational(a) == doctest::Approx(2 * M_PI * (a * (a + 1) - 2) * I).epsilon(1e-8));
        TestFunction tm(TestFunction::ModTest, 1, a);
        CHECK(form_b1(tm.params(0.4), tm) == doctest::Approx(form_b1_modulational(a)).epsilon(1e-10));
    }
    TestFunction th(TestFunction::ModTestHalf);
    CHECK(form_b1(th.params(0.2), th) == doctest::Approx(-0.625 * M_PI * M_PI).epsilon(1e-10));
}

TEST_CASE("b2 vanishes for the symmetric test functions") {
    TestFunction t(TestFunction::TestEven, 1);
    double b2 = form_b2(t.params(0.5), t);
    CHECK(b2 >= 0);
    CHECK(b2 < 1e-8);
    TestFunction th(TestFunction::ModTestHalf);
    double bh = form_b2(th.params(0.6), th);
    CHECK(bh >= 0);
    CHECK(bh < 1e-8);
    CHECK(hatA_quadform(th.params(0.6), th) == doctest::Approx(-0.625 * M_PI * M_PI).epsilon(1e-9));
}

TEST_CASE("odd test functions certify instability") {
    TestFunction t1(TestFunction::TestOdd1, 1);
    steady::FlowParams p1 = t1.params(0.5);
    double b2 = form_b2(p1, t1);
    CHECK(b2 >= 0);
    CHECK(form_b1(p1, t1) + b2 < -0.23);
    TestFunction t2(TestFunction::TestOdd2, 1);
    double a2 = hatA_quadform(t2.params(0.9), t2);
    CHECK(a2 <= 19 * M_PI / 3 - 20.82);
    CHECK_THROWS_AS(form_b1(steady::FlowParams(0.5, 2), t1), InvalidParams);
}

TEST_CASE("coalescence check") {
    for(double eps: {0.0, 0.3}) {
        double v = coalescence_check(steady::FlowParams(eps));
        CHECK(v < 0);
        CHECK(v == doctest::Approx(-1.25 * M_PI * M_PI).epsilon(1e-8));
    }
}

TEST_CASE("b3 and b4") {
    CHECK(form_b3(steady::FlowParams(0)) == 0);
    CHECK(form_b4(steady::FlowParams(0)) == 0);
    double prev3 = 0, prev4 = 0;
    for(double eps: {0.2, 0.4, 0.6, 0.8}) {
        double b3 = form_b3(steady::FlowParams(eps)), b4 = form_b4(steady::FlowParams(eps));
        CHECK(prev3 <= b3 + 1e-9);
        CHECK(prev4 <= b4 + 1e-9);
        prev3 = b3;
        prev4 = b4;
    }
    CHECK(form_b3(steady::FlowParams(0.8)) < 24.38);
    CHECK(form_b4(steady::FlowParams(0.8)) > 6.94);
}

TEST_CASE("trapped region geometry") {
    // g'-mass of the trapped region: level-curve integral int g'(rho) T(rho) drho
    // against the meridian description in (theta, gamma), where dtheta dgamma = (g'/2) dx dy
    for(double eps: {0.3, 0.8}) {
        steady::FlowParams p(eps);
        double r0 = steady::rho0(p);
        auto levels = [&](double rho) { return 2 * std::exp(-2 * rho) * curve_period(make_level_curve(p, rho)); };
        boost::math::quadrature::tanh_sinh<double> ts;
        double viaLevels = ts.integrate(levels, -r0 + 1e-9, r0 - 1e-9, 1e-10);
        // split theta at the kinks of the meridian profile
        std::vector<double> cuts = {0, M_PI};
        double c2 = (1 + eps) * (2 * eps - 1) / (2 * eps * eps);
        if(c2 > 0 && c2 < 1) {
            double ts1 = std::acos(std::sqrt(c2));
            cuts = {0, ts1, M_PI - ts1, M_PI};
        }
        double viaMeridians = 0;
        for(std::size_t i = 0; i + 1 < cuts.size(); i++)
            viaMeridians += boost::math::quadrature::gauss_kronrod<double, 61>::integrate([&](double th) {
                TrappedMeridian tm = trapped_meridian(eps, th);
                return 2 * tm.inner + 2 * (1 - tm.outer);
            }, cuts[i], cuts[i + 1], 15, 1e-12);
        viaMeridians *= 2 * 2;   // theta in [0, 2pi) by symmetry; g' = 2 x Jacobian
        CHECK(viaLevels == doctest::Approx(viaMeridians).epsilon(1e-6));
    }
    // boundary ellipse passes through the hyperbolic point image xi = 1 and the
    // far end xi = 2 eps - 1
    CHECK(std::fabs(trapped_ellipse_eta2(0.5, 1.0)) < 1e-14);
    CHECK(std::fabs(trapped_ellipse_eta2(0.5, 0.0)) < 1e-14);
    CHECK(ellipse_nesting(0.4, 0.5));
    CHECK_FALSE(ellipse_nesting(0.5, 0.4));
    CHECK(ellipse_nesting(0.3, 0.3));
}

TEST_CASE("test function validation") {
    CHECK_THROWS_AS(TestFunction(TestFunction::TestEven, 0), InvalidParams);
    CHECK_THROWS_AS(TestFunction(TestFunction::ModTest, 1, 0.7), InvalidParams);
    TestFunction t(TestFunction::TestOdd2, 2);
    CHECK(t.cells() == 5);
}
