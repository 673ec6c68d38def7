#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "catseye/errors.h"
#include "catseye/galerkin.h"
#include "catseye/orthopoly.h"
#include <cmath>
#include <random>

using namespace catseye;
using namespace catseye::galerkin;
typedef std::complex<double> cplx;

TEST_CASE("antiderivatives of the Hermite functions") {
    // F_n(0) = 0 and F_n' = H_n (finite differences); symbolic values for n <= 2
    const double h = 1e-5;
    for(double y: {-2.0, -0.4, 0.9, 3.1}) {
        auto F  = hermite_antiderivatives(10, y);
        auto Fp = hermite_antiderivatives(10, y + h), Fm = hermite_antiderivatives(10, y - h);
        auto H  = poly::hermite_functions(10, y);
        for(int n = 0; n <= 10; n++)
            CHECK(std::fabs((Fp[n] - Fm[n]) / (2 * h) - H[n]) < 1e-8);
        double c = std::pow(M_PI, -0.25);
        CHECK(F[0] == doctest::Approx(c * std::sqrt(M_PI / 2) * std::erf(y / M_SQRT2)).epsilon(1e-13));
        CHECK(F[1] == doctest::Approx(c * M_SQRT2 * (1 - std::exp(-y * y / 2))).epsilon(1e-12));
        // H_2 = c (2y^2 - 1) e^{-y^2/2} / sqrt 2
        double F2 = c / M_SQRT2 * (-2 * y * std::exp(-y * y / 2) + std::sqrt(M_PI / 2) * std::erf(y / M_SQRT2));
        CHECK(F[2] == doctest::Approx(F2).epsilon(1e-12));
    }
    for(double v: hermite_antiderivatives(8, 0.0)) CHECK(v == 0);
}

TEST_CASE("dense symmetric eigensolver") {
    Eigen::MatrixXd A(2, 2);
    A << 2, 0, 0, 3;
    SpectrumTable t = solve_symmetric(A);
    CHECK(t.eigenvalues[0].real() == doctest::Approx(2));
    CHECK(t.eigenvalues[1].real() == doctest::Approx(3));
    std::mt19937 rng(12345);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd R(50, 50);
    for(int i = 0; i < 50; i++) for(int j = 0; j < 50; j++) R(i, j) = nd(rng);
    Eigen::MatrixXd S = R + R.transpose();
    SpectrumTable st = solve_symmetric(S, true);
    Eigen::VectorXd lam(50);
    for(int i = 0; i < 50; i++) lam(i) = st.eigenvalues[i].real();
    for(int i = 1; i < 50; i++) CHECK(lam(i) >= lam(i - 1));
    Eigen::MatrixXd V = st.vectors.real();
    CHECK((V * lam.asDiagonal() * V.transpose() - S).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::MatrixXd bad = S;
    bad(0, 1) += 1;
    CHECK_THROWS_AS(solve_symmetric(bad), InvalidParams);
}

TEST_CASE("dense generalized eigensolver") {
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd B(12, 12);
    for(int i = 0; i < 12; i++) for(int j = 0; j < 12; j++) B(i, j) = cplx(nd(rng), nd(rng));
    Eigen::MatrixXcd D = B * B.adjoint() + Eigen::MatrixXcd::Identity(12, 12);
    SpectrumTable t = solve_generalized(D, D);
    for(const cplx& s: t.eigenvalues) CHECK(std::abs(s - 1.0) < 1e-10);
    Eigen::MatrixXcd notPD = -D;
    CHECK_THROWS_AS(solve_generalized(D, notPD), SingularD);
}

TEST_CASE("co-periodic Galerkin matrix") {
    Eigen::MatrixXd A0 = assemble_Atilde(0.0, 7);
    CHECK(A0.rows() == 225);
    CHECK((A0 - A0.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    SpectrumTable t = solve_symmetric(A0);
    CHECK(t.eigenvalues[2].real() < 1e-3);
    CHECK(t.eigenvalues[3].real() > 0.5);
    CHECK(t.eigenvalues[3].real() == doctest::Approx(2.0 / 3).epsilon(2e-3));
    for(const cplx& s: t.eigenvalues) CHECK(s.real() >= -1e-8);
    CHECK(t.cluster.size() == t.eigenvalues.size());
    CHECK_THROWS_AS(assemble_Atilde(0.2, 0), InvalidParams);
}

TEST_CASE("modulational matrices") {
    const int N = 3;
    const double alpha = 0.5;
    BasisSpec b;
    b.N = N;
    ModulationalMatrices m0 = assemble_modulational(0.0, alpha, N);
    // diagonal of D: |grad_a (e^{i(k+a)x} H_n)|^2 = (k+a)^2 + n + 1/2
    for(int n = 0; n <= 2 * N; n++)
        for(int k = -N; k <= N; k++) {
            int i = b.index(n, k);
            CHECK(m0.D(i, i).real() == doctest::Approx((k + alpha) * (k + alpha) + n + 0.5).epsilon(1e-10));
        }
    CHECK((m0.D - m0.D.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    // at eps = 0 the x-modes decouple
    double off = 0;
    for(int n1 = 0; n1 <= 2 * N; n1++) for(int k1 = -N; k1 <= N; k1++)
        for(int n2 = 0; n2 <= 2 * N; n2++) for(int k2 = -N; k2 <= N; k2++)
            if(k1 != k2) off = std::max(off, std::abs(m0.M(b.index(n1, k1), b.index(n2, k2))));
    CHECK(off < 1e-10);
    // full spectrum equals the union of single-mode spectra
    SpectrumTable full = solve_generalized(m0.M, m0.D);
    std::vector<cplx> uni;
    const int nb = 2 * N + 1;
    for(int k = -N; k <= N; k++) {
        Eigen::MatrixXcd Mk(nb, nb), Dk(nb, nb);
        for(int a = 0; a < nb; a++) for(int c = 0; c < nb; c++) {
            Mk(a, c) = m0.M(b.index(a, k), b.index(c, k));
            Dk(a, c) = m0.D(b.index(a, k), b.index(c, k));
        }
        for(const cplx& s: solve_generalized(Mk, Dk).eigenvalues) uni.push_back(s);
    }
    REQUIRE(uni.size() == full.eigenvalues.size());
    for(const cplx& s: full.eigenvalues) {
        double best = 1e300;
        for(const cplx& u: uni) best = std::min(best, std::abs(s - u));
        CHECK(best < 1e-8);
    }
    CHECK_THROWS_AS(assemble_modulational(0.1, 0.0, N), InvalidParams);
}

TEST_CASE("modulational spectrum at N = 7") {
    for(double eps: {0.0, 0.1}) {
        ModulationalMatrices mm = assemble_modulational(eps, 0.5, 7);
        SpectrumTable t = solve_generalized(mm.M, mm.D);
        int unstable = 0;
        for(const cplx& s: t.eigenvalues) if(s.real() > 1e-6) unstable++;
        CHECK(unstable == 2);
        // Hamiltonian pairing sigma <-> -conj(sigma)
        double worst = 0;
        for(const cplx& s: t.eigenvalues) {
            double best = 1e300;
            for(const cplx& r: t.eigenvalues) best = std::min(best, std::abs(r + std::conj(s)));
            worst = std::max(worst, best / std::max(1.0, std::abs(s)));
        }
        CHECK(worst < 1e-6);
        if(eps == 0.0) {
            CHECK(t.eigenvalues[0].real() == doctest::Approx(0.186).epsilon(0.01 / 0.186));
            CHECK(t.eigenvalues[1].real() == doctest::Approx(t.eigenvalues[0].real()).epsilon(1e-8));
        }
    }
}
