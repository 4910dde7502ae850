#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "lifetime/predictors.hpp"
#include "lifetime/tauberian.hpp"

using namespace lifetime;
using std::numbers::pi;

TEST_CASE("bounded interval constants")
{
    const double half[1] = {0.5};
    const BoundedPredictions b = predict_bounded(spectrum_interval(0, 1), half);
    const double lam = pi * pi / 2;
    const double rate = -1.5 * std::pow(pi, 2.0 / 3) * std::pow(lam, 2.0 / 3);
    CHECK(b.ibm_log.rate == doctest::Approx(rate).epsilon(1e-14));
    CHECK(b.ibm_log.rate == doctest::Approx(-9.3298).epsilon(1e-3));
    CHECK(b.ibm_log.t_power == doctest::Approx(1.0 / 3));
    CHECK(b.ibm_log.rate < 0);

    const double C = lam * std::pow(2.0, 3.5) / std::sqrt(3 * pi) * std::pow(4 / pi, 2);
    REQUIRE(b.ibm_sharp.prefactor_constant);
    CHECK(*b.ibm_sharp.prefactor_constant == doctest::Approx(C).epsilon(1e-14));
    CHECK(std::abs(*b.ibm_sharp.prefactor_constant - 29.48) < 0.005);
    CHECK(b.ibm_sharp.sharp);
    CHECK(b.ibm_sharp.prefactor_power == 0.5);
    CHECK(b.ibm_sharp.rate == doctest::Approx(rate).epsilon(1e-14));
    CHECK(b.ibm_sharp.process == "ibm");

    CHECK(b.bm.rate == doctest::Approx(-lam).epsilon(1e-15));
    CHECK(*b.bm.prefactor_constant == doctest::Approx(4 / pi).epsilon(1e-14));
}

TEST_CASE("prefactor bracket")
{
    for (double lam : {1.0, pi * pi / 2, 10.0}) {
        const PrefactorBracket br = ibm_prefactor_bracket(lam);
        CHECK(br.lower == doctest::Approx(2 * lam * std::sqrt(2 * pi / 3)).epsilon(1e-15));
        CHECK(br.upper == doctest::Approx(pi * lam * std::sqrt(2 * pi / 3)).epsilon(1e-15));
        CHECK(br.value == doctest::Approx(lam * std::pow(2.0, 3.5) / std::sqrt(3 * pi)).epsilon(1e-15));
        CHECK(br.lower <= br.value);
        CHECK(br.value <= br.upper);
    }
}

TEST_CASE("sharp constant vanishes at the boundary")
{
    const SpectralDomain d = spectrum_interval(0, 1);
    double prev = 1e300;
    for (double z : {0.1, 1e-3, 1e-6}) {
        const double zz[1] = {z};
        const double c = *predict_bounded(d, zz).ibm_sharp.prefactor_constant;
        CHECK(c < prev);
        prev = c;
    }
    CHECK(prev < 1e-9);
    const double edge[1] = {0.0};
    CHECK_THROWS_AS(predict_bounded(d, edge), std::invalid_argument);
}

TEST_CASE("bounded rate and prefactor scale with the eigenvalue")
{
    for (double s : {0.25, 2.0, 9.0}) {
        CHECK(ibm_rate(s * 3.0) == doctest::Approx(std::pow(s, 2.0 / 3) * ibm_rate(3.0)).epsilon(1e-14));
        CHECK(ibm_prefactor(s * 3.0) == doctest::Approx(s * ibm_prefactor(3.0)).epsilon(1e-14));
    }
}

TEST_CASE("twisted domains with p = 1")
{
    CHECK(twisted_c_gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    const TwistedPredictions t = predict_twisted({1.0, 1.0});
    CHECK(t.bm.rate == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(t.btbm.rate == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(t.ibm.rate == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(t.ibm.bound == BoundKind::upper);
    CHECK_FALSE(t.ibm.sharp);
    CHECK(t.btbm.log_power == -1.0);
    CHECK(t.btbm.t_power == 0.0);
}

TEST_CASE("twisted domains with p < 1")
{
    for (double p : {0.2, 0.5, 0.9}) {
        const TwistedPredictions t = predict_twisted({1.3, p});
        CHECK(t.btbm.rate / t.ibm.rate == doctest::Approx(std::pow(2.0, (2 * p - 2) / (3 + p))).epsilon(1e-14));
        CHECK(t.bm.rate == doctest::Approx(-twisted_l1(1.3, p)).epsilon(1e-15));
        CHECK(t.bm.t_power == doctest::Approx((1 - p) / (1 + p)));
        CHECK(t.ibm.t_power == doctest::Approx((1 - p) / (3 + p)));
        const double l1 = twisted_l1(1.3, p);
        const double ibm = -(3 + p) / (2 + 2 * p) * std::pow((1 + p) / (1 - p), (1 - p) / (3 + p)) *
                           std::pow(pi, (2 - 2 * p) / (3 + p)) * std::pow(l1, (2 + 2 * p) / (3 + p));
        CHECK(t.ibm.rate == doctest::Approx(ibm).epsilon(1e-14));
    }
    CHECK(std::isfinite(twisted_l1(1.0, 1 - 1e-6)));
    CHECK(std::isfinite(twisted_cp(1 - 1e-6)));
    CHECK(twisted_l1(1.0, 1 - 1e-6) > 0);
}

TEST_CASE("twisted parameter validation")
{
    for (double p : {1.5, 0.0, -0.2}) {
        try {
            predict_twisted({1.0, p});
            FAIL("accepted p outside (0,1]");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("(0,1]") != std::string::npos);
        }
    }
    CHECK_THROWS_AS(predict_twisted({0.0, 0.5}), std::invalid_argument);
}

TEST_CASE("parabola region, exponential boundary")
{
    const double j0 = bessel_zero(0.0);
    const double c2 = std::pow(1.5, 10.0 / 6) * std::cbrt(2.0) * std::pow(j0 * j0 * 2, 2.0 / 3) * std::cbrt(pi * pi / 8);
    CHECK(parabola_exp_constant(2.0, j0 * j0) == doctest::Approx(c2).epsilon(1e-14));
    const ParabolaPredictions pp = predict_parabola({ParabolaVariant::exp_power, 2.0, 1, 0.5, 0, 0.0});
    CHECK(pp.btbm_lower.rate == doctest::Approx(-c2).epsilon(1e-13));
    CHECK(pp.btbm_upper.rate == pp.btbm_lower.rate);
    CHECK(pp.bm_lower.rate == doctest::Approx(-j0 * j0).epsilon(1e-14));
    CHECK(pp.bm_lower.log_power == doctest::Approx(1.0));
    CHECK(pp.btbm_lower.log_power == doctest::Approx(4.0 / 6));
    CHECK(pp.ibm_upper.bound == BoundKind::upper);
    CHECK_FALSE(pp.ibm_upper.sharp);
}

TEST_CASE("parabola constant through the Tauberian route")
{
    for (double nu : {0.0, 0.5, 1.0})
        for (double p : {0.5, 1.0, 2.0, 3.0}) {
            const double j = bessel_zero(nu);
            const double direct = parabola_exp_constant(p, j * j);
            const double via = stretched_laplace_constant(j * j, p).constant * std::cbrt(pi * pi / 8);
            CHECK(std::abs(direct - via) <= 1e-13 * direct);
        }
}

TEST_CASE("parabola region, algebraic boundary")
{
    for (double alpha : {0.2, 0.5, 0.8})
        for (double beta : {-0.5, 0.0, 1.0}) {
            const ParabolaPredictions pp = predict_parabola({ParabolaVariant::algebraic, 1, 1.4, alpha, beta, 0.0});
            const AlgebraicConstants c = algebraic_bm_constants(1.4, alpha, beta, std::pow(bessel_zero(0.0), 2));
            CHECK(pp.bm_lower.rate == doctest::Approx(-c.c1));
            CHECK(pp.bm_upper.rate == doctest::Approx(-c.c2));
            CHECK(pp.btbm_lower.t_power == doctest::Approx((1 - alpha) / (3 + alpha)));
            // ordering of the BTBM constants follows the Brownian ones
            CHECK((c.c1 >= c.c2) == (algebraic_btbm_constant(c.c1, alpha, beta) >= algebraic_btbm_constant(c.c2, alpha, beta)));
            CHECK(pp.ibm_upper.bound == BoundKind::upper);
            CHECK_FALSE(pp.ibm_upper.sharp);
            CHECK(pp.btbm_lower.bound == BoundKind::lower);
        }
    for (double c : {0.5, 1.0, 2.0})
        CHECK(algebraic_btbm_constant(2 * c, 0.4, 0.3) / algebraic_btbm_constant(c, 0.4, 0.3) ==
              doctest::Approx(std::pow(2.0, 2 * 1.4 / 3.4)).epsilon(1e-14));
    CHECK_THROWS_AS(predict_parabola({ParabolaVariant::algebraic, 1, 1, 1.0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(predict_parabola({ParabolaVariant::algebraic, 1, 1, 0.0, 0, 0}), std::invalid_argument);
}

TEST_CASE("Bessel zeros")
{
    CHECK(bessel_zero(0.0) == doctest::Approx(2.404825557695773).epsilon(1e-14));
    CHECK(bessel_zero(0.5) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(bessel_zero(1.0) == doctest::Approx(3.8317059702).epsilon(1e-10));
    for (double nu : {0.0, 0.5, 1.0, 2.5, 10.0, 30.0}) {
        CAPTURE(nu);
        const double j = bessel_zero(nu);
        CHECK(std::abs(bessel_j_series(nu, j)) < 1e-10);
        CHECK(j == doctest::Approx(boost::math::cyl_bessel_j_zero(nu, 1)).epsilon(1e-12));
        // no earlier sign change
        for (double x = 0.05; x < j - 1e-3; x += 0.05) CHECK(bessel_j_series(nu, x) > 0);
    }
    for (double x : {0.3, 2.0, 7.5}) CHECK(bessel_j_series(1.5, x) == doctest::Approx(boost::math::cyl_bessel_j(1.5, x)).epsilon(1e-12));
}

TEST_CASE("signs over random parameters")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double p = 0.02 + 0.97 * U(gen), gamma = 0.1 + 5 * U(gen);
        const TwistedPredictions t = predict_twisted({gamma, p});
        CHECK(t.bm.rate < 0);
        CHECK(t.ibm.rate < 0);
        CHECK(t.btbm.rate < 0);
        const ParabolaPredictions e = predict_parabola({ParabolaVariant::exp_power, 0.2 + 4 * U(gen), 1, 0.5, 0, 3 * U(gen)});
        CHECK(e.btbm_lower.rate < 0);
        CHECK(e.bm_lower.rate < 0);
        const ParabolaPredictions a =
            predict_parabola({ParabolaVariant::algebraic, 1, 0.2 + 3 * U(gen), 0.05 + 0.9 * U(gen), 2 * U(gen) - 1, 0});
        CHECK(a.btbm_lower.rate < 0);
        CHECK(a.btbm_upper.rate < 0);
        const double L = 0.5 + U(gen);
        const double z[1] = {(0.01 + 0.98 * U(gen)) * L};
        const BoundedPredictions b = predict_bounded(spectrum_interval(0, L), z);
        CHECK(b.ibm_log.rate < 0);
        CHECK(*b.ibm_sharp.prefactor_constant > 0);
    }
}
