#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lifetime/tauberian.hpp"

using namespace lifetime;

TEST_CASE("interval small-ball law maps to the cosh transform")
{
    const LaplaceLaw law = debruijn_forward({1.0, 0.0, 0.5});
    CHECK(law.constant == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(law.exponent_power == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law.log_power == 0.0);
    for (double lambda : {1e4, 1e6}) {
        const double y = std::sqrt(2 * lambda);
        const double log_e = -(y + std::log1p(std::exp(-2 * y)) - std::log(2.0));
        CHECK(std::abs(log_e / law.log_transform(lambda) - 1) <= 0.01);
    }
}

TEST_CASE("de Bruijn constant by substitution")
{
    CHECK(debruijn_forward({1.0, 0.0, 1.0}).constant == doctest::Approx(2.0).epsilon(1e-15));
    for (double alpha : {0.3, 1.0, 2.5})
        for (double beta : {-1.0, 0.0, 0.7}) {
            const double c1 = debruijn_forward({alpha, beta, 1.3}).constant;
            const double c2 = debruijn_forward({alpha, beta, 2.6}).constant;
            CHECK(c2 / c1 == doctest::Approx(std::pow(2.0, 1 / (1 + alpha))).epsilon(1e-14));
            const LaplaceLaw l = debruijn_forward({alpha, beta, 1.3});
            CHECK(l.exponent_power == doctest::Approx(alpha / (1 + alpha)).epsilon(1e-15));
            CHECK(l.log_power == doctest::Approx(beta / (1 + alpha)).epsilon(1e-15));
        }
}

TEST_CASE("half-power small-ball law gives the cube-root class")
{
    for (double C : {0.5, 1.0, 4.0}) CHECK(std::abs(debruijn_forward({0.5, 0.0, C}).exponent_power - 1.0 / 3) <= 1e-14);
}

TEST_CASE("stretched law constant")
{
    const LaplaceLaw l = stretched_laplace_constant(1.0, 2.0);
    CHECK(l.constant == doctest::Approx(std::pow(1.5, 5.0 / 3) * 2).epsilon(1e-14));
    CHECK(l.exponent_power == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(l.log_power == doctest::Approx(-4.0 / 6).epsilon(1e-15));
    for (double p : {0.5, 1.0, 3.0}) {
        CHECK(stretched_laplace_constant(2.5, p).log_power == doctest::Approx(-4 / (3 * p)).epsilon(1e-15));
        CHECK(stretched_laplace_constant(8.0, p).constant / stretched_laplace_constant(1.0, p).constant ==
              doctest::Approx(4.0).epsilon(1e-14));
        // the same constant through the general map
        const SmallBallLaw sb = stretched_small_ball(1.7, p);
        CHECK(sb.alpha == 0.5);
        CHECK(sb.beta == doctest::Approx(-2 / p));
        CHECK(sb.C == doctest::Approx(1.7 * std::pow(2.0, 2 / p)).epsilon(1e-15));
        CHECK(debruijn_forward(sb).constant == doctest::Approx(stretched_laplace_constant(1.7, p).constant).epsilon(1e-14));
    }
}

TEST_CASE("polynomial small-ball law, exact transform")
{
    for (double lambda : {0.5, 10.0, 1e3, 1e6})
        CHECK(log_polynomial_transform(2.0, lambda) ==
              doctest::Approx(std::log(-std::expm1(-lambda) / lambda)).epsilon(1e-13));
}

TEST_CASE("polynomial small-ball law, logarithmic Laplace asymptotics")
{
    const std::vector<double> grid{1e2, 1e4, 1e6};
    for (double c : {0.5, 2.0, 5.0}) {
        CAPTURE(c);
        const auto rows = polynomial_laplace_table(c, grid);
        REQUIRE(rows.size() == 3);
        double prev = 1e300;
        for (const auto& r : rows) {
            CHECK(r.ratio == doctest::Approx(r.log_transform / std::log(r.lambda)).epsilon(1e-15));
            const double gap = std::abs(r.ratio + c / 2);
            CHECK(gap <= prev);
            prev = gap;
            CHECK(r.ratio >= std::min(r.lower, r.upper));
            CHECK(r.ratio <= std::max(r.lower, r.upper));
        }
    }
    const auto last = polynomial_laplace_table(2.0, std::vector<double>{1e6}).front();
    CHECK(std::abs(last.ratio + 1) <= 0.1);
}
