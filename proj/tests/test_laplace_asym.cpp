#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lifetime/laplace_asym.hpp"
#include "lifetime/quadrature.hpp"

using namespace lifetime;
using std::numbers::pi;

namespace {

const double kHalfPi2 = pi * pi / 2;

double ratio(SaddleKind kind, const SaddleParams& p, double s)
{
    return std::exp(numeric_oracle(kind, p, s).log_value - log_asymptotic(kind, p, s));
}

}  // namespace

TEST_CASE("Laplace point formula on a Gaussian")
{
    LaplaceProblem g{[](double) { return 1.0; }, [](double x) { return -(x - 1) * (x - 1); }, 1.0, -2.0};
    const double lambda = 1e4;
    CHECK(laplace_point(g, lambda) == doctest::Approx(std::sqrt(pi / lambda)).epsilon(1e-14));
    CHECK(laplace_point(g, lambda) == doctest::Approx(0.017725).epsilon(1e-4));
    const LogQuadrature q = integrate_log([&](double x) { return lambda * g.f(x); }, 0.0,
                                          std::numeric_limits<double>::infinity(), 1.0);
    CHECK(std::exp(q.log_value) / laplace_point(g, lambda) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Laplace point scaling in lambda")
{
    LaplaceProblem g{[](double x) { return 1 + x; }, [](double x) { return -0.1 - (x - 2) * (x - 2); }, 2.0, -2.0};
    for (double lambda : {1.0, 10.0, 100.0}) {
        const double lhs = laplace_point(g, 4 * lambda);
        const double rhs = laplace_point(g, lambda) * std::exp(3 * lambda * g.f(g.x0)) / 2;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
    CHECK(log_laplace_point(g, 1e6) == doctest::Approx(std::log(3.0) - 1e5 + 0.5 * std::log(pi / 1e6)).epsilon(1e-14));
}

TEST_CASE("Laplace point rejects a non-maximum")
{
    LaplaceProblem bad{[](double) { return 1.0; }, [](double x) { return x * x; }, 0.0, 2.0};
    CHECK_THROWS(laplace_point(bad, 1.0));
    bad.f2 = 0.0;
    CHECK_THROWS(laplace_point(bad, 1.0));
}

TEST_CASE("inverse-square exponent reduces to the general formula")
{
    const double x0 = std::cbrt(2.0);
    LaplaceProblem p{[](double) { return 1.0; }, [](double x) { return -(x + 1 / (x * x)); }, x0, -6 / std::pow(x0, 4)};
    CHECK(p.f(x0) == doctest::Approx(-3 * std::pow(2.0, -2.0 / 3)).epsilon(1e-15));
    for (double dx : {-1e-3, 1e-3, -0.3, 0.5}) CHECK(p.f(x0 + dx) < p.f(x0));
    for (double lambda : {1e2, 1e4, 1e6})
        CHECK(log_asym_inverse_square(lambda) == doctest::Approx(log_laplace_point(p, lambda)).epsilon(1e-14));
}

TEST_CASE("inverse-square integral")
{
    CHECK(std::abs(ratio(SaddleKind::inverse_square, {}, 1e4) - 1) <= 0.01);
    CHECK(std::abs(ratio(SaddleKind::inverse_square, {}, 1e6) - 1) <= 0.001);
    CHECK(log_asym_inverse_square(1e4) ==
          doctest::Approx(-3e4 * std::pow(2.0, -2.0 / 3) + 0.5 * std::log(std::pow(2.0, 4.0 / 3) * pi / 3e4)).epsilon(1e-15));
    CHECK(asym_inverse_square(10.0) == doctest::Approx(std::exp(log_asym_inverse_square(10.0))).epsilon(1e-15));
}

TEST_CASE("saddle integrals at the bounded-domain parameters")
{
    const SaddleParams p{kHalfPi2, kHalfPi2, 0};
    const double r3 = ratio(SaddleKind::saddle, p, 1e4), r4 = ratio(SaddleKind::saddle_moment, p, 1e4);
    CHECK(r3 >= 0.99);
    CHECK(r3 <= 1.01);
    CHECK(r4 >= 0.99);
    CHECK(r4 <= 1.01);
}

TEST_CASE("saddle exponent algebra")
{
    for (double a : {0.5, kHalfPi2, 3.0})
        for (double b : {0.2, kHalfPi2, 7.0}) {
            const double c = 3 * std::cbrt(a) * std::pow(b, 2.0 / 3) * std::pow(2.0, -2.0 / 3);
            CHECK(saddle_exponent_coefficient(a, b) == doctest::Approx(c).epsilon(1e-14));
            CHECK(saddle_location(a, b, 10.0) == doctest::Approx(std::cbrt(20 * a / b)).epsilon(1e-15));
        }
    // bounded-domain rate
    const double lam = kHalfPi2;
    CHECK(saddle_exponent_coefficient(kHalfPi2, lam) ==
          doctest::Approx(1.5 * std::pow(pi, 2.0 / 3) * std::pow(lam, 2.0 / 3)).epsilon(1e-14));
}

TEST_CASE("saddle integral is the inverse-square integral after substitution")
{
    for (double a : {0.5, kHalfPi2})
        for (double b : {0.3, kHalfPi2})
            for (double t : {1e2, 1e5}) {
                const double lambda = std::cbrt(a * t) * std::pow(b, 2.0 / 3);
                CHECK(log_asym_saddle(a, b, t) ==
                      doctest::Approx(std::log(a * t / b) / 3 + log_asym_inverse_square(lambda)).epsilon(1e-13));
            }
}

TEST_CASE("cosine moment with K = 0 is the saddle moment")
{
    for (double t : {1e2, 1e4, 1e6}) {
        CHECK(log_asym_cosine_moment(0, kHalfPi2, t) == doctest::Approx(log_asym_saddle_moment(kHalfPi2, kHalfPi2, t)).epsilon(1e-15));
        CHECK(log_asym_cosine_moment(5, 2.0, t) == log_asym_cosine_moment(0, 2.0, t));
    }
    const double t = 1e4;
    CHECK(numeric_oracle(SaddleKind::cosine_moment, {0, kHalfPi2, 0}, t).log_value ==
          doctest::Approx(numeric_oracle(SaddleKind::saddle_moment, {kHalfPi2, kHalfPi2, 0}, t).log_value).epsilon(1e-10));
}

TEST_CASE("cosine moment at finite t carries the cosine at the saddle")
{
    // The quadrature ratio tracks cos(πK/x0) with x0 = (2t)^{1/3}; it reaches 1 only as t grows.
    const double t = 1e4, x0 = saddle_location(kHalfPi2, kHalfPi2, t);
    for (double K : {5.0, 10.0}) {
        const double r = ratio(SaddleKind::cosine_moment, {0, kHalfPi2, K}, t);
        CHECK(r == doctest::Approx(std::cos(pi * K / x0)).epsilon(0.02));
    }
    const double r0 = ratio(SaddleKind::cosine_moment, {0, kHalfPi2, 0}, 1e8);
    const double r10 = ratio(SaddleKind::cosine_moment, {0, kHalfPi2, 10}, 1e8);
    CHECK(r10 / r0 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("oracle sanity")
{
    const OracleEstimate e = numeric_oracle(SaddleKind::inverse_square, {}, 1.0);
    CHECK(std::isfinite(e.log_value));
    CHECK(e.converged);

    // Riemann (midpoint) sum of u e^{-1/u² - u} on [0, 60]
    const int n = 1000000;
    const double h = 60.0 / n;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        const double u = (i + 0.5) * h;
        sum += u * std::exp(-1 / (u * u) - u);
    }
    sum *= h;
    const OracleEstimate m = numeric_oracle(SaddleKind::saddle_moment, {1, 1, 0}, 1.0);
    CHECK(std::abs(std::exp(m.log_value) - sum) <= std::max(m.rel_error, 1e-8) * sum);

    CHECK_THROWS(numeric_oracle(SaddleKind::saddle, {-1, 1, 0}, 1.0));
    CHECK_THROWS(numeric_oracle(SaddleKind::inverse_square, {}, 0.0));
}

TEST_CASE("monotone approach along the grid")
{
    const std::vector<double> grid{1e2, 1e3, 1e4, 1e5};
    const SaddleParams p{kHalfPi2, kHalfPi2, 0};
    for (auto [kind, params] : {std::pair{SaddleKind::inverse_square, SaddleParams{}},
                                std::pair{SaddleKind::saddle, p},
                                std::pair{SaddleKind::saddle_moment, p},
                                std::pair{SaddleKind::cosine_moment, SaddleParams{0, kHalfPi2, 0}}}) {
        CAPTURE(to_string(kind));
        double prev = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            const double gap = std::abs(ratio(kind, params, s) - 1);
            CHECK(gap < prev);
            if (s == 1e4) CHECK(gap <= 0.01);
            prev = gap;
        }
    }
}
