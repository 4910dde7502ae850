#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "lifetime/domain_spectra.hpp"

using namespace lifetime;
using std::numbers::pi;

TEST_CASE("unit interval principal mode")
{
    const SpectralDomain d = spectrum_interval(0.0, 1.0, 1);
    REQUIRE(d.modes().size() == 1);
    CHECK(d.modes()[0].eigenvalue == doctest::Approx(pi * pi / 2).epsilon(1e-15));
    CHECK(d.modes()[0].eigenvalue == doctest::Approx(4.9348).epsilon(1e-5));
    for (double x : {0.1, 0.37, 0.5, 0.9}) {
        const double z[1] = {x};
        CHECK(d.eigenfunction(0, z) == doctest::Approx(std::sqrt(2.0) * std::sin(pi * x)).epsilon(1e-15));
    }
    CHECK(d.modes()[0].integral == doctest::Approx(2 * std::sqrt(2.0) / pi).epsilon(1e-15));
    CHECK(d.modes()[0].integral == doctest::Approx(0.90032).epsilon(1e-5));
}

TEST_CASE("interval eigenvalues scale with the square of the length")
{
    CHECK(spectrum_interval(0.0, 2.0, 1).modes()[0].eigenvalue == doctest::Approx(pi * pi / 8).epsilon(1e-15));
    const double base = spectrum_interval(0.0, 1.0, 1).modes()[0].eigenvalue;
    for (double L : {0.5, 2.0, 3.0, 10.0})
        CHECK(spectrum_interval(-1.0, L - 1.0, 1).modes()[0].eigenvalue ==
              doctest::Approx(base / (L * L)).epsilon(1e-14));
}

TEST_CASE("higher interval modes")
{
    const SpectralDomain d = spectrum_interval(0.0, 1.0, 3);
    CHECK(d.modes()[1].eigenvalue == doctest::Approx(2 * pi * pi).epsilon(1e-15));
    CHECK(d.modes()[2].eigenvalue == doctest::Approx(4.5 * pi * pi).epsilon(1e-15));
    CHECK(std::abs(d.modes()[1].integral) < 1e-15);
}

TEST_CASE("box spectra")
{
    const SpectralDomain sq = spectrum_box({{0, 1}, {0, 1}}, 1);
    CHECK(sq.modes()[0].eigenvalue == doctest::Approx(pi * pi).epsilon(1e-15));
    const double c[2] = {0.5, 0.5}, q[2] = {0.2, 0.7};
    CHECK(sq.eigenfunction(0, c) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sq.eigenfunction(0, q) == doctest::Approx(2 * std::sin(0.2 * pi) * std::sin(0.7 * pi)).epsilon(1e-14));
    CHECK(sq.modes()[0].integral == doctest::Approx(8 / (pi * pi)).epsilon(1e-15));

    for (double L : {0.5, 3.0})
        CHECK(spectrum_box({{0, L}, {0, L}}, 2).modes()[0].eigenvalue == doctest::Approx(pi * pi / (L * L)).epsilon(1e-14));
    CHECK(spectrum_box({{0, 1}, {0, 2}}, 4).modes()[0].eigenvalue == doctest::Approx(5 * pi * pi / 8).epsilon(1e-15));
}

TEST_CASE("box modes are sorted and carry product integrals")
{
    const SpectralDomain d = spectrum_box({{0, 1}, {0, 2}, {-1, 0.5}}, 6);
    const auto modes = d.modes();
    REQUIRE(modes.size() == 216);
    for (std::size_t k = 1; k < modes.size(); ++k) CHECK(modes[k].eigenvalue >= modes[k - 1].eigenvalue);
    CHECK(modes[1].eigenvalue > modes[0].eigenvalue);
    for (const Mode& m : modes) {
        double lam = 0, integral = 1;
        for (std::size_t i = 0; i < 3; ++i) {
            const Interval side = d.sides()[i];
            lam += interval_eigenvalue(side, m.wave_numbers[i]);
            integral *= interval_eigenfunction_integral(side, m.wave_numbers[i]);
        }
        CHECK(m.eigenvalue == doctest::Approx(lam).epsilon(1e-14));
        CHECK(m.integral == doctest::Approx(integral).epsilon(1e-13).scale(1e-300));
    }
}

TEST_CASE("principal data")
{
    const double half[1] = {0.5};
    const Principal p = principal(spectrum_interval(0, 1), half);
    CHECK(p.lambda == doctest::Approx(pi * pi / 2).epsilon(1e-15));
    CHECK(p.A == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(p.A > 0);

    double prev = p.A;
    for (double z : {1e-2, 1e-4, 1e-8}) {
        const double zz[1] = {z};
        const double a = principal(spectrum_interval(0, 1), zz).A;
        CHECK(a > 0);
        CHECK(a < prev);
        prev = a;
    }
    CHECK(prev < 1e-6);

    const double c[2] = {0.5, 0.5};
    CHECK(principal(spectrum_box({{0, 1}, {0, 1}}), c).A == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("invalid inputs are rejected")
{
    CHECK_THROWS_AS(spectrum_interval(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_interval(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_interval(0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_box({}), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_box({{0, 1}, {2, 2}}), std::invalid_argument);
    const SpectralDomain d = spectrum_interval(0, 1);
    for (double z : {0.0, 1.0, -0.5, 1.5}) {
        const double zz[1] = {z};
        CHECK_THROWS_AS(principal(d, zz), std::invalid_argument);
    }
}

TEST_CASE("eigenfunctions are normalised")
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const SpectralDomain d = spectrum_interval(-0.3, 1.7);
    const Interval side = d.sides()[0];
    for (std::size_t k = 0; k < d.modes().size(); ++k) {
        // split into half-waves so every panel is smooth
        const int n = d.modes()[k].wave_numbers[0];
        double total = 0;
        for (int j = 0; j < n; ++j) {
            const double a = side.a + side.length() * j / n, b = side.a + side.length() * (j + 1) / n;
            total += GK::integrate(
                [&](double x) {
                    const double z[1] = {x};
                    const double v = d.eigenfunction(k, z);
                    return v * v;
                },
                a, b, 10, 1e-14);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("eigenfunctions solve the eigenvalue equation")
{
    const SpectralDomain d = spectrum_interval(0, 1);
    const double h = 1e-4;
    for (std::size_t k = 0; k < 5; ++k) {
        const double lam = d.modes()[k].eigenvalue;
        for (int i = 1; i <= 100; ++i) {
            const double x = i / 101.0;
            const double zm[1] = {x - h}, z0[1] = {x}, zp[1] = {x + h};
            const double psi = d.eigenfunction(k, z0);
            if (std::abs(psi) < 1e-3) continue;
            const double second = (d.eigenfunction(k, zp) - 2 * psi + d.eigenfunction(k, zm)) / (h * h);
            CHECK(-0.5 * second == doctest::Approx(lam * psi).epsilon(1e-6));
        }
    }
}

TEST_CASE("principal eigenfunction is positive inside")
{
    const SpectralDomain d = spectrum_box({{0, 1}, {0, 2}});
    for (double x = 0.01; x < 1; x += 0.07)
        for (double y = 0.01; y < 2; y += 0.13) {
            const double z[2] = {x, y};
            CHECK(d.eigenfunction(0, z) > 0);
        }
}
