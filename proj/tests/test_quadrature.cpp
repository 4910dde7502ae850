#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lifetime/quadrature.hpp"

using namespace lifetime;
using std::numbers::pi;

constexpr double inf = std::numeric_limits<double>::infinity();

TEST_CASE("half Gaussian")
{
    const LogQuadrature q = integrate_log([](double x) { return -x * x; }, 0.0, inf, 0.5);
    CHECK(q.converged);
    CHECK(std::exp(q.log_value) == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-12));
    CHECK(q.rel_error < 1e-10);
}

TEST_CASE("values far below the underflow threshold")
{
    // ∫_0^∞ exp(-5000 - λ(x-3)²) = e^{-5000} √(π/λ) erfc(-3√λ)/2
    for (double lambda : {1.0, 1e4, 1e8}) {
        const LogQuadrature q =
            integrate_log([lambda](double x) { return -5000 - lambda * (x - 3) * (x - 3); }, 0.0, inf, 3.0);
        CHECK(std::abs(q.log_value - (-5000 + 0.5 * std::log(pi / lambda) + std::log(std::erfc(-3 * std::sqrt(lambda)) / 2))) <= 1e-9);
    }
}

TEST_CASE("off-centre peak and finite range")
{
    // ∫_0^10 x^4 e^{-x} dx = 24 (1 - e^{-10} Σ_{k≤4} 10^k/k!)
    const double exact = 24 * (1 - std::exp(-10.0) * (1 + 10 + 50 + 1000.0 / 6 + 10000.0 / 24));
    const LogQuadrature q = integrate_log([](double x) { return 4 * std::log(x) - x; }, 0.0, 10.0, 1.0);
    CHECK(std::exp(q.log_value) == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("jump at a breakpoint")
{
    auto f = [](double x) { return x < 2.0 ? 0.0 : -x; };
    const double bp[1] = {2.0};
    const LogQuadrature q = integrate_log(f, 0.0, inf, 1.0, {}, bp);
    CHECK(std::exp(q.log_value) == doctest::Approx(2 + std::exp(-2.0)).epsilon(1e-11));
}

TEST_CASE("zero integrand")
{
    const LogQuadrature q = integrate_log([](double) { return -inf; }, 0.0, 1.0, 0.5);
    CHECK(q.log_value == -inf);
}

TEST_CASE("log-sum-exp helpers")
{
    CHECK(log_add(-1000, -1000) == doctest::Approx(-1000 + std::log(2.0)).epsilon(1e-15));
    CHECK(log_add(-inf, 3.0) == 3.0);
    CHECK(log_add(800, 800) == doctest::Approx(800 + std::log(2.0)));
    const std::vector<double> v{-2000, -2000, -2000 + std::log(2.0)};
    CHECK(log_sum_exp(v) == doctest::Approx(-2000 + std::log(4.0)).epsilon(1e-15));
    CHECK(log_sum_exp(std::vector<double>{}) == -inf);
}
