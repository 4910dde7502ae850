#include "lifetime/tauberian.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace lifetime {

double LaplaceLaw::log_transform(double lambda) const
{
    if (!(lambda > 1.0)) throw std::invalid_argument("log_transform: need lambda > 1");
    return -constant * std::pow(lambda, exponent_power) * std::pow(std::log(lambda), log_power);
}

LaplaceLaw debruijn_forward(const SmallBallLaw& law)
{
    if (!(law.alpha > 0.0)) throw std::invalid_argument("small-ball law: alpha must be positive");
    if (!(law.C > 0.0)) throw std::invalid_argument("small-ball law: C must be positive");
    const double a = law.alpha, b = law.beta;
    LaplaceLaw out;
    out.exponent_power = a / (1.0 + a);
    out.log_power = b / (1.0 + a);
    out.constant = std::pow(1.0 + a, 1.0 - b / (1.0 + a)) * std::pow(a, -a / (1.0 + a)) * std::pow(law.C, 1.0 / (1.0 + a));
    return out;
}

SmallBallLaw stretched_small_ball(double C, double p)
{
    if (!(C > 0.0) || !(p > 0.0)) throw std::invalid_argument("stretched small-ball law: need C > 0 and p > 0");
    // |log x^{1/2}|^{-2/p} = 2^{2/p} |log x|^{-2/p}
    return {0.5, -2.0 / p, C * std::pow(2.0, 2.0 / p)};
}

LaplaceLaw stretched_laplace_constant(double C, double p)
{
    if (!(C > 0.0) || !(p > 0.0)) throw std::invalid_argument("stretched Laplace law: need C > 0 and p > 0");
    LaplaceLaw out;
    out.exponent_power = 1.0 / 3.0;
    out.log_power = -4.0 / (3.0 * p);
    out.constant = std::pow(1.5, (4.0 + 3.0 * p) / (3.0 * p)) * std::cbrt(2.0) *
                   std::pow(C * std::pow(2.0, 2.0 / p), 2.0 / 3.0);
    return out;
}

double log_polynomial_transform(double c, double lambda)
{
    if (!(c > 0.0)) throw std::invalid_argument("polynomial law: c must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("polynomial law: lambda must be positive");
    const double a = c / 2.0;
    return std::lgamma(a + 1.0) - a * std::log(lambda) + std::log(boost::math::gamma_p(a, lambda));
}

std::vector<PolynomialLaplaceRow> polynomial_laplace_table(double c, std::span<const double> lambdas, int N)
{
    if (N < 1) throw std::invalid_argument("polynomial_laplace_table: N must be at least 1");
    const double a = c / 2.0;
    const double log_cN = N * (std::log(static_cast<double>(N)) - 1.0);
    std::vector<PolynomialLaplaceRow> rows;
    for (double lambda : lambdas) {
        if (!(lambda > 1.0)) throw std::invalid_argument("polynomial_laplace_table: need lambda > 1");
        PolynomialLaplaceRow r;
        r.lambda = lambda;
        const double L = std::log(lambda);
        r.log_transform = log_polynomial_transform(c, lambda);
        r.ratio = r.log_transform / L;
        // E >= e^{-λδ} P[ξ <= δ] at δ = 1/λ.
        r.lower = (-1.0 - a * L) / L;
        // Optimal split: δ^{a+N} = (N/a) c_N λ^{-N}.
        const double log_delta = (std::log(N / a) + log_cN - N * L) / (a + N);
        const double t1 = a * log_delta;
        const double t2 = log_cN - N * (log_delta + L);
        const double hi = std::max(t1, t2);
        r.upper = (hi + std::log1p(std::exp(std::min(t1, t2) - hi))) / L;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace lifetime
