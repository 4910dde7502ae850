#pragma once

// Tauberian correspondences between small-ball laws and Laplace transforms.

#include <span>
#include <vector>

namespace lifetime {

/// log P[ξ <= ε] ~ -C ε^{-α} |log ε|^β as ε → 0⁺.
struct SmallBallLaw {
    double alpha = 1.0;
    double beta = 0.0;
    double C = 1.0;
};

/// log E[e^{-λξ}] ~ -constant · λ^{exponent_power} (log λ)^{log_power} as λ → ∞.
struct LaplaceLaw {
    double exponent_power = 0.0;
    double log_power = 0.0;
    double constant = 0.0;

    /// Right-hand side evaluated at λ > 1.
    double log_transform(double lambda) const;
};

/// de Bruijn: constant (1+α)^{1-β/(1+α)} α^{-α/(1+α)} C^{1/(1+α)},
/// powers α/(1+α) and β/(1+α).
LaplaceLaw debruijn_forward(const SmallBallLaw& law);

/// Small-ball law of a density γ e^{-v} V with v(x) = C x^{-1/2} (log x^{-1/2})^{-2/p}.
SmallBallLaw stretched_small_ball(double C, double p);

/// Laplace law of the stretched small-ball density: power 1/3, log power -4/(3p).
LaplaceLaw stretched_laplace_constant(double C, double p);

struct PolynomialLaplaceRow {
    double lambda = 0.0;
    double log_transform = 0.0;  ///< log E[e^{-λξ}]
    double ratio = 0.0;          ///< log E[e^{-λξ}] / log λ
    double lower = 0.0;          ///< ratio implied by E >= e^{-1} λ^{-c/2}
    double upper = 0.0;          ///< ratio implied by the split E <= δ^{c/2} + c_N (δλ)^{-N}
};

/// Polynomial small-ball check on the law P[ξ <= x] = min(1, x^{c/2}), for which
/// E[e^{-λξ}] = Γ(c/2 + 1) λ^{-c/2} P(c/2, λ). Ratios tend to -c/2.
std::vector<PolynomialLaplaceRow> polynomial_laplace_table(double c, std::span<const double> lambdas, int N = 8);

/// log E[e^{-λξ}] for the synthetic polynomial law, closed form.
double log_polynomial_transform(double c, double lambda);

}  // namespace lifetime
