#pragma once

// One-term Laplace asymptotics for the saddle integrals that govern the
// iterated lifetime, each paired with a log-space quadrature oracle.
//
//   inverse_square(λ)        ∫₀^∞ exp(-λ(x + x⁻²)) dx
//   saddle(a, b, t)          ∫₀^∞ exp(-a t/u² - b u) du
//   saddle_moment(a, b, t)   ∫₀^∞ u exp(-a t/u² - b u) du
//   cosine_moment(K, λ, t)   ∫₀^∞ x cos(πK/x) exp(-π² t/(2x²) - λ x) dx
//
// Asymptotic forms are returned as logarithms; the `*_value` helpers
// exponentiate for callers working in moderate ranges.

#include <functional>
#include <string>

namespace lifetime {

struct LaplaceProblem {
    std::function<double(double)> h;  ///< prefactor
    std::function<double(double)> f;  ///< exponent, maximised at x0
    double x0 = 0.0;
    double f2 = 0.0;                  ///< f''(x0) < 0
};

/// h(x0) e^{λ f(x0)} √(2π / (λ |f''(x0)|)). Throws if f2 >= 0 or h(x0) == 0.
double laplace_point(const LaplaceProblem& problem, double lambda);
double log_laplace_point(const LaplaceProblem& problem, double lambda);

/// Coefficient of t^{1/3} in the saddle exponent: 3 a^{1/3} b^{2/3} 2^{-2/3}.
double saddle_exponent_coefficient(double a, double b);

/// Location of the saddle of a t/u² + b u, namely (2 a t / b)^{1/3}.
double saddle_location(double a, double b, double t);

double log_asym_inverse_square(double lambda);
double log_asym_saddle(double a, double b, double t);
double log_asym_saddle_moment(double a, double b, double t);
/// Independent of K: the cosine factor tends to one at the saddle.
double log_asym_cosine_moment(double K, double lambda_d, double t);

double asym_inverse_square(double lambda);
double asym_saddle(double a, double b, double t);
double asym_saddle_moment(double a, double b, double t);
double asym_cosine_moment(double K, double lambda_d, double t);

enum class SaddleKind { inverse_square, saddle, saddle_moment, cosine_moment };

struct SaddleParams {
    double a = 0.0;       ///< saddle / saddle_moment
    double b = 0.0;       ///< saddle / saddle_moment; λ_D for cosine_moment
    double K = 0.0;       ///< cosine_moment
};

struct OracleEstimate {
    double log_value = 0.0;
    double rel_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Adaptive quadrature of the left-hand side in log space, centred on the
/// saddle with the core range [x0/50, 50 x0] and analytic tail bounds. The
/// cosine integrand changes sign for x < πK/(π/2); that region is integrated
/// directly and never contributes at the scales where the asymptotic applies.
OracleEstimate numeric_oracle(SaddleKind kind, const SaddleParams& params, double lambda_or_t,
                              double rel_tol = 1e-11);

/// Asymptotic counterpart of numeric_oracle, as a logarithm.
double log_asymptotic(SaddleKind kind, const SaddleParams& params, double lambda_or_t);

std::string to_string(SaddleKind kind);

}  // namespace lifetime
