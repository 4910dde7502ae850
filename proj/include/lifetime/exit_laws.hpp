#pragma once

// Exit-time laws of Brownian motion (generator ½Δ).
//
// The interval (0,1) law is evaluated in two regimes: the sine (spectral)
// series for s >= kSpectralCrossover and the method-of-images Gaussian series
// below it. Both are exponentially convergent on their side of the
// crossover, and each evaluation carries a rigorous bound on the dropped tail.

#include <span>
#include <stdexcept>

#include "lifetime/domain_spectra.hpp"

namespace lifetime {

inline constexpr double kSpectralCrossover = 0.1;

struct SeriesEvaluation {
    double value = 0.0;
    double truncation_bound = 0.0;
    int terms_used = 0;
};

/// Raised when an eigenfunction series is asked for a time outside the
/// window where it is numerically trustworthy.
class OutOfValidityWindow : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// P_x[η_(0,1) > s]. Requires 0 < x < 1 and s > 0.
SeriesEvaluation interval_survival(double x, double s, double tol = 1e-15);

/// P_x[η_(0,1) <= s], accurate in relative terms for tiny probabilities.
double interval_exit_cdf(double x, double s);

/// log P_x[η_(0,1) > s]; finite far below the double underflow threshold.
/// Accepts s >= 0 (returns 0 at s = 0).
double log_interval_survival(double x, double s);

/// log P_x[η_(0,1) > s] + π²s/2, free of cancellation at large s.
double log_interval_survival_excess(double x, double s);

/// Density of η_(0,1) under P_x at time s (analytic, both regimes).
double interval_exit_density(double x, double s);
double log_interval_exit_density(double x, double s);

/// P_0[η_(-u,v) > t] = P_{u/(u+v)}[η_(0,1) > t/(u+v)²].
SeriesEvaluation eta_survival(double u, double v, double t);
double log_eta_survival(double u, double v, double t);

/// d/du P_0[η_(-u,u) > t], by termwise differentiation.
double sym_eta_density_du(double u, double t);
double log_sym_eta_density_du(double u, double t);

/// P_z[τ_D <= t] from the eigenfunction expansion
///   P_z[τ_D > t] = Σ_k exp(-λ_k t) ψ_k(z) ∫ψ_k.
/// Valid for t >= 0.05·(smallest side)²; throws OutOfValidityWindow below.
SeriesEvaluation bm_exit_cdf(const SpectralDomain& domain, std::span<const double> z, double t);

/// Exit-time density Σ_k λ_k exp(-λ_k t) ψ_k(z) ∫ψ_k; same validity window.
SeriesEvaluation bm_exit_density(const SpectralDomain& domain, std::span<const double> z, double t);

double bm_validity_threshold(const SpectralDomain& domain);

/// Exact exit law of an interval or box at any t >= 0, built from the
/// dual-regime 1-D laws (box exit = minimum of independent coordinate exits).
double log_domain_survival(const SpectralDomain& domain, std::span<const double> z, double t);
double log_domain_exit_density(const SpectralDomain& domain, std::span<const double> z, double t);

}  // namespace lifetime
